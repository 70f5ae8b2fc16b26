#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "loadcast/error.hpp"

namespace loadcast {

// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double value = 0.0)
        : rows(r), cols(c), data(r * c, value) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in) {
        Matrix m(rows_in.size(), rows_in.empty() ? 0 : rows_in.front().size());
        for (std::size_t i = 0; i < rows_in.size(); ++i) {
            if (rows_in[i].size() != m.cols)
                throw DimensionError("Matrix::from_rows: ragged input");
            std::copy(rows_in[i].begin(), rows_in[i].end(), m.data.begin() + i * m.cols);
        }
        return m;
    }
};

}  // namespace loadcast
