#include "loadcast/text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "loadcast/error.hpp"

namespace loadcast {

std::string trim(std::string_view text) {
    std::size_t b = 0, e = text.size();
    while (b < e && (text[b] == ' ' || text[b] == '\t' || text[b] == '\r')) ++b;
    while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\t' || text[e - 1] == '\r')) --e;
    return std::string(text.substr(b, e - b));
}

std::vector<std::string> split(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delim) {
            out.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

double parse_double_field(std::string_view text, const std::string& context) {
    const std::string t = trim(text);
    double out = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ParseError(context + ": invalid number '" + t + "'");
    return out;
}

long long parse_int_field(std::string_view text, const std::string& context) {
    const std::string t = trim(text);
    long long out = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ParseError(context + ": invalid integer '" + t + "'");
    return out;
}

std::string format_double(double value) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, p);
}

void for_each_line(std::string_view text,
                   const std::function<void(std::size_t, std::string_view)>& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        if (start == text.size()) {
            break;
        }
        std::size_t nl = text.find('\n', start);
        std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(++line_no, line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace loadcast
