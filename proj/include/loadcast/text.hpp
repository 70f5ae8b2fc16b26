#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace loadcast {

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view line, char delim);

// Strict full-string parse; `context` names the source location for errors.
double parse_double_field(std::string_view text, const std::string& context);
long long parse_int_field(std::string_view text, const std::string& context);

// Shortest round-trip representation (std::to_chars).
std::string format_double(double value);

// Calls fn(line_number, line) for every line; line numbers start at 1 and
// trailing '\r' is stripped.
void for_each_line(std::string_view text,
                   const std::function<void(std::size_t, std::string_view)>& fn);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace loadcast
