#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace gsana::text {

// Splits on TAB when the line contains one, otherwise on runs of blanks.
std::vector<std::string_view> split_fields(std::string_view line);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Strips a trailing '\r' and reports whether the line carries content
// (non-blank and not a '#' comment).
bool is_content_line(std::string& line);

double parse_double(std::string_view s);  // throws std::invalid_argument

// Open a file or throw InputError naming it.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace gsana::text
