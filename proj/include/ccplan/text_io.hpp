#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ccplan {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

double parse_double(std::string_view text, std::string_view what);

// Splits one CSV record on commas. Quoted fields may contain commas; a
// doubled quote inside a quoted field yields one quote.
std::vector<std::string> split_csv_line(std::string_view line);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ccplan
