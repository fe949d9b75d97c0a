#pragma once

#include <string>
#include <vector>

namespace chaos::csv {

// %.{sig}g formatting; round-trips exactly at sig >= 17.
std::string format_double(double v, int sig);

// Writes to <path>.tmp and renames, so readers never see a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// Comma-split rows; no quoting (fields in this toolkit never contain commas).
std::vector<std::vector<std::string>> read_rows(const std::string& path);

bool looks_numeric(const std::string& field);
double parse_double(const std::string& field);  // throws errc::format

// Extracts one numeric column. `column` is a header name or a 0-based index;
// for headerless files an empty `column` means the last column.
std::vector<double> read_column(const std::string& path, const std::string& column);

}  // namespace chaos::csv
