#include "csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace chaos::csv {

std::string format_double(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io, "cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) throw error(errc::io, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw error(errc::io, "rename failed: " + tmp + " -> " + path + " (" + std::strerror(errno) + ")");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

bool looks_numeric(const std::string& field) {
  if (field.empty()) return false;
  char* end = nullptr;
  errno = 0;
  std::strtod(field.c_str(), &end);
  return end != field.c_str() && *end == '\0';
}

double parse_double(const std::string& field) {
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw error(errc::format, "not a number: '" + field + "'");
  }
  return v;
}

std::vector<double> read_column(const std::string& path, const std::string& column) {
  auto rows = read_rows(path);
  if (rows.empty()) throw error(errc::format, "empty file: " + path);

  bool has_header = false;
  for (const auto& f : rows[0]) {
    if (!looks_numeric(f)) has_header = true;
  }

  std::size_t idx = 0;
  std::size_t width = rows[0].size();
  if (has_header) {
    bool found = false;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
      if (rows[0][i] == column) {
        idx = i;
        found = true;
        break;
      }
    }
    if (!found) {
      if (looks_numeric(column)) {
        idx = static_cast<std::size_t>(parse_double(column));
      } else if (width == 1) {
        idx = 0;
      } else {
        throw error(errc::format, "column '" + column + "' not found in " + path);
      }
    }
  } else {
    // Headerless: empty spec means last column, otherwise a 0-based index.
    if (column.empty()) {
      idx = width - 1;
    } else if (looks_numeric(column)) {
      idx = static_cast<std::size_t>(parse_double(column));
    } else {
      idx = width - 1;
    }
  }
  if (idx >= width) throw error(errc::format, "column index out of range in " + path);

  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw error(errc::format, "ragged row " + std::to_string(r) + " in " + path);
    }
    values.push_back(parse_double(rows[r][idx]));
  }
  return values;
}

}  // namespace chaos::csv
