#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "klrt/errors.hpp"
#include "klrt/survival_data.hpp"

namespace klrt {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace detail

// Reads observations from CSV with the exact header columns
// time,event,group (any column order). Errors carry 1-based line numbers.
inline std::vector<Observation> read_survival_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("parse_error", "line 1: missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
    line.erase(0, 3);  // UTF-8 BOM

  int col_time = -1, col_event = -1, col_group = -1;
  std::vector<std::string> header = detail::split_csv_line(line);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "time")
      col_time = static_cast<int>(c);
    else if (header[c] == "event")
      col_event = static_cast<int>(c);
    else if (header[c] == "group")
      col_group = static_cast<int>(c);
    else
      throw Error("parse_error", "line 1: unknown column '" + header[c] +
                                     "' (expected time,event,group)");
  }
  if (col_time < 0 || col_event < 0 || col_group < 0)
    throw Error("parse_error", "line 1: header must name the columns time,event,group");

  std::vector<Observation> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw Error("parse_error", "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    auto parse_int01 = [&](const std::string& s, const char* what) {
      if (s == "0") return 0;
      if (s == "1") return 1;
      throw Error("parse_error", "line " + std::to_string(line_no) + ": " + what +
                                     " must be 0 or 1, got '" + s + "'");
    };
    Observation o;
    {
      const std::string& s = fields[col_time];
      char* end = nullptr;
      o.time = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size())
        throw Error("parse_error",
                    "line " + std::to_string(line_no) + ": bad time value '" + s + "'");
      if (!(o.time > 0.0))
        throw Error("parse_error",
                    "line " + std::to_string(line_no) + ": time must be positive");
    }
    o.event = parse_int01(fields[col_event], "event") == 1;
    o.group = parse_int01(fields[col_group], "group");
    rows.push_back(o);
  }
  return rows;
}

inline std::vector<Observation> read_survival_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open input file: " + path);
  return read_survival_csv(in);
}

}  // namespace klrt
