/******************************************************************************
 * Copyright 2026 The Autocalib Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "autocalib/table/table_io.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace table {
namespace {

std::vector<double> ParseNumbers(std::string_view body, std::size_t line_no) {
  std::vector<double> out;
  std::string buffer(body);
  const char* p = buffer.c_str();
  while (true) {
    while (*p == ' ' || *p == '\t' || *p == '\r') {
      ++p;
    }
    if (*p == '\0') {
      break;
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(p, &end);
    if (end == p || errno == ERANGE) {
      throw ParseError(line_no, "expected a number near '" +
                                    std::string(p).substr(0, 16) + "'");
    }
    if (*end != '\0' && *end != ' ' && *end != '\t' && *end != '\r') {
      throw ParseError(line_no, "malformed number near '" +
                                    std::string(p).substr(0, 16) + "'");
    }
    out.push_back(v);
    p = end;
  }
  return out;
}

std::vector<double> ParseKeyed(std::string_view line, std::string_view key,
                               std::size_t line_no) {
  const std::string prefix = std::string(key) + ":";
  if (line.substr(0, prefix.size()) != prefix) {
    throw ParseError(line_no, "expected '" + prefix + "'");
  }
  return ParseNumbers(line.substr(prefix.size()), line_no);
}

void CheckAscending(const std::vector<double>& grid, std::string_view key,
                    std::size_t line_no) {
  if (grid.size() < 2) {
    throw ParseError(line_no, std::string(key) + " needs at least 2 entries");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ParseError(line_no, std::string(key) + " is not strictly increasing");
    }
  }
}

}  // namespace

std::string FormatNumber(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  if (std::string_view(buf) == "-0") {
    return "0";
  }
  return buf;
}

std::string Serialize(const CalibrationTable& table) {
  std::string out = "speed_grid:";
  for (double v : table.speed_grid()) {
    out += ' ';
    out += FormatNumber(v);
  }
  out += "\ncmd_grid:";
  for (double c : table.cmd_grid()) {
    out += ' ';
    out += FormatNumber(c);
  }
  out += '\n';
  for (std::size_t i = 0; i < table.num_cmd(); ++i) {
    for (std::size_t j = 0; j < table.num_speed(); ++j) {
      if (j > 0) {
        out += ' ';
      }
      out += FormatNumber(table.at(i, j));
    }
    out += '\n';
  }
  return out;
}

CalibrationTable Deserialize(std::string_view text) {
  std::vector<double> speed_grid;
  std::vector<double> cmd_grid;
  std::vector<double> acc;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::size_t content_lines = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = text.size();
    }
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (eol == text.size()) {
        break;
      }
      continue;
    }
    line = line.substr(line.find_first_not_of(" \t"));
    if (content_lines == 0) {
      speed_grid = ParseKeyed(line, "speed_grid", line_no);
      CheckAscending(speed_grid, "speed_grid", line_no);
    } else if (content_lines == 1) {
      cmd_grid = ParseKeyed(line, "cmd_grid", line_no);
      CheckAscending(cmd_grid, "cmd_grid", line_no);
    } else {
      const std::vector<double> row = ParseNumbers(line, line_no);
      if (row.size() != speed_grid.size()) {
        throw ParseError(line_no, "row has " + std::to_string(row.size()) +
                                      " values, expected " +
                                      std::to_string(speed_grid.size()));
      }
      if (rows == cmd_grid.size()) {
        throw ParseError(line_no, "more rows than cmd_grid entries");
      }
      acc.insert(acc.end(), row.begin(), row.end());
      ++rows;
    }
    ++content_lines;
    if (eol == text.size()) {
      break;
    }
  }
  if (content_lines < 2) {
    throw ParseError(line_no, "missing grid header");
  }
  if (rows != cmd_grid.size()) {
    throw ParseError(line_no, "expected " + std::to_string(cmd_grid.size()) +
                                  " rows, found " + std::to_string(rows));
  }
  try {
    return CalibrationTable(std::move(speed_grid), std::move(cmd_grid),
                            std::move(acc));
  } catch (const InvalidTable& e) {
    throw ParseError(line_no, e.what());
  }
}

void SaveTable(const CalibrationTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open " + path + " for writing");
  }
  out << Serialize(table);
}

CalibrationTable LoadTable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return Deserialize(buf.str());
}

}  // namespace table
}  // namespace autocalib
