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

#include "autocalib/preprocess/drive_sample.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "autocalib/common/errors.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace preprocess {
namespace {

constexpr std::string_view kHeader = "t,cmd,v,acc,theta,mode";

double ParseField(std::string_view field, std::size_t line_no) {
  const std::string buf(field);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw ParseError(line_no, "bad numeric field '" + buf + "'");
  }
  return v;
}

}  // namespace

std::string_view ToString(DrivingMode mode) {
  return mode == DrivingMode::kAuto ? "AUTO" : "MANUAL";
}

std::string WriteDriveLog(const std::vector<DriveSample>& samples) {
  using table::FormatNumber;
  std::string out(kHeader);
  out += '\n';
  for (const DriveSample& s : samples) {
    out += FormatNumber(s.t) + ',' + FormatNumber(s.cmd) + ',' +
           FormatNumber(s.v) + ',' + FormatNumber(s.acc) + ',' +
           FormatNumber(s.theta) + ',' + std::string(ToString(s.mode)) + '\n';
  }
  return out;
}

std::vector<DriveSample> ReadDriveLog(std::string_view csv) {
  std::vector<DriveSample> samples;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) {
      eol = csv.size();
    }
    std::string_view line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    std::string_view fields[6];
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (n == 6) {
        throw ParseError(line_no, "too many fields");
      }
      if (comma == std::string_view::npos) {
        fields[n++] = line.substr(start);
        break;
      }
      fields[n++] = line.substr(start, comma - start);
      start = comma + 1;
    }
    if (n != 6) {
      throw ParseError(line_no, "expected 6 fields, found " + std::to_string(n));
    }
    DriveSample s;
    s.t = ParseField(fields[0], line_no);
    s.cmd = ParseField(fields[1], line_no);
    s.v = ParseField(fields[2], line_no);
    s.acc = ParseField(fields[3], line_no);
    s.theta = ParseField(fields[4], line_no);
    if (fields[5] == "AUTO") {
      s.mode = DrivingMode::kAuto;
    } else if (fields[5] == "MANUAL") {
      s.mode = DrivingMode::kManual;
    } else {
      throw ParseError(line_no, "unknown mode '" + std::string(fields[5]) + "'");
    }
    if (!samples.empty() && !(s.t > samples.back().t)) {
      throw ParseError(line_no, "timestamps must strictly increase");
    }
    samples.push_back(s);
  }
  if (!header_seen) {
    throw ParseError(line_no, "missing header");
  }
  return samples;
}

std::vector<DriveSample> LoadDriveLog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ReadDriveLog(buf.str());
}

void SaveDriveLog(const std::vector<DriveSample>& samples,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open " + path + " for writing");
  }
  out << WriteDriveLog(samples);
}

}  // namespace preprocess
}  // namespace autocalib
