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

/**
 * @file table_io.h
 * @brief Text format for calibration tables.
 *
 *   speed_grid: v1 v2 ...
 *   cmd_grid: c1 c2 ...
 *   <one line of |speed_grid| accelerations per command>
 *
 * `#` starts a comment anywhere on a line; blank lines are ignored. Numbers
 * are written with 9 significant digits.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace table {

std::string Serialize(const CalibrationTable& table);

/// Throws ParseError carrying the 1-based line number of the first problem.
CalibrationTable Deserialize(std::string_view text);

void SaveTable(const CalibrationTable& table, const std::string& path);
CalibrationTable LoadTable(const std::string& path);

/// Shortest representation of `value` at 9 significant digits.
std::string FormatNumber(double value);

}  // namespace table
}  // namespace autocalib
