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

#pragma once

#include <vector>

#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace table {

/**
 * @brief Controller-facing view of a calibration table: (speed, acc) -> cmd.
 *
 * Each speed column is inverted as a piecewise-linear function. Accelerations
 * outside a column's range clamp to the smallest or largest command. On flat
 * stretches the lowest command reaching the acceleration is returned.
 */
class InverseTableView {
 public:
  /// Throws MonotonicityViolation if any column decreases in command.
  explicit InverseTableView(const CalibrationTable& table);

  double LookupCmd(double v, double acc) const;

  /// Inverse of a single speed column.
  double ColumnCmd(std::size_t speed_index, double acc) const;

  const std::vector<double>& speed_grid() const { return speed_grid_; }

 private:
  std::vector<double> speed_grid_;
  std::vector<double> cmd_grid_;
  // columns_[j] holds the accelerations of speed column j, ordered by command.
  std::vector<std::vector<double>> columns_;
};

inline InverseTableView Invert(const CalibrationTable& table) {
  return InverseTableView(table);
}

}  // namespace table
}  // namespace autocalib
