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
 * @file calibration_table.h
 * @brief Longitudinal calibration table: (command, speed) -> acceleration.
 *
 * Commands live on one signed axis in percent of pedal travel: brake is
 * negative, throttle positive. Accelerations are stored row-major with one
 * row per command and one column per speed.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace autocalib {
namespace table {

class CalibrationTable {
 public:
  /// Throws InvalidTable when the grids or the value matrix are malformed.
  CalibrationTable(std::vector<double> speed_grid, std::vector<double> cmd_grid,
                   std::vector<double> acc);

  /// Every cell set to `value`.
  static CalibrationTable Filled(std::vector<double> speed_grid,
                                 std::vector<double> cmd_grid, double value);

  const std::vector<double>& speed_grid() const { return speed_grid_; }
  const std::vector<double>& cmd_grid() const { return cmd_grid_; }
  std::size_t num_cmd() const { return cmd_grid_.size(); }
  std::size_t num_speed() const { return speed_grid_.size(); }
  std::size_t num_cells() const { return acc_.size(); }

  double at(std::size_t cmd_index, std::size_t speed_index) const {
    return acc_[cmd_index * speed_grid_.size() + speed_index];
  }
  std::span<const double> values() const { return acc_; }

  /// Accelerations at one speed, ordered by command.
  std::vector<double> Column(std::size_t speed_index) const;

  /// True when every column is non-decreasing in command.
  bool IsMonotone() const;

  /// Bilinear interpolation; queries outside the grid clamp to its edges.
  double LookupAcc(double cmd, double v) const;

  /// Copy of this table with a new value matrix on the same grids.
  CalibrationTable WithValues(std::vector<double> acc) const;

  bool operator==(const CalibrationTable& other) const = default;

 private:
  std::vector<double> speed_grid_;
  std::vector<double> cmd_grid_;
  std::vector<double> acc_;
};

/// Evenly spaced grid from `lo` to `hi` inclusive with the given step.
std::vector<double> UniformGrid(double lo, double hi, double step);

/// Speeds every 0.2 m/s over [0, v_max].
std::vector<double> DefaultSpeedGrid(double v_max);

/// Commands every 5 % over [-100, 100].
std::vector<double> DefaultCmdGrid();

/// Locates `x` on an ascending grid. Returns the lower bracket index and the
/// fractional position inside the bracket, clamped to [0, 1].
struct Bracket {
  std::size_t lower;
  double weight;
};
Bracket Locate(std::span<const double> grid, double x);

/// Index of the grid point closest to `x` (ties go to the lower point).
std::size_t NearestIndex(std::span<const double> grid, double x);

}  // namespace table
}  // namespace autocalib
