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

#include "autocalib/table/calibration_table.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace table {
namespace {

void CheckGrid(const std::vector<double>& grid, const char* name) {
  if (grid.size() < 2) {
    throw InvalidTable(std::string(name) + " needs at least 2 entries");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw InvalidTable(std::string(name) + " has a non-finite entry");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidTable(std::string(name) + " is not strictly increasing");
    }
  }
}

}  // namespace

CalibrationTable::CalibrationTable(std::vector<double> speed_grid,
                                   std::vector<double> cmd_grid,
                                   std::vector<double> acc)
    : speed_grid_(std::move(speed_grid)),
      cmd_grid_(std::move(cmd_grid)),
      acc_(std::move(acc)) {
  CheckGrid(speed_grid_, "speed_grid");
  CheckGrid(cmd_grid_, "cmd_grid");
  if (acc_.size() != speed_grid_.size() * cmd_grid_.size()) {
    throw InvalidTable("acceleration matrix is " + std::to_string(acc_.size()) +
                       " values, expected " +
                       std::to_string(speed_grid_.size() * cmd_grid_.size()));
  }
  for (double a : acc_) {
    if (!std::isfinite(a)) {
      throw InvalidTable("acceleration matrix has a non-finite entry");
    }
  }
}

CalibrationTable CalibrationTable::Filled(std::vector<double> speed_grid,
                                          std::vector<double> cmd_grid,
                                          double value) {
  const std::size_t n = speed_grid.size() * cmd_grid.size();
  return CalibrationTable(std::move(speed_grid), std::move(cmd_grid),
                          std::vector<double>(n, value));
}

std::vector<double> CalibrationTable::Column(std::size_t speed_index) const {
  std::vector<double> column(num_cmd());
  for (std::size_t i = 0; i < num_cmd(); ++i) {
    column[i] = at(i, speed_index);
  }
  return column;
}

bool CalibrationTable::IsMonotone() const {
  for (std::size_t j = 0; j < num_speed(); ++j) {
    for (std::size_t i = 1; i < num_cmd(); ++i) {
      if (at(i, j) < at(i - 1, j)) {
        return false;
      }
    }
  }
  return true;
}

double CalibrationTable::LookupAcc(double cmd, double v) const {
  const Bracket c = Locate(cmd_grid_, cmd);
  const Bracket s = Locate(speed_grid_, v);
  const double a00 = at(c.lower, s.lower);
  const double a01 = at(c.lower, s.lower + 1);
  const double a10 = at(c.lower + 1, s.lower);
  const double a11 = at(c.lower + 1, s.lower + 1);
  const double lo = a00 + (a01 - a00) * s.weight;
  const double hi = a10 + (a11 - a10) * s.weight;
  return lo + (hi - lo) * c.weight;
}

CalibrationTable CalibrationTable::WithValues(std::vector<double> acc) const {
  return CalibrationTable(speed_grid_, cmd_grid_, std::move(acc));
}

std::vector<double> UniformGrid(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  }
  grid.back() = hi;
  return grid;
}

std::vector<double> DefaultSpeedGrid(double v_max) {
  return UniformGrid(0.0, v_max, 0.2);
}

std::vector<double> DefaultCmdGrid() { return UniformGrid(-100.0, 100.0, 5.0); }

Bracket Locate(std::span<const double> grid, double x) {
  if (x <= grid.front()) {
    return {0, 0.0};
  }
  if (x >= grid.back()) {
    return {grid.size() - 2, 1.0};
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const auto upper = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lower = upper - 1;
  return {lower, (x - grid[lower]) / (grid[upper] - grid[lower])};
}

std::size_t NearestIndex(std::span<const double> grid, double x) {
  const Bracket b = Locate(grid, x);
  return b.weight > 0.5 ? b.lower + 1 : b.lower;
}

}  // namespace table
}  // namespace autocalib
