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

#include "autocalib/table/inverse_view.h"

#include <algorithm>
#include <string>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace table {

InverseTableView::InverseTableView(const CalibrationTable& table)
    : speed_grid_(table.speed_grid()), cmd_grid_(table.cmd_grid()) {
  columns_.reserve(table.num_speed());
  for (std::size_t j = 0; j < table.num_speed(); ++j) {
    std::vector<double> column = table.Column(j);
    for (std::size_t i = 1; i < column.size(); ++i) {
      if (column[i] < column[i - 1]) {
        throw MonotonicityViolation(
            "acceleration decreases between cmd " +
            std::to_string(cmd_grid_[i - 1]) + " and " +
            std::to_string(cmd_grid_[i]) + " at speed " +
            std::to_string(speed_grid_[j]));
      }
    }
    columns_.push_back(std::move(column));
  }
}

double InverseTableView::ColumnCmd(std::size_t speed_index,
                                   double acc) const {
  const std::vector<double>& column = columns_[speed_index];
  if (acc <= column.front()) {
    return cmd_grid_.front();
  }
  if (acc > column.back()) {
    return cmd_grid_.back();
  }
  const auto it = std::lower_bound(column.begin(), column.end(), acc);
  const auto upper = static_cast<std::size_t>(it - column.begin());
  if (column[upper] == acc) {
    return cmd_grid_[upper];
  }
  const std::size_t lower = upper - 1;
  const double w = (acc - column[lower]) / (column[upper] - column[lower]);
  return cmd_grid_[lower] + w * (cmd_grid_[upper] - cmd_grid_[lower]);
}

double InverseTableView::LookupCmd(double v, double acc) const {
  const Bracket b = Locate(speed_grid_, v);
  const double lo = ColumnCmd(b.lower, acc);
  if (b.weight == 0.0) {
    return lo;
  }
  const double hi = ColumnCmd(b.lower + 1, acc);
  return lo + (hi - lo) * b.weight;
}

}  // namespace table
}  // namespace autocalib
