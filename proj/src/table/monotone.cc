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

#include "autocalib/table/monotone.h"

#include <cstddef>

namespace autocalib {
namespace table {

std::vector<double> IsotonicRegression(std::span<const double> values) {
  // Stack of pooled blocks: running sum and size.
  struct Block {
    double sum;
    std::size_t size;
    double mean() const { return sum / static_cast<double>(size); }
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block top = blocks.back();
      blocks.pop_back();
      blocks.back().sum += top.sum;
      blocks.back().size += top.size;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(values.size());
  for (const Block& b : blocks) {
    const double m = b.mean();
    fitted.insert(fitted.end(), b.size, m);
  }
  return fitted;
}

CalibrationTable ProjectMonotone(const CalibrationTable& table) {
  if (table.IsMonotone()) {
    return table;
  }
  std::vector<double> acc(table.values().begin(), table.values().end());
  const std::size_t ns = table.num_speed();
  for (std::size_t j = 0; j < ns; ++j) {
    const std::vector<double> column = table.Column(j);
    bool sorted = true;
    for (std::size_t i = 1; i < column.size() && sorted; ++i) {
      sorted = column[i] >= column[i - 1];
    }
    if (sorted) {
      continue;
    }
    const std::vector<double> fitted = IsotonicRegression(column);
    for (std::size_t i = 0; i < fitted.size(); ++i) {
      acc[i * ns + j] = fitted[i];
    }
  }
  return table.WithValues(std::move(acc));
}

}  // namespace table
}  // namespace autocalib
