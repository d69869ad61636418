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

#include "autocalib/offline/table_builder.h"

#include <vector>

#include "autocalib/table/monotone.h"

namespace autocalib {
namespace offline {

table::CalibrationTable BuildTable(const RegressionModel& throttle,
                                   const RegressionModel& brake,
                                   std::span<const double> speed_grid,
                                   std::span<const double> cmd_grid) {
  std::vector<double> acc;
  acc.reserve(speed_grid.size() * cmd_grid.size());
  for (double cmd : cmd_grid) {
    for (double v : speed_grid) {
      if (cmd > 0.0) {
        acc.push_back(throttle.Predict(cmd, v));
      } else if (cmd < 0.0) {
        acc.push_back(brake.Predict(cmd, v));
      } else {
        acc.push_back(0.5 * (throttle.Predict(0.0, v) + brake.Predict(0.0, v)));
      }
    }
  }
  return table::ProjectMonotone(table::CalibrationTable(
      {speed_grid.begin(), speed_grid.end()}, {cmd_grid.begin(), cmd_grid.end()},
      std::move(acc)));
}

}  // namespace offline
}  // namespace autocalib
