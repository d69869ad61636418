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

#include <span>

#include "autocalib/offline/regression.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace offline {

/// Evaluates the throttle model on positive commands and the brake model on
/// negative ones. The zero-command row is the mean of both models' values at
/// cmd = 0. The result is projected onto command-monotone tables.
table::CalibrationTable BuildTable(const RegressionModel& throttle,
                                   const RegressionModel& brake,
                                   std::span<const double> speed_grid,
                                   std::span<const double> cmd_grid);

}  // namespace offline
}  // namespace autocalib
