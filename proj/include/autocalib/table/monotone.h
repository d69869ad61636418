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
#include <vector>

#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace table {

/// L2-nearest non-decreasing sequence (pool-adjacent-violators, unit weights).
std::vector<double> IsotonicRegression(std::span<const double> values);

/// Replaces every speed column by its isotonic fit in command. Tables that are
/// already monotone come back unchanged.
CalibrationTable ProjectMonotone(const CalibrationTable& table);

}  // namespace table
}  // namespace autocalib
