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

#include "autocalib/offline/regression.h"

#include <cmath>

namespace autocalib {
namespace offline {

ThrottleBrakeSplit SplitThrottleBrake(
    std::span<const preprocess::DriveSample> samples, double deadband) {
  ThrottleBrakeSplit split;
  for (const auto& s : samples) {
    if (std::abs(s.cmd) < deadband) {
      continue;
    }
    (s.cmd > 0.0 ? split.throttle : split.brake).push_back({s.cmd, s.v, s.acc});
  }
  return split;
}

}  // namespace offline
}  // namespace autocalib
