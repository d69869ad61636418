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

#include "autocalib/preprocess/drive_sample.h"

namespace autocalib {
namespace offline {

struct RegressionSample {
  double cmd = 0.0;  // %
  double v = 0.0;    // m/s
  double acc = 0.0;  // m/s^2
};

/// Learned forward map (cmd, v) -> acc.
class RegressionModel {
 public:
  virtual ~RegressionModel() = default;
  virtual double Predict(double cmd, double v) const = 0;
};

struct ThrottleBrakeSplit {
  std::vector<RegressionSample> throttle;  // cmd > 0
  std::vector<RegressionSample> brake;     // cmd < 0
};

/// Splits cleaned samples by pedal. Commands with |cmd| < deadband are
/// dropped: near zero the vehicle creeps or coasts regardless of pedal.
ThrottleBrakeSplit SplitThrottleBrake(
    std::span<const preprocess::DriveSample> samples, double deadband = 2.0);

}  // namespace offline
}  // namespace autocalib
