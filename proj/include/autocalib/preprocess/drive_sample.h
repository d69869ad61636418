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

#include <string>
#include <string_view>
#include <vector>

namespace autocalib {
namespace preprocess {

enum class DrivingMode { kManual, kAuto };

std::string_view ToString(DrivingMode mode);

/// One timestamped log frame.
struct DriveSample {
  double t = 0.0;      // s
  double cmd = 0.0;    // signed pedal command, %; brake < 0
  double v = 0.0;      // m/s
  double acc = 0.0;    // IMU longitudinal acceleration, m/s^2
  double theta = 0.0;  // steering wheel angle, deg
  DrivingMode mode = DrivingMode::kManual;

  bool operator==(const DriveSample&) const = default;
};

/// CSV with header `t,cmd,v,acc,theta,mode`.
std::string WriteDriveLog(const std::vector<DriveSample>& samples);

/// Throws ParseError on malformed rows, non-finite values or timestamps that
/// do not strictly increase.
std::vector<DriveSample> ReadDriveLog(std::string_view csv);

std::vector<DriveSample> LoadDriveLog(const std::string& path);
void SaveDriveLog(const std::vector<DriveSample>& samples,
                  const std::string& path);

}  // namespace preprocess
}  // namespace autocalib
