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
 * @file drive_log.h
 * @brief Scripted manual driving for calibration data collection.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "autocalib/preprocess/drive_sample.h"
#include "autocalib/simulator/plant.h"

namespace autocalib {
namespace simulator {

/**
 * @brief Random pedal walk with dwell times.
 *
 * Each segment holds a command drawn uniformly from [-max_cmd, max_cmd] for a
 * random dwell. A segment ends early when the vehicle stops while braking or
 * passes v_max while on throttle; the next command then has the opposite
 * sign. Some segments steer hard enough to be removed by the steering gate.
 */
struct DriverScript {
  double duration = 1200.0;  // s
  double min_dwell = 0.5;    // s
  double max_dwell = 3.0;    // s
  double max_cmd = 100.0;    // %
  double turn_probability = 0.1;
  double turn_min_deg = 12.0;
  double turn_max_deg = 30.0;
  double straight_std_deg = 2.0;
  std::uint64_t seed = 1;
};

struct Coverage {
  std::size_t covered = 0;
  std::size_t total = 0;
  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(covered) / total;
  }
};

/// Fraction of grid cells holding at least `min_count` samples with
/// |theta| below max_steer_deg.
Coverage GridCoverage(std::span<const preprocess::DriveSample> samples,
                      std::span<const double> cmd_grid,
                      std::span<const double> speed_grid,
                      std::size_t min_count = 1, double max_steer_deg = 10.0);

/// Row k holds the command issued at t_k, the speed at t_k and the measured
/// acceleration over [t_k, t_k + dt]. Deterministic for a given seed.
std::vector<preprocess::DriveSample> GenerateDriveLog(
    const PlantConfig& plant, const DriverScript& script);

}  // namespace simulator
}  // namespace autocalib
