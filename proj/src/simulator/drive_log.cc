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

#include "autocalib/simulator/drive_log.h"

#include <cmath>
#include <map>
#include <random>

#include "autocalib/preprocess/offline_filters.h"

namespace autocalib {
namespace simulator {

Coverage GridCoverage(std::span<const preprocess::DriveSample> samples,
                      std::span<const double> cmd_grid,
                      std::span<const double> speed_grid, std::size_t min_count,
                      double max_steer_deg) {
  std::map<preprocess::CellKey, std::size_t> counts;
  for (const auto& s : samples) {
    if (std::abs(s.theta) >= max_steer_deg) {
      continue;
    }
    if (const auto key = preprocess::AssignCell(cmd_grid, speed_grid, s.cmd, s.v)) {
      ++counts[*key];
    }
  }
  Coverage c;
  c.total = cmd_grid.size() * speed_grid.size();
  for (const auto& [key, n] : counts) {
    if (n >= min_count) {
      ++c.covered;
    }
  }
  return c;
}

std::vector<preprocess::DriveSample> GenerateDriveLog(
    const PlantConfig& plant, const DriverScript& script) {
  ValidatePlant(plant);
  std::mt19937_64 rng(script.seed);
  std::uniform_real_distribution<double> magnitude(0.0, script.max_cmd);
  std::uniform_real_distribution<double> dwell(script.min_dwell,
                                               script.max_dwell);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> turn(script.turn_min_deg,
                                              script.turn_max_deg);
  std::normal_distribution<double> wobble(0.0, script.straight_std_deg);
  ImuNoise imu(plant.imu_noise_std, rng());

  const double dt = plant.dt();
  const auto frames =
      static_cast<std::size_t>(std::lround(script.duration * plant.sample_rate));
  PlantState state = InitialState(plant);
  std::vector<preprocess::DriveSample> log;
  log.reserve(frames);

  double cmd = 0.0;
  double segment_end = 0.0;
  bool turning = false;
  double turn_deg = 0.0;
  const auto start_segment = [&](double t, int sign) {
    double m = magnitude(rng);
    if (sign == 0) {
      sign = unit(rng) < 0.5 ? -1 : 1;
    }
    cmd = sign * m;
    segment_end = t + dwell(rng);
    turning = unit(rng) < script.turn_probability;
    turn_deg = (unit(rng) < 0.5 ? -1.0 : 1.0) * turn(rng);
  };

  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= segment_end) {
      start_segment(t, 0);
    }
    if (cmd <= 0.0 && state.v <= 0.0) {
      start_segment(t, 1);
    } else if (cmd > 0.0 && state.v >= plant.v_max) {
      start_segment(t, -1);
    }
    preprocess::DriveSample s;
    s.t = t;
    s.cmd = cmd;
    s.v = state.v;
    s.theta = turning ? turn_deg : wobble(rng);
    s.mode = preprocess::DrivingMode::kManual;
    PlantStep(plant, cmd, dt, &state);
    s.acc = imu(state.acc);
    log.push_back(s);
  }
  return log;
}

}  // namespace simulator
}  // namespace autocalib
