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

#include "autocalib/simulator/plant.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace simulator {

namespace {

constexpr double kMinPowerSpeed = 0.1;  // m/s

bool MapIsValid(const ForceMap& map) {
  return map.force().front() >= 0.0;
}

}  // namespace

ForceMap::ForceMap(std::vector<double> pedal, std::vector<double> force)
    : pedal_(std::move(pedal)), force_(std::move(force)) {
  if (pedal_.size() < 2 || pedal_.size() != force_.size()) {
    throw std::invalid_argument("force map needs >= 2 matching points");
  }
  for (std::size_t i = 1; i < pedal_.size(); ++i) {
    if (!(pedal_[i] > pedal_[i - 1]) || force_[i] < force_[i - 1]) {
      throw std::invalid_argument("force map must be monotone");
    }
  }
}

ForceMap ForceMap::PowerLaw(double f_max, double exponent, double step) {
  const auto n = static_cast<std::size_t>(std::lround(100.0 / step));
  std::vector<double> pedal(n + 1);
  std::vector<double> force(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    pedal[i] = 100.0 * static_cast<double>(i) / static_cast<double>(n);
    force[i] = f_max * std::pow(pedal[i] / 100.0, exponent);
  }
  return ForceMap(std::move(pedal), std::move(force));
}

double ForceMap::operator()(double pedal) const {
  if (pedal <= pedal_.front()) {
    return force_.front();
  }
  if (pedal >= pedal_.back()) {
    return force_.back();
  }
  const auto hi = std::upper_bound(pedal_.begin(), pedal_.end(), pedal);
  const auto i = static_cast<std::size_t>(hi - pedal_.begin());
  const double w = (pedal - pedal_[i - 1]) / (pedal_[i] - pedal_[i - 1]);
  return force_[i - 1] + w * (force_[i] - force_[i - 1]);
}

void ValidatePlant(const PlantConfig& config) {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) {
      throw ConfigError("plant config: " + what);
    }
  };
  require(config.mass > 0.0 && config.load >= 0.0, "mass > 0, load >= 0");
  require(MapIsValid(config.throttle) && MapIsValid(config.brake),
          "force maps must be non-negative");
  require(config.max_power >= 0.0, "max_power >= 0");
  require(config.drag >= 0.0 && config.rolling_coeff >= 0.0,
          "drag and rolling >= 0");
  require(config.delay >= 0.0, "delay >= 0");
  require(config.imu_noise_std >= 0.0, "noise >= 0");
  require(config.sample_rate > 0.0, "sample_rate > 0");
  require(config.v_max > 0.0, "v_max > 0");
}

PlantConfig Ax1Preset(double load) {
  PlantConfig c;
  c.load = load;
  return c;
}

PlantConfig MkzPreset(double load) {
  PlantConfig c;
  c.mass = 1769.0;
  c.load = load;
  c.throttle = ForceMap::PowerLaw(6000.0, 1.2);
  c.brake = ForceMap::PowerLaw(12000.0, 1.2);
  c.max_power = 35000.0;
  c.drag = 0.45;
  c.rolling_coeff = 0.012;
  c.v_max = 10.0;
  return c;
}

PlantState InitialState(const PlantConfig& config, double v0) {
  PlantState s;
  s.v = v0;
  const auto n = static_cast<std::size_t>(std::lround(config.delay * config.sample_rate));
  s.pending.assign(n, 0.0);
  return s;
}

double NetForce(const PlantConfig& config, double cmd, double v) {
  double traction = 0.0;
  if (cmd >= 0.0) {
    traction = config.throttle(cmd);
    if (config.max_power > 0.0) {
      traction = std::min(traction,
                          config.max_power / std::max(v, kMinPowerSpeed));
    }
  } else {
    traction = -config.brake(-cmd);
  }
  return traction - config.drag * v * v -
         config.rolling_coeff * config.total_mass() * kGravity;
}

double SteadyStateAcc(const PlantConfig& config, double cmd, double v) {
  return NetForce(config, cmd, v) / config.total_mass();
}

table::CalibrationTable TrueTable(const PlantConfig& config,
                                  std::vector<double> speed_grid,
                                  std::vector<double> cmd_grid) {
  std::vector<double> acc;
  acc.reserve(speed_grid.size() * cmd_grid.size());
  for (double c : cmd_grid) {
    for (double v : speed_grid) {
      acc.push_back(SteadyStateAcc(config, c, v));
    }
  }
  return table::CalibrationTable(std::move(speed_grid), std::move(cmd_grid),
                                 std::move(acc));
}

void PlantStep(const PlantConfig& config, double cmd, double dt,
               PlantState* state) {
  double applied = cmd;
  if (!state->pending.empty()) {
    state->pending.push_back(cmd);
    applied = state->pending.front();
    state->pending.pop_front();
  }
  const double v = state->v;
  double a = SteadyStateAcc(config, applied, v);
  if (v <= 0.0 && a <= 0.0) {
    a = 0.0;
  }
  const double v_next = std::max(0.0, v + a * dt);
  state->acc = (v_next - v) / dt;
  state->v = v_next;
  state->station += v_next * dt;
  state->t += dt;
}

}  // namespace simulator
}  // namespace autocalib
