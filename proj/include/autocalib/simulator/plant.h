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
 * @file plant.h
 * @brief Longitudinal vehicle model used as ground truth.
 *
 * Point mass driven by a pedal force map, with quadratic drag and rolling
 * resistance proportional to the total weight. Pedal commands reach the
 * wheels through a fixed transport delay.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <vector>

#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace simulator {

inline constexpr double kGravity = 9.81;

/// Monotone piecewise-linear map from pedal travel (%, 0..100) to force (N).
class ForceMap {
 public:
  /// Throws std::invalid_argument unless pedal is strictly increasing,
  /// force is non-decreasing and the sizes match.
  ForceMap(std::vector<double> pedal, std::vector<double> force);

  /// Samples f_max * (pedal / 100)^exponent every `step` percent.
  static ForceMap PowerLaw(double f_max, double exponent, double step = 5.0);

  /// Clamped linear interpolation.
  double operator()(double pedal) const;

  const std::vector<double>& pedal() const { return pedal_; }
  const std::vector<double>& force() const { return force_; }

 private:
  std::vector<double> pedal_;
  std::vector<double> force_;
};

struct PlantConfig {
  double mass = 300.0;       // kg
  double load = 0.0;         // kg
  ForceMap throttle = ForceMap::PowerLaw(1250.0, 1.2);
  ForceMap brake = ForceMap::PowerLaw(1800.0, 1.2);
  double max_power = 1875.0;     // W, caps throttle force at speed; 0 = none
  double drag = 0.3;             // N s^2 / m^2
  double rolling_coeff = 0.01;   // rolling force = coeff * (mass + load) * g
  double delay = 0.2;            // s
  double imu_noise_std = 0.05;   // m/s^2
  double sample_rate = 100.0;    // Hz
  double v_max = 3.0;            // m/s

  double total_mass() const { return mass + load; }
  double dt() const { return 1.0 / sample_rate; }
};

/// Throws ConfigError when masses, maps, delay or rate are invalid.
void ValidatePlant(const PlantConfig& config);

/// Small electric delivery vehicle, 300 kg, 3 m/s top speed.
PlantConfig Ax1Preset(double load = 0.0);

/// Passenger sedan, 1769 kg, 10 m/s top speed.
PlantConfig MkzPreset(double load = 0.0);

struct PlantState {
  double t = 0.0;
  double v = 0.0;        // m/s, never negative
  double station = 0.0;  // m
  double acc = 0.0;      // acceleration over the last step, m/s^2
  std::deque<double> pending;  // commands in the actuator delay line
};

/// Initial state at rest with the delay line filled with zero commands.
PlantState InitialState(const PlantConfig& config, double v0 = 0.0);

/// Net longitudinal force for a command already at the wheels, v > 0.
double NetForce(const PlantConfig& config, double cmd, double v);

/// Acceleration produced by a steady command at speed v while moving.
/// At v = 0 this is the limit from positive speeds.
double SteadyStateAcc(const PlantConfig& config, double cmd, double v);

/// SteadyStateAcc sampled on the given grids.
table::CalibrationTable TrueTable(const PlantConfig& config,
                                  std::vector<double> speed_grid,
                                  std::vector<double> cmd_grid);

/**
 * @brief Advances the plant by dt with semi-implicit Euler.
 *
 * `cmd` enters the delay line and the oldest command acts on the vehicle. A
 * vehicle at rest stays at rest unless the net force is positive, and speed
 * never goes below zero.
 */
void PlantStep(const PlantConfig& config, double cmd, double dt,
               PlantState* state);

/// Additive white Gaussian IMU noise.
class ImuNoise {
 public:
  ImuNoise(double std_dev, std::uint64_t seed) : std_(std_dev), rng_(seed) {}

  double operator()(double acc) {
    return std_ > 0.0 ? acc + dist_(rng_) * std_ : acc;
  }

 private:
  double std_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace simulator
}  // namespace autocalib
