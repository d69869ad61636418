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
 * @file closed_loop.h
 * @brief Speed tracking harness: profile, controller, plant and metrics.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autocalib/online/online_calibrator.h"
#include "autocalib/online/online_update.h"
#include "autocalib/preprocess/online_filters.h"
#include "autocalib/simulator/plant.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace simulator {

/// Piecewise-linear desired speed over time.
class SpeedProfile {
 public:
  struct Knot {
    double t = 0.0;
    double v = 0.0;
  };

  /// Throws std::invalid_argument unless knot times strictly increase and
  /// speeds are non-negative.
  explicit SpeedProfile(std::vector<Knot> knots);

  double Speed(double t) const;
  double Acceleration(double t) const;
  double duration() const { return knots_.back().t; }
  double max_speed() const;

  /// Index of the stop-to-stop trip containing t. A trip starts at each knot
  /// where the speed leaves zero.
  std::size_t TripIndex(double t) const;

  const std::vector<Knot>& knots() const { return knots_; }

 private:
  std::vector<Knot> knots_;
  std::vector<double> trip_starts_;
};

struct TrapezoidOptions {
  double duration = 900.0;  // s
  double min_cruise_fraction = 0.3;  // of v_max
  double max_cruise_fraction = 0.9;
  double min_accel = 0.3;   // m/s^2
  double max_accel = 0.8;
  double min_cruise_time = 5.0;  // s
  double max_cruise_time = 15.0;
  double min_stop_time = 2.0;
  double max_stop_time = 4.0;
  std::uint64_t seed = 1;
};

/// Repeated accelerate, cruise, brake, stop trips within [0, v_max].
SpeedProfile TrapezoidProfile(double v_max, const TrapezoidOptions& options);

struct ControllerConfig {
  double kp = 0.8;  // %/(m/s)
  double ki = 0.1;  // %/m
  double preview = 0.2;  // s, look-ahead on the desired acceleration
  double hold_brake = -20.0;  // % applied when stopped at a stop
  double stop_speed = 0.05;   // m/s
};

struct TraceFrame {
  double t = 0.0;
  double v_des = 0.0;
  double v = 0.0;
  double cmd = 0.0;
  double acc = 0.0;  // measured
  double speed_error = 0.0;    // v_des - v
  double station_error = 0.0;  // expected - actual position within the trip
  std::size_t trip = 0;
};

struct TrackingMetrics {
  double speed_mae = 0.0;
  double speed_rmse = 0.0;
  double station_mae = 0.0;
  double station_rmse = 0.0;
  std::size_t frames = 0;
};

struct ErrorStats {
  double mae = 0.0;
  double rmse = 0.0;
};

/// MAE and RMSE of an error series. Throws EmptyTrace when empty.
ErrorStats Summarize(std::span<const double> errors);

/// Throws EmptyTrace on an empty trace.
TrackingMetrics ComputeMetrics(std::span<const TraceFrame> trace);

struct ClosedLoopOptions {
  ControllerConfig controller;
  std::optional<online::OnlineConfig> online;  // updater on when set
  // Frozen reference for the similarity term; defaults to the start table.
  std::optional<table::CalibrationTable> reference_table;
  preprocess::OnlineGateConfig gates;
  std::uint64_t seed = 1;  // IMU noise
  double diverge_error = 5.0;  // m/s
  double diverge_time = 1.0;   // s
  std::size_t snapshot_every = 0;  // cycles between table snapshots, 0 = none
};

struct ClosedLoopResult {
  TrackingMetrics metrics;
  std::vector<TraceFrame> trace;
  table::CalibrationTable final_table;
  std::vector<online::CycleRecord> updates;
  std::vector<std::uint32_t> visit_counts;  // empty when the updater is off
  std::vector<table::CalibrationTable> snapshots;
};

/**
 * @brief Drives the plant along the profile with a table-based controller.
 *
 * cmd = T^-1(v, a_des) + kp * e + ki * integral(e), with a_des taken
 * `preview` seconds ahead to cover the actuator delay. When the updater is
 * on, each cycle's measurements go through the online calibrator and the
 * controller uses the newest published table from the next cycle on.
 * Throws Diverged when |e| stays above diverge_error for diverge_time.
 */
ClosedLoopResult RunClosedLoop(const PlantConfig& plant,
                               const table::CalibrationTable& table,
                               const SpeedProfile& profile,
                               const ClosedLoopOptions& options);

/// Header and rows of the per-frame trace CSV.
std::string TraceCsv(std::span<const TraceFrame> trace);

}  // namespace simulator
}  // namespace autocalib
