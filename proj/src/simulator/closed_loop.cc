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

#include "autocalib/simulator/closed_loop.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "autocalib/common/errors.h"
#include "autocalib/table/inverse_view.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace simulator {

SpeedProfile::SpeedProfile(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) {
    throw std::invalid_argument("speed profile needs >= 2 knots");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].v < 0.0 || (i > 0 && !(knots_[i].t > knots_[i - 1].t))) {
      throw std::invalid_argument("speed profile knots must be increasing");
    }
    if (i + 1 < knots_.size() && knots_[i].v == 0.0 && knots_[i + 1].v > 0.0) {
      trip_starts_.push_back(knots_[i].t);
    }
  }
}

double SpeedProfile::Speed(double t) const {
  if (t <= knots_.front().t) {
    return knots_.front().v;
  }
  if (t >= knots_.back().t) {
    return knots_.back().v;
  }
  const auto hi = std::upper_bound(
      knots_.begin(), knots_.end(), t,
      [](double x, const Knot& k) { return x < k.t; });
  const Knot& b = *hi;
  const Knot& a = *(hi - 1);
  return a.v + (t - a.t) / (b.t - a.t) * (b.v - a.v);
}

double SpeedProfile::Acceleration(double t) const {
  if (t < knots_.front().t || t >= knots_.back().t) {
    return 0.0;
  }
  const auto hi = std::upper_bound(
      knots_.begin(), knots_.end(), t,
      [](double x, const Knot& k) { return x < k.t; });
  const Knot& b = *hi;
  const Knot& a = *(hi - 1);
  return (b.v - a.v) / (b.t - a.t);
}

double SpeedProfile::max_speed() const {
  double m = 0.0;
  for (const Knot& k : knots_) {
    m = std::max(m, k.v);
  }
  return m;
}

std::size_t SpeedProfile::TripIndex(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(trip_starts_.begin(), trip_starts_.end(), t) -
      trip_starts_.begin());
}

SpeedProfile TrapezoidProfile(double v_max, const TrapezoidOptions& o) {
  std::mt19937_64 rng(o.seed);
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::vector<SpeedProfile::Knot> knots = {{0.0, 0.0}};
  double t = 0.0;
  while (t < o.duration) {
    const double stop = uniform(o.min_stop_time, o.max_stop_time);
    const double cruise_v =
        v_max * uniform(o.min_cruise_fraction, o.max_cruise_fraction);
    const double up = cruise_v / uniform(o.min_accel, o.max_accel);
    const double cruise = uniform(o.min_cruise_time, o.max_cruise_time);
    const double down = cruise_v / uniform(o.min_accel, o.max_accel);
    t += stop;
    knots.push_back({t, 0.0});
    t += up;
    knots.push_back({t, cruise_v});
    t += cruise;
    knots.push_back({t, cruise_v});
    t += down;
    knots.push_back({t, 0.0});
  }
  return SpeedProfile(std::move(knots));
}

ErrorStats Summarize(std::span<const double> errors) {
  if (errors.empty()) {
    throw EmptyTrace("no errors to summarize");
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (double e : errors) {
    abs_sum += std::abs(e);
    sq_sum += e * e;
  }
  const auto n = static_cast<double>(errors.size());
  return {abs_sum / n, std::sqrt(sq_sum / n)};
}

TrackingMetrics ComputeMetrics(std::span<const TraceFrame> trace) {
  if (trace.empty()) {
    throw EmptyTrace("empty closed-loop trace");
  }
  std::vector<double> speed(trace.size());
  std::vector<double> station(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    speed[i] = trace[i].speed_error;
    station[i] = trace[i].station_error;
  }
  const ErrorStats s = Summarize(speed);
  const ErrorStats p = Summarize(station);
  return {s.mae, s.rmse, p.mae, p.rmse, trace.size()};
}

ClosedLoopResult RunClosedLoop(const PlantConfig& plant,
                               const table::CalibrationTable& table,
                               const SpeedProfile& profile,
                               const ClosedLoopOptions& options) {
  ValidatePlant(plant);
  const ControllerConfig& ctl = options.controller;
  std::optional<online::OnlineCalibrator> calibrator;
  std::optional<table::InverseTableView> fixed_inverse;
  if (options.online) {
    calibrator.emplace(options.reference_table.value_or(table), table,
                       *options.online, options.gates);
  } else {
    fixed_inverse.emplace(table);
  }

  ClosedLoopResult result{{}, {}, table, {}, {}, {}};
  const double dt = plant.dt();
  const auto frames = static_cast<std::size_t>(
      std::floor(profile.duration() * plant.sample_rate)) + 1;
  result.trace.reserve(frames);
  PlantState state = InitialState(plant);
  ImuNoise imu(plant.imu_noise_std, options.seed);
  double integral = 0.0;
  double expected_station = 0.0;
  double trip_origin = 0.0;
  std::size_t trip = 0;
  double diverged_for = 0.0;
  double measured_acc = 0.0;

  for (std::size_t k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double v_des = profile.Speed(t);
    const double a_des = profile.Acceleration(t + ctl.preview);
    const double e = v_des - state.v;

    const std::size_t trip_now = profile.TripIndex(t);
    if (trip_now != trip) {
      trip = trip_now;
      expected_station = 0.0;
      trip_origin = state.station;
    } else if (k > 0) {
      expected_station += v_des * dt;
    }

    double cmd = 0.0;
    const bool holding = v_des <= 0.0 && a_des <= 0.0 && state.v < ctl.stop_speed;
    if (holding) {
      integral = 0.0;
      cmd = ctl.hold_brake;
    } else {
      integral += e * dt;
      const auto snapshot =
          calibrator ? calibrator->publisher().Current() : nullptr;
      const table::InverseTableView& inverse =
          snapshot ? snapshot->inverse : *fixed_inverse;
      cmd = inverse.LookupCmd(state.v, a_des) + ctl.kp * e + ctl.ki * integral;
      cmd = std::clamp(cmd, -100.0, 100.0);
    }

    TraceFrame f;
    f.t = t;
    f.v_des = v_des;
    f.v = state.v;
    f.cmd = cmd;
    f.acc = measured_acc;
    f.speed_error = e;
    f.station_error = expected_station - (state.station - trip_origin);
    f.trip = trip;
    result.trace.push_back(f);

    if (calibrator) {
      preprocess::ControlFrame frame;
      frame.t = t;
      frame.cmd = cmd;
      frame.v = state.v;
      frame.v_des = v_des;
      frame.acc = measured_acc;
      if (auto rec = calibrator->Step(frame)) {
        result.updates.push_back(*rec);
      }
      if (options.snapshot_every > 0 && k % options.snapshot_every == 0) {
        result.snapshots.push_back(calibrator->publisher().Current()->table);
      }
    }

    diverged_for = std::abs(e) > options.diverge_error ? diverged_for + dt : 0.0;
    if (diverged_for >= options.diverge_time) {
      throw Diverged("speed error above " +
                     std::to_string(options.diverge_error) + " m/s for " +
                     std::to_string(options.diverge_time) + " s at t = " +
                     std::to_string(t));
    }

    PlantStep(plant, cmd, dt, &state);
    measured_acc = imu(state.acc);
  }

  result.metrics = ComputeMetrics(result.trace);
  if (calibrator) {
    result.final_table = calibrator->publisher().Current()->table;
    result.visit_counts = calibrator->visit_counts();
  }
  return result;
}

std::string TraceCsv(std::span<const TraceFrame> trace) {
  using table::FormatNumber;
  std::ostringstream out;
  out << "t,v_des,v,cmd,acc,speed_error,station_error,trip\n";
  for (const TraceFrame& f : trace) {
    out << FormatNumber(f.t) << ',' << FormatNumber(f.v_des) << ','
        << FormatNumber(f.v) << ',' << FormatNumber(f.cmd) << ','
        << FormatNumber(f.acc) << ',' << FormatNumber(f.speed_error) << ','
        << FormatNumber(f.station_error) << ',' << f.trip << '\n';
  }
  return out.str();
}

}  // namespace simulator
}  // namespace autocalib
