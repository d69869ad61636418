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

#include "autocalib/preprocess/online_filters.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace preprocess {
namespace {

constexpr double kTimeEps = 1e-9;

double MedianPeriod(std::span<const DriveSample> frames) {
  if (frames.size() < 2) {
    return 0.0;
  }
  std::vector<double> gaps(frames.size() - 1);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    gaps[i - 1] = frames[i].t - frames[i - 1].t;
  }
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return gaps[gaps.size() / 2];
}

}  // namespace

std::optional<std::size_t> NearestTime(std::span<const double> times, double t,
                                       double tolerance) {
  if (times.empty()) {
    return std::nullopt;
  }
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  std::size_t best;
  if (it == times.end()) {
    best = times.size() - 1;
  } else if (it == times.begin()) {
    best = 0;
  } else {
    const auto hi = static_cast<std::size_t>(it - times.begin());
    best = (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
  }
  if (std::abs(times[best] - t) > tolerance + kTimeEps) {
    return std::nullopt;
  }
  return best;
}

DelayPair MatchDelayed(const DriveSample& command,
                       std::span<const DriveSample> imu, double delay) {
  std::vector<double> times(imu.size());
  std::transform(imu.begin(), imu.end(), times.begin(),
                 [](const DriveSample& s) { return s.t; });
  const auto idx = NearestTime(times, command.t + delay, 0.5 * MedianPeriod(imu));
  if (!idx) {
    throw NoMatch("no IMU frame near t = " + std::to_string(command.t + delay));
  }
  return {command, imu[*idx].t, imu[*idx].acc};
}

std::vector<DelayPair> AlignDelay(std::span<const DriveSample> commands,
                                  std::span<const DriveSample> imu,
                                  double delay) {
  std::vector<DelayPair> pairs;
  if (imu.empty()) {
    return pairs;
  }
  std::vector<double> times(imu.size());
  std::transform(imu.begin(), imu.end(), times.begin(),
                 [](const DriveSample& s) { return s.t; });
  const double half = 0.5 * MedianPeriod(imu);
  pairs.reserve(commands.size());
  for (const DriveSample& c : commands) {
    const double target = c.t + delay;
    if (target > times.back() + kTimeEps) {
      continue;
    }
    if (const auto idx = NearestTime(times, target, half)) {
      pairs.push_back({c, imu[*idx].t, imu[*idx].acc});
    }
  }
  return pairs;
}

bool CommandConsistencyGate(std::span<const double> times,
                            std::span<const double> cmds, double t_ref,
                            double max_gap, double window) {
  if (times.empty() || times.front() > t_ref - window + kTimeEps ||
      times.back() < t_ref + window - kTimeEps) {
    throw InsufficientHistory("history does not cover t_ref +/- " +
                              std::to_string(window) + " s");
  }
  const auto ref = NearestTime(times, t_ref, window);
  const double cmd_ref = cmds[*ref];
  const auto first = std::lower_bound(times.begin(), times.end(),
                                      t_ref - window - kTimeEps);
  for (auto it = first; it != times.end() && *it <= t_ref + window + kTimeEps;
       ++it) {
    const auto i = static_cast<std::size_t>(it - times.begin());
    if (!(std::abs(cmds[i] - cmd_ref) < max_gap)) {
      return false;
    }
  }
  return true;
}

bool SpeedAccConsistencyGate(double v_ref, double v_k, double a_ref,
                             double a_k) {
  return (v_ref - v_k) * (a_ref - a_k) > 0.0;
}

OnlineFeedbackBuilder::OnlineFeedbackBuilder(const OnlineGateConfig& config)
    : config_(config),
      filter_(config.filter_order, config.cutoff_hz, config.sample_rate) {}

std::optional<OnlineFeedback> OnlineFeedbackBuilder::Push(
    const ControlFrame& frame, const ExpectedAcc& expected_acc) {
  ++stats_.frames;
  if (!primed_) {
    filter_.Reset(frame.acc);
    primed_ = true;
  }
  ControlFrame stored = frame;
  stored.acc = filter_.Filter(frame.acc);
  history_.push_back(stored);
  times_.push_back(frame.t);
  cmds_.push_back(frame.cmd);

  const double period = 1.0 / config_.sample_rate;
  const double horizon = config_.delay + config_.window + 2.0 * period;
  std::size_t drop = 0;
  while (drop < history_.size() && history_[drop].t < frame.t - horizon) {
    ++drop;
  }
  if (drop > 0) {
    history_.erase(history_.begin(), history_.begin() + static_cast<long>(drop));
    times_.erase(times_.begin(), times_.begin() + static_cast<long>(drop));
    cmds_.erase(cmds_.begin(), cmds_.begin() + static_cast<long>(drop));
  }

  const auto usable = [&](const ControlFrame& f) {
    return f.mode == DrivingMode::kAuto &&
           std::abs(f.theta) < config_.max_steer_deg;
  };
  if (!usable(frame)) {
    ++stats_.mode_or_steer;
    return std::nullopt;
  }
  const auto ref_idx = NearestTime(times_, frame.t - config_.delay, 0.5 * period);
  if (!ref_idx || times_.front() > frame.t - config_.delay - config_.window + kTimeEps) {
    ++stats_.no_match;
    return std::nullopt;
  }
  const ControlFrame& ref = history_[*ref_idx];
  if (!usable(ref)) {
    ++stats_.mode_or_steer;
    return std::nullopt;
  }
  if (ref.v < config_.min_speed) {
    ++stats_.standstill;
    return std::nullopt;
  }
  if (!CommandConsistencyGate(times_, cmds_, ref.t, config_.cmd_gap,
                              config_.window)) {
    ++stats_.command;
    return std::nullopt;
  }
  OnlineFeedback fb;
  fb.t = frame.t;
  fb.cmd_ref = ref.cmd;
  fb.v_ref = ref.v;
  fb.acc_ref = expected_acc(ref.cmd, ref.v);
  fb.acc_k = stored.acc;
  fb.v_k = frame.v;
  fb.v_des = frame.v_des;
  if (!SpeedAccConsistencyGate(fb.v_des, fb.v_k, fb.acc_ref, fb.acc_k)) {
    ++stats_.speed_acc;
    return std::nullopt;
  }
  ++stats_.accepted;
  return fb;
}

}  // namespace preprocess
}  // namespace autocalib
