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
 * @file online_filters.h
 * @brief Feedback cleaning for per-cycle table adaptation.
 *
 * Pipeline order: mode/steering gate -> delay alignment -> Butterworth
 * low-pass -> command consistency gate -> speed/acceleration consistency gate.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "autocalib/preprocess/butterworth.h"
#include "autocalib/preprocess/drive_sample.h"

namespace autocalib {
namespace preprocess {

/// Index of the timestamp nearest `t` in an ascending series, or nullopt when
/// the nearest one is more than `tolerance` away.
std::optional<std::size_t> NearestTime(std::span<const double> times, double t,
                                       double tolerance);

struct DelayPair {
  DriveSample command;  // frame at which the command was issued
  double t_acc = 0.0;   // timestamp of the matched IMU frame
  double acc = 0.0;     // IMU acceleration attributed to the command
};

/// IMU acceleration `delay` seconds after the command frame at `t_cmd`.
/// Throws NoMatch when no IMU frame lies within half a period of t_cmd + delay.
DelayPair MatchDelayed(const DriveSample& command,
                       std::span<const DriveSample> imu, double delay);

/// Pairs every command frame with the IMU frame nearest t + delay. Command
/// frames whose t + delay runs past the IMU log are left unpaired.
std::vector<DelayPair> AlignDelay(std::span<const DriveSample> commands,
                                  std::span<const DriveSample> imu,
                                  double delay = 0.2);

/// True iff every command within [t_ref - window, t_ref + window] differs from
/// the command at t_ref by less than `max_gap`. Throws InsufficientHistory if
/// the history does not cover the window.
bool CommandConsistencyGate(std::span<const double> times,
                            std::span<const double> cmds, double t_ref,
                            double max_gap, double window = 0.1);

/// (v_ref - v_k) * (a_ref - a_k) > 0.
bool SpeedAccConsistencyGate(double v_ref, double v_k, double a_ref,
                             double a_k);

/// One control-cycle frame as seen by the online calibrator.
struct ControlFrame {
  double t = 0.0;
  double cmd = 0.0;    // command issued this cycle, %
  double v = 0.0;      // measured speed, m/s
  double v_des = 0.0;  // reference speed, m/s
  double acc = 0.0;    // raw IMU acceleration, m/s^2
  double theta = 0.0;  // steering wheel angle, deg
  DrivingMode mode = DrivingMode::kAuto;
};

/// Feedback that passed every online gate.
struct OnlineFeedback {
  double t = 0.0;        // time of the acceleration measurement
  double cmd_ref = 0.0;  // command issued `delay` earlier, %
  double v_ref = 0.0;    // speed when that command was issued, m/s
  double acc_ref = 0.0;  // acceleration the table expects for cmd_ref, m/s^2
  double acc_k = 0.0;    // filtered measured acceleration, m/s^2
  double v_k = 0.0;      // current speed, m/s
  double v_des = 0.0;    // current reference speed, m/s
};

struct OnlineGateConfig {
  double delay = 0.2;
  double window = 0.1;
  double cmd_gap = 10.0;
  double max_steer_deg = 10.0;
  double min_speed = 0.1;
  double sample_rate = 100.0;
  double cutoff_hz = 2.0;
  int filter_order = 3;
};

struct GateStats {
  std::uint64_t frames = 0;
  std::uint64_t mode_or_steer = 0;
  std::uint64_t no_match = 0;
  std::uint64_t standstill = 0;
  std::uint64_t command = 0;
  std::uint64_t speed_acc = 0;
  std::uint64_t accepted = 0;
};

/**
 * @brief Streaming form of the online pipeline.
 *
 * Push one frame per control cycle. The frame's IMU value is low-pass
 * filtered, the command issued `delay` earlier is looked up, and the pair is
 * emitted only if all gates pass. The speed/acceleration gate compares the
 * reference speed with the measured one, so feedback is kept only when the
 * speed error agrees in sign with the acceleration error.
 */
class OnlineFeedbackBuilder {
 public:
  using ExpectedAcc = std::function<double(double cmd, double v)>;

  explicit OnlineFeedbackBuilder(const OnlineGateConfig& config = {});

  std::optional<OnlineFeedback> Push(const ControlFrame& frame,
                                     const ExpectedAcc& expected_acc);

  const GateStats& stats() const { return stats_; }

 private:
  OnlineGateConfig config_;
  ButterworthFilter filter_;
  bool primed_ = false;
  std::deque<ControlFrame> history_;  // acc holds the filtered value
  std::vector<double> times_;
  std::vector<double> cmds_;
  GateStats stats_;
};

}  // namespace preprocess
}  // namespace autocalib
