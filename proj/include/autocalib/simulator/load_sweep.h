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
 * @file load_sweep.h
 * @brief Repeated closed-loop rounds across cargo loads, with and without
 * online calibration.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "autocalib/simulator/closed_loop.h"
#include "autocalib/simulator/plant.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace simulator {

/// Where the accepted online feedback landed, per nearest table cell.
class VisitStats {
 public:
  explicit VisitStats(const table::CalibrationTable& grid_source);

  void Add(const online::CycleRecord& record);

  /// Row-major like the table values.
  const std::vector<std::uint32_t>& counts() const { return counts_; }
  /// Mean (cmd, v) of the feedback assigned to cell k. Requires counts > 0.
  double MeanCmd(std::size_t k) const { return cmd_sum_[k] / counts_[k]; }
  double MeanSpeed(std::size_t k) const { return v_sum_[k] / counts_[k]; }

 private:
  std::vector<double> cmd_grid_;
  std::vector<double> speed_grid_;
  std::vector<std::uint32_t> counts_;
  std::vector<double> cmd_sum_;
  std::vector<double> v_sum_;
};

struct RoundResult {
  double load = 0.0;
  std::size_t round = 0;
  bool online = false;
  TrackingMetrics metrics;
};

struct LoadSweepOptions {
  std::vector<double> loads{0.0, 150.0, 300.0, 360.0};  // kg
  std::size_t rounds = 3;
  bool run_online = true;
  bool run_offline = true;
  TrapezoidOptions profile;  // round r uses profile.seed + r
  ClosedLoopOptions loop;    // round r uses loop.seed + r; online ignored
  online::OnlineConfig online;
  // Each online round is a fresh session whose similarity reference is the
  // table it starts from. When true, every session refers to `initial`.
  bool freeze_reference = false;
  // Called after every run, e.g. to write traces or session logs.
  std::function<void(const RoundResult&, const ClosedLoopResult&)> on_round;
};

struct LoadResult {
  double load = 0.0;
  std::vector<RoundResult> offline_rounds;
  std::vector<RoundResult> online_rounds;
  table::CalibrationTable table_before;  // online table entering this load
  table::CalibrationTable table_after;   // online table after its rounds
  VisitStats visits;                     // online feedback at this load
  std::vector<double> latencies;         // update plus publish, s
};

/**
 * @brief Runs every load in order, `rounds` times each.
 *
 * Offline runs always use `initial`. Online runs form one continuous session:
 * the table adapted in one round is where the next round, and the next load,
 * starts. The same
 * profiles are replayed at every load so runs are paired. Throws Diverged
 * from the closed loop.
 */
std::vector<LoadResult> RunLoadSweep(const PlantConfig& base_plant,
                                     const table::CalibrationTable& initial,
                                     const LoadSweepOptions& options);

/// base_plant with the cargo load replaced.
PlantConfig WithLoad(const PlantConfig& base_plant, double load);

/// Mean of one metric over rounds.
TrackingMetrics MeanMetrics(const std::vector<RoundResult>& rounds);

}  // namespace simulator
}  // namespace autocalib
