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
 * @file online_calibrator.h
 * @brief Control-cycle driver for online table adaptation.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "autocalib/online/online_update.h"
#include "autocalib/online/table_publisher.h"
#include "autocalib/preprocess/online_filters.h"

namespace autocalib {
namespace online {

/// One cycle that produced an update.
struct CycleRecord {
  std::uint64_t cycle = 0;
  preprocess::OnlineFeedback feedback;
  double gain = 0.0;
  std::size_t updated_cells = 0;
  std::uint64_t revision = 0;
  double latency_s = 0.0;  // update plus publish wall time
};

/**
 * @brief Runs the feedback pipeline and table update once per control cycle.
 *
 * The initial table is kept unchanged for the similarity term. Cycles whose
 * feedback is rejected, or whose speed error is already within gamma_v, do
 * not touch the table but still advance the cycle counter.
 */
class OnlineCalibrator {
 public:
  /// Throws ConfigError for an invalid config.
  OnlineCalibrator(table::CalibrationTable initial, const OnlineConfig& config,
                   preprocess::OnlineGateConfig gates = {});

  /// Resumes adaptation from `start` while the similarity term keeps
  /// referring to `initial`. Throws InvalidTable if the grids differ.
  OnlineCalibrator(table::CalibrationTable initial,
                   table::CalibrationTable start, const OnlineConfig& config,
                   preprocess::OnlineGateConfig gates = {});

  std::optional<CycleRecord> Step(const preprocess::ControlFrame& frame);

  const table::CalibrationTable& init_table() const { return init_table_; }
  const TablePublisher& publisher() const { return publisher_; }
  std::uint64_t cycle() const { return cycle_; }
  std::uint64_t converged_cycles() const { return converged_cycles_; }
  const preprocess::GateStats& gate_stats() const { return builder_.stats(); }

  /// Number of updates whose feedback point was nearest to each cell,
  /// row-major like the table values.
  const std::vector<std::uint32_t>& visit_counts() const { return visits_; }
  const std::vector<double>& latencies() const { return latencies_; }

 private:
  const table::CalibrationTable init_table_;
  OnlineConfig config_;
  TablePublisher publisher_;
  preprocess::OnlineFeedbackBuilder builder_;
  std::uint64_t cycle_ = 0;
  std::uint64_t converged_cycles_ = 0;
  std::vector<std::uint32_t> visits_;
  std::vector<double> latencies_;
};

/// Header line of the online session log.
std::string SessionLogHeader();

/// One session log row: cycle,t,cmd_ref,v_ref,acc_ref,acc_k,gain,
/// updated_cells,revision.
std::string SessionLogRow(const CycleRecord& record);

}  // namespace online
}  // namespace autocalib
