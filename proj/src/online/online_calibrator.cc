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

#include "autocalib/online/online_calibrator.h"

#include <chrono>
#include <utility>

#include "autocalib/common/errors.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace online {

namespace {

preprocess::OnlineGateConfig WithCmdGap(preprocess::OnlineGateConfig gates,
                                        double cmd_gap) {
  gates.cmd_gap = cmd_gap;
  return gates;
}

table::CalibrationTable SameGrids(const table::CalibrationTable& reference,
                                  table::CalibrationTable table) {
  if (table.speed_grid() != reference.speed_grid() ||
      table.cmd_grid() != reference.cmd_grid()) {
    throw InvalidTable("start table grids differ from the initial table");
  }
  return table;
}

}  // namespace

OnlineCalibrator::OnlineCalibrator(table::CalibrationTable initial,
                                   const OnlineConfig& config,
                                   preprocess::OnlineGateConfig gates)
    : OnlineCalibrator(initial, initial, config, gates) {}

OnlineCalibrator::OnlineCalibrator(table::CalibrationTable initial,
                                   table::CalibrationTable start,
                                   const OnlineConfig& config,
                                   preprocess::OnlineGateConfig gates)
    : init_table_(std::move(initial)),
      config_((ValidateConfig(config), config)),
      publisher_(SameGrids(init_table_, std::move(start))),
      builder_(WithCmdGap(gates, config.delta_cmd_gap)),
      visits_(init_table_.num_cells(), 0) {}

std::optional<CycleRecord> OnlineCalibrator::Step(
    const preprocess::ControlFrame& frame) {
  ++cycle_;
  const auto snapshot = publisher_.Current();
  const auto feedback = builder_.Push(frame, [&](double cmd, double v) {
    return snapshot->table.LookupAcc(cmd, v);
  });
  if (!feedback) {
    return std::nullopt;
  }
  if (ConvergeCheck(feedback->v_des, feedback->v_k, config_.gamma_v)) {
    ++converged_cycles_;
    return std::nullopt;
  }
  const auto start = std::chrono::steady_clock::now();
  UpdateResult result =
      UpdateTable(snapshot->table, init_table_, *feedback, config_);
  const std::uint64_t revision = publisher_.Publish(std::move(result.table));
  const auto stop = std::chrono::steady_clock::now();

  CycleRecord record;
  record.cycle = cycle_;
  record.feedback = *feedback;
  record.gain = result.gain;
  record.updated_cells = result.updated_cells;
  record.revision = revision;
  record.latency_s = std::chrono::duration<double>(stop - start).count();
  latencies_.push_back(record.latency_s);

  const std::size_t i =
      table::NearestIndex(init_table_.cmd_grid(), feedback->cmd_ref);
  const std::size_t j =
      table::NearestIndex(init_table_.speed_grid(), feedback->v_ref);
  ++visits_[i * init_table_.num_speed() + j];
  return record;
}

std::string SessionLogHeader() {
  return "cycle,t,cmd_ref,v_ref,acc_ref,acc_k,gain,updated_cells,revision";
}

std::string SessionLogRow(const CycleRecord& record) {
  using table::FormatNumber;
  const auto& fb = record.feedback;
  return std::to_string(record.cycle) + "," + FormatNumber(fb.t) + "," +
         FormatNumber(fb.cmd_ref) + "," + FormatNumber(fb.v_ref) + "," +
         FormatNumber(fb.acc_ref) + "," + FormatNumber(fb.acc_k) + "," +
         FormatNumber(record.gain) + "," +
         std::to_string(record.updated_cells) + "," +
         std::to_string(record.revision);
}

}  // namespace online
}  // namespace autocalib
