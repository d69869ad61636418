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
 * @file cli.h
 * @brief Subcommand driver behind the autocalib executable.
 */

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "autocalib/simulator/load_sweep.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTooFewSamples = 3;
inline constexpr int kExitDiverged = 4;

/// Parses argv, runs one subcommand and returns the process exit code.
/// Progress goes to `out`, diagnostics to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

/// One row per grid cell: `cmd,v,acc`.
std::string HeatmapCsv(const table::CalibrationTable& table);

/// Per-round rows: `scenario,load,online,round,speed_mae,...`.
std::string RoundsCsv(const std::string& scenario,
                      std::span<const simulator::LoadResult> results);

/// Means over rounds per (scenario, load, online) from RoundsCsv text, as
/// `scenario,load,online,speed_mae,speed_rmse,station_mae,station_rmse`.
/// Throws ParseError on malformed input.
std::string AggregateReport(std::span<const std::string> rounds_csvs);

}  // namespace cli
}  // namespace autocalib
