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
 * @file online_update.h
 * @brief Per-cycle calibration table adaptation from acceleration feedback.
 */

#pragma once

#include <cstddef>

#include "autocalib/preprocess/online_filters.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace online {

/// How the command and speed window tests combine into the zero-distance
/// neighbourhood of a feedback point.
enum class WindowRule {
  kEither,  // inside when either the command or the speed is within range
  kBoth,    // inside only when both are within range
};

struct OnlineConfig {
  double alpha = 1.0;   // command decay coefficient
  double beta = 1.0;    // speed decay coefficient
  int m_cmd = 2;        // command distance exponent, even
  int m_v = 2;          // speed distance exponent, even
  double xi = 1e-8;
  double epsilon = 1.0;  // similarity decay coefficient
  double iota = 1.0;     // similarity exponential decay factor
  double sigma = 0.05;   // learning ratio, (0, 1]
  double delta_cmd = 5.0;   // window half-width, %
  double delta_v = 0.2;     // window half-width, m/s
  double delta_cmd_gap = 10.0;
  double gamma_v = 0.05;    // speed error below which updates stop, m/s
  WindowRule window_rule = WindowRule::kBoth;
  // Distances are measured in cmd / cmd_unit and v / speed_unit.
  double cmd_unit = 10.0;
  double speed_unit = 1.0;
};

/// Throws ConfigError on non-positive coefficients, sigma outside (0, 1] or
/// odd exponents.
void ValidateConfig(const OnlineConfig& config);

/// True when |v_ref - v_actual| <= gamma_v, i.e. no update is needed.
bool ConvergeCheck(double v_ref, double v_actual, double gamma_v);

/// Expected minus measured acceleration.
inline double ComputeGain(double acc_ref, double acc_k) {
  return acc_ref - acc_k;
}

/// True when the cell lies in the zero-distance window around the feedback.
bool InWindow(double cmd_i, double v_j, double cmd_ref, double v_ref,
              const OnlineConfig& config);

/// Distance term of a cell relative to the feedback point.
double CellDistance(double cmd_i, double v_j, double cmd_ref, double v_ref,
                    const OnlineConfig& config);

/// Similarity term: epsilon * exp(-iota * |init_acc - acc_k|).
double SimilarityCost(double init_acc, double acc_k,
                      const OnlineConfig& config);

/// Update cost of cell (cmd_index, speed_index) for one feedback sample.
double CellCost(std::size_t cmd_index, std::size_t speed_index,
                const preprocess::OnlineFeedback& feedback,
                const table::CalibrationTable& init_table,
                const OnlineConfig& config);

/// Step size for a cell with the given cost: gain * sigma / (1 + cost).
inline double CellDelta(double gain, double cost, const OnlineConfig& config) {
  return gain * config.sigma / (1.0 + cost);
}

struct UpdateResult {
  table::CalibrationTable table;
  double gain = 0.0;
  std::size_t updated_cells = 0;  // cells whose value changed
};

/**
 * @brief One adaptation step over every cell of `current`.
 *
 * Each cell moves against the gain by CellDelta, so a vehicle that
 * accelerates less than expected lowers the table around the feedback point.
 * The result is projected back onto column-wise monotone tables.
 */
UpdateResult UpdateTable(const table::CalibrationTable& current,
                         const table::CalibrationTable& init_table,
                         const preprocess::OnlineFeedback& feedback,
                         const OnlineConfig& config);

}  // namespace online
}  // namespace autocalib
