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

#include "autocalib/online/online_update.h"

#include <cmath>
#include <string>
#include <vector>

#include "autocalib/common/errors.h"
#include "autocalib/table/monotone.h"

namespace autocalib {
namespace online {

void ValidateConfig(const OnlineConfig& config) {
  const auto require = [](bool ok, const std::string& what) {
    if (!ok) {
      throw ConfigError("online config: " + what);
    }
  };
  require(config.alpha > 0.0 && config.beta > 0.0, "alpha and beta > 0");
  require(config.m_cmd > 0 && config.m_cmd % 2 == 0, "m_cmd positive even");
  require(config.m_v > 0 && config.m_v % 2 == 0, "m_v positive even");
  require(config.xi > 0.0, "xi > 0");
  require(config.epsilon > 0.0 && config.iota > 0.0, "epsilon and iota > 0");
  require(config.sigma > 0.0 && config.sigma <= 1.0, "sigma in (0, 1]");
  require(config.delta_cmd > 0.0 && config.delta_v > 0.0, "window > 0");
  require(config.delta_cmd_gap > 0.0, "delta_cmd_gap > 0");
  require(config.gamma_v > 0.0, "gamma_v > 0");
  require(config.cmd_unit > 0.0 && config.speed_unit > 0.0, "units > 0");
}

bool ConvergeCheck(double v_ref, double v_actual, double gamma_v) {
  return std::abs(v_ref - v_actual) <= gamma_v;
}

bool InWindow(double cmd_i, double v_j, double cmd_ref, double v_ref,
              const OnlineConfig& config) {
  const bool near_cmd = std::abs(cmd_ref - cmd_i) <= config.delta_cmd;
  const bool near_v = std::abs(v_ref - v_j) <= config.delta_v;
  return config.window_rule == WindowRule::kEither ? (near_cmd || near_v)
                                                   : (near_cmd && near_v);
}

double CellDistance(double cmd_i, double v_j, double cmd_ref, double v_ref,
                    const OnlineConfig& config) {
  if (InWindow(cmd_i, v_j, cmd_ref, v_ref, config)) {
    return 0.0;
  }
  const double dc = (cmd_ref - cmd_i) / config.cmd_unit;
  const double dv = (v_ref - v_j) / config.speed_unit;
  return config.alpha * std::pow(dc, config.m_cmd) +
         config.beta * std::pow(dv, config.m_v) + config.xi;
}

double SimilarityCost(double init_acc, double acc_k,
                      const OnlineConfig& config) {
  return config.epsilon * std::exp(-config.iota * std::abs(init_acc - acc_k));
}

double CellCost(std::size_t cmd_index, std::size_t speed_index,
                const preprocess::OnlineFeedback& feedback,
                const table::CalibrationTable& init_table,
                const OnlineConfig& config) {
  const double distance = CellDistance(
      init_table.cmd_grid()[cmd_index], init_table.speed_grid()[speed_index],
      feedback.cmd_ref, feedback.v_ref, config);
  return distance * SimilarityCost(init_table.at(cmd_index, speed_index),
                                   feedback.acc_k, config);
}

UpdateResult UpdateTable(const table::CalibrationTable& current,
                         const table::CalibrationTable& init_table,
                         const preprocess::OnlineFeedback& feedback,
                         const OnlineConfig& config) {
  const double gain = ComputeGain(feedback.acc_ref, feedback.acc_k);
  const std::size_t nc = current.num_cmd();
  const std::size_t ns = current.num_speed();
  std::vector<double> acc(current.values().begin(), current.values().end());
  for (std::size_t i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      const double cost = CellCost(i, j, feedback, init_table, config);
      acc[i * ns + j] -= CellDelta(gain, cost, config);
    }
  }
  UpdateResult result{table::ProjectMonotone(current.WithValues(std::move(acc))),
                      gain, 0};
  const auto before = current.values();
  const auto after = result.table.values();
  for (std::size_t k = 0; k < before.size(); ++k) {
    if (before[k] != after[k]) {
      ++result.updated_cells;
    }
  }
  return result;
}

}  // namespace online
}  // namespace autocalib
