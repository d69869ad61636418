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
 * @file run_config.h
 * @brief JSON experiment configuration shared by every subcommand.
 */

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "autocalib/offline/pipeline.h"
#include "autocalib/online/online_update.h"
#include "autocalib/preprocess/online_filters.h"
#include "autocalib/simulator/closed_loop.h"
#include "autocalib/simulator/drive_log.h"
#include "autocalib/simulator/plant.h"

namespace autocalib {
namespace cli {

/**
 * Every section and key is optional; absent values keep their defaults.
 *
 *   {
 *     "vehicle":    {"preset": "ax1" | "mkz", "load": kg, "imu_noise_std",
 *                    "delay", "sample_rate", "v_max"},
 *     "drive":      {"duration", "min_dwell", "max_dwell", "max_cmd",
 *                    "turn_probability"},
 *     "offline":    {"command_delay", "max_steer_deg", "min_speed",
 *                    "mean_window", "cell_cap", "deadband", "folds",
 *                    "cross_validate", "hidden", "epochs", "learning_rate",
 *                    "batch_size"},
 *     "online":     {"alpha", "beta", "m_cmd", "m_v", "epsilon", "iota",
 *                    "sigma", "delta_cmd", "delta_v", "delta_cmd_gap",
 *                    "gamma_v", "window_rule": "either" | "both",
 *                    "cmd_unit", "speed_unit"},
 *     "gates":      {"delay", "window", "max_steer_deg", "min_speed",
 *                    "cutoff_hz", "filter_order"},
 *     "controller": {"kp", "ki", "preview", "hold_brake", "stop_speed"},
 *     "profile":    {"duration", "min_accel", "max_accel"},
 *     "sweep":      {"loads": [kg, ...], "rounds", "diverge_error",
 *                    "diverge_time"}
 *   }
 *
 * Unknown sections or keys are rejected so typos do not pass silently.
 */
struct RunConfig {
  std::string vehicle = "ax1";
  simulator::PlantConfig plant = simulator::Ax1Preset();
  simulator::DriverScript drive;
  offline::OfflineTrainConfig offline;
  online::OnlineConfig online;
  preprocess::OnlineGateConfig gates;
  simulator::ControllerConfig controller;
  simulator::TrapezoidOptions profile;
  std::vector<double> loads{0.0, 150.0, 300.0, 360.0};
  std::size_t rounds = 3;
  double diverge_error = 5.0;  // m/s
  double diverge_time = 1.0;   // s
};

/// Throws ConfigError on malformed JSON, unknown keys or invalid values.
RunConfig ParseRunConfig(std::string_view json_text);

/// Throws ConfigError when the file cannot be read or parsed.
RunConfig LoadRunConfig(const std::string& path);

}  // namespace cli
}  // namespace autocalib
