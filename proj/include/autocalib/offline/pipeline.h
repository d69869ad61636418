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
 * @file pipeline.h
 * @brief Drive log to calibration table: cleaning, training and evaluation.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "autocalib/offline/cross_validation.h"
#include "autocalib/offline/mlp.h"
#include "autocalib/preprocess/drive_sample.h"
#include "autocalib/preprocess/offline_filters.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace offline {

struct OfflineTrainConfig {
  preprocess::OfflinePreprocessConfig preprocess;
  MlpHyper mlp;
  double deadband = 2.0;  // %
  std::size_t folds = 10;
  bool cross_validate = true;
};

struct OfflineTrainResult {
  table::CalibrationTable table;
  // nn_throttle, linear_throttle, nn_brake, linear_brake; empty without CV.
  std::vector<CvReport> reports;
  std::size_t throttle_samples = 0;
  std::size_t brake_samples = 0;
  // Cleaned samples per table cell, row-major like the table values.
  std::vector<std::size_t> cell_counts;
  double build_seconds = 0.0;  // cleaning plus both final models
  double cv_seconds = 0.0;
};

/// Throws TooFewSamples when either pedal keeps fewer than 50 samples.
OfflineTrainResult TrainOffline(std::span<const preprocess::DriveSample> log,
                                const std::vector<double>& speed_grid,
                                const std::vector<double>& cmd_grid,
                                const OfflineTrainConfig& config);

}  // namespace offline
}  // namespace autocalib
