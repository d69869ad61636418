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

#include "autocalib/offline/pipeline.h"

#include <chrono>
#include <string>

#include "autocalib/common/errors.h"
#include "autocalib/offline/table_builder.h"

namespace autocalib {
namespace offline {

namespace {

constexpr std::size_t kMinPedalSamples = 50;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

OfflineTrainResult TrainOffline(std::span<const preprocess::DriveSample> log,
                                const std::vector<double>& speed_grid,
                                const std::vector<double>& cmd_grid,
                                const OfflineTrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const preprocess::GridBins bins =
      preprocess::PreprocessOffline(log, cmd_grid, speed_grid, config.preprocess);
  const ThrottleBrakeSplit split =
      SplitThrottleBrake(bins.Flatten(), config.deadband);
  if (split.throttle.size() < kMinPedalSamples ||
      split.brake.size() < kMinPedalSamples) {
    throw TooFewSamples("cleaned log keeps " +
                        std::to_string(split.throttle.size()) +
                        " throttle and " + std::to_string(split.brake.size()) +
                        " brake samples, need " +
                        std::to_string(kMinPedalSamples) + " each");
  }
  const MlpModel throttle = TrainMlp(split.throttle, config.mlp);
  const MlpModel brake = TrainMlp(split.brake, config.mlp);

  OfflineTrainResult result{BuildTable(throttle, brake, speed_grid, cmd_grid),
                            {},
                            split.throttle.size(),
                            split.brake.size(),
                            std::vector<std::size_t>(
                                speed_grid.size() * cmd_grid.size(), 0),
                            0.0,
                            0.0};
  for (const auto& [key, samples] : bins.cells) {
    result.cell_counts[key.cmd_index * speed_grid.size() + key.speed_index] =
        samples.size();
  }
  result.build_seconds = Seconds(start);

  if (config.cross_validate) {
    const auto cv_start = std::chrono::steady_clock::now();
    const std::uint64_t seed = config.mlp.seed;
    result.reports.push_back(CrossValidate(split.throttle, config.folds, seed,
                                           "nn_throttle", MlpFitter(config.mlp)));
    result.reports.push_back(CrossValidate(split.throttle, config.folds, seed,
                                           "linear_throttle", LinearFitter()));
    result.reports.push_back(CrossValidate(split.brake, config.folds, seed,
                                           "nn_brake", MlpFitter(config.mlp)));
    result.reports.push_back(CrossValidate(split.brake, config.folds, seed,
                                           "linear_brake", LinearFitter()));
    result.cv_seconds = Seconds(cv_start);
  }
  return result;
}

}  // namespace offline
}  // namespace autocalib
