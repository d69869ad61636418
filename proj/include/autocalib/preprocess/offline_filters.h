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
 * @file offline_filters.h
 * @brief Cleaning of manual driving logs before offline model training.
 *
 * Pipeline order: command delay alignment -> validity gates (steering,
 * standstill) -> mean filter -> grid binning with per-cell uniform
 * downsampling and outlier removal.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "autocalib/preprocess/drive_sample.h"

namespace autocalib {
namespace preprocess {

/// Trailing moving average: element k is the mean of values[k .. k+N-1], i.e.
/// the smoothed value for the frame that follows the window. The result has
/// `values.size() - N + 1` entries. Throws WindowTooLarge if N exceeds the
/// series length and std::invalid_argument if N is zero.
std::vector<double> MeanFilter(std::span<const double> values, std::size_t window);

/// Re-labels each frame with the command issued `delay` seconds earlier, the
/// one the measured acceleration responds to. Frames with no command frame
/// within half a period of t - delay are dropped.
std::vector<DriveSample> AlignCommands(std::span<const DriveSample> samples,
                                       double delay);

/// Keeps samples with |theta| strictly below `max_steer_deg`.
std::vector<DriveSample> SteeringGate(std::span<const DriveSample> samples,
                                      double max_steer_deg);

/// Keeps samples with v at or above `min_speed`; accelerations logged at rest
/// are clamped by static friction and carry no pedal information.
std::vector<DriveSample> StandstillGate(std::span<const DriveSample> samples,
                                        double min_speed);

/// z-score filter: drops x with |x - mean| / std > 1 (population std, single
/// pass). Fewer than two values or zero spread pass through unchanged.
std::vector<double> RemoveOutliers(std::span<const double> values);

/// Mask form of RemoveOutliers: true for values that are kept.
std::vector<bool> InlierMask(std::span<const double> values);

struct CellKey {
  std::size_t cmd_index = 0;
  std::size_t speed_index = 0;
  auto operator<=>(const CellKey&) const = default;
};

/// Grid cell whose bounds (halfway to the neighbours, half a step past the
/// edges) contain (cmd, v), or nullopt when the point is off the grid.
std::optional<CellKey> AssignCell(std::span<const double> cmd_grid,
                                  std::span<const double> speed_grid, double cmd,
                                  double v);

struct GridBins {
  std::vector<double> cmd_grid;
  std::vector<double> speed_grid;
  std::map<CellKey, std::vector<DriveSample>> cells;

  std::size_t TotalSamples() const;
  std::vector<DriveSample> Flatten() const;
};

/// Bins samples to their nearest grid cell, downsamples crowded cells to
/// `cap` uniformly at random (seeded) and removes per-cell outliers on acc.
GridBins BinAndUniform(std::span<const DriveSample> samples,
                       std::span<const double> cmd_grid,
                       std::span<const double> speed_grid, std::size_t cap,
                       std::uint64_t seed);

struct OfflinePreprocessConfig {
  double command_delay = 0.2;
  double max_steer_deg = 10.0;
  double min_speed = 0.05;
  std::size_t mean_window = 5;
  std::size_t cell_cap = 40;
  std::uint64_t seed = 1;
};

/// Full offline cleaning pipeline. The mean filter runs over v and acc within
/// each run of consecutive frames that survived the gates.
GridBins PreprocessOffline(std::span<const DriveSample> log,
                           std::span<const double> cmd_grid,
                           std::span<const double> speed_grid,
                           const OfflinePreprocessConfig& config);

}  // namespace preprocess
}  // namespace autocalib
