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

#include "autocalib/preprocess/offline_filters.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "autocalib/common/errors.h"
#include "autocalib/preprocess/online_filters.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace preprocess {
namespace {

std::optional<std::size_t> CellIndex(std::span<const double> grid, double x) {
  const double lo = grid.front() - 0.5 * (grid[1] - grid[0]);
  const double hi = grid.back() + 0.5 * (grid.back() - grid[grid.size() - 2]);
  if (x < lo || x > hi) {
    return std::nullopt;
  }
  return table::NearestIndex(grid, x);
}

// Splits indices into runs of consecutive frames (no gap above 1.5 periods).
std::vector<std::pair<std::size_t, std::size_t>> ContiguousRuns(
    std::span<const DriveSample> samples) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  if (samples.empty()) {
    return runs;
  }
  std::vector<double> gaps;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    gaps.push_back(samples[i].t - samples[i - 1].t);
  }
  double period = 0.0;
  if (!gaps.empty()) {
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    period = gaps[gaps.size() / 2];
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].t - samples[i - 1].t > 1.5 * period) {
      runs.emplace_back(start, i);
      start = i;
    }
  }
  runs.emplace_back(start, samples.size());
  return runs;
}

}  // namespace

std::vector<double> MeanFilter(std::span<const double> values,
                               std::size_t window) {
  if (window == 0) {
    throw std::invalid_argument("mean filter window must be at least 1");
  }
  if (window > values.size()) {
    throw WindowTooLarge("window " + std::to_string(window) +
                         " exceeds series length " +
                         std::to_string(values.size()));
  }
  std::vector<double> out;
  out.reserve(values.size() - window + 1);
  const double n = static_cast<double>(window);
  for (std::size_t k = 0; k + window <= values.size(); ++k) {
    double sum = 0.0;
    for (std::size_t m = k; m < k + window; ++m) {
      sum += values[m];
    }
    out.push_back(sum / n);
  }
  return out;
}

std::vector<DriveSample> AlignCommands(std::span<const DriveSample> samples,
                                       double delay) {
  std::vector<DriveSample> out;
  if (samples.empty()) {
    return out;
  }
  if (delay <= 0.0) {
    return {samples.begin(), samples.end()};
  }
  std::vector<double> times(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    times[i] = samples[i].t;
  }
  const double period =
      samples.size() > 1 ? (times.back() - times.front()) /
                               static_cast<double>(samples.size() - 1)
                         : delay;
  out.reserve(samples.size());
  for (const DriveSample& s : samples) {
    if (const auto j = NearestTime(times, s.t - delay, 0.5 * period)) {
      DriveSample aligned = s;
      aligned.cmd = samples[*j].cmd;
      out.push_back(aligned);
    }
  }
  return out;
}

std::vector<DriveSample> SteeringGate(std::span<const DriveSample> samples,
                                      double max_steer_deg) {
  std::vector<DriveSample> out;
  std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
               [&](const DriveSample& s) {
                 return std::abs(s.theta) < max_steer_deg;
               });
  return out;
}

std::vector<DriveSample> StandstillGate(std::span<const DriveSample> samples,
                                        double min_speed) {
  std::vector<DriveSample> out;
  std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
               [&](const DriveSample& s) { return s.v >= min_speed; });
  return out;
}

std::vector<bool> InlierMask(std::span<const double> values) {
  std::vector<bool> keep(values.size(), true);
  if (values.size() < 2) {
    return keep;
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : values) {
    ss += (x - mean) * (x - mean);
  }
  const double sd = std::sqrt(ss / n);
  if (sd == 0.0) {
    return keep;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    keep[i] = std::abs(values[i] - mean) / sd <= 1.0;
  }
  return keep;
}

std::vector<double> RemoveOutliers(std::span<const double> values) {
  const std::vector<bool> keep = InlierMask(values);
  std::vector<double> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (keep[i]) {
      out.push_back(values[i]);
    }
  }
  return out;
}

std::optional<CellKey> AssignCell(std::span<const double> cmd_grid,
                                  std::span<const double> speed_grid, double cmd,
                                  double v) {
  const auto ci = CellIndex(cmd_grid, cmd);
  const auto si = CellIndex(speed_grid, v);
  if (!ci || !si) {
    return std::nullopt;
  }
  return CellKey{*ci, *si};
}

std::size_t GridBins::TotalSamples() const {
  std::size_t n = 0;
  for (const auto& [key, list] : cells) {
    n += list.size();
  }
  return n;
}

std::vector<DriveSample> GridBins::Flatten() const {
  std::vector<DriveSample> out;
  out.reserve(TotalSamples());
  for (const auto& [key, list] : cells) {
    out.insert(out.end(), list.begin(), list.end());
  }
  return out;
}

GridBins BinAndUniform(std::span<const DriveSample> samples,
                       std::span<const double> cmd_grid,
                       std::span<const double> speed_grid, std::size_t cap,
                       std::uint64_t seed) {
  if (cap == 0) {
    throw std::invalid_argument("cell cap must be at least 1");
  }
  GridBins bins;
  bins.cmd_grid.assign(cmd_grid.begin(), cmd_grid.end());
  bins.speed_grid.assign(speed_grid.begin(), speed_grid.end());
  for (const DriveSample& s : samples) {
    if (const auto key = AssignCell(cmd_grid, speed_grid, s.cmd, s.v)) {
      bins.cells[*key].push_back(s);
    }
  }
  std::mt19937_64 rng(seed);
  for (auto& [key, list] : bins.cells) {
    if (list.size() > cap) {
      std::vector<std::size_t> idx(list.size());
      std::iota(idx.begin(), idx.end(), 0);
      // Partial Fisher-Yates: the first `cap` slots are a uniform subset.
      for (std::size_t i = 0; i < cap; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
      }
      idx.resize(cap);
      std::sort(idx.begin(), idx.end());
      std::vector<DriveSample> kept;
      kept.reserve(cap);
      for (std::size_t i : idx) {
        kept.push_back(list[i]);
      }
      list = std::move(kept);
    }
    std::vector<double> acc(list.size());
    std::transform(list.begin(), list.end(), acc.begin(),
                   [](const DriveSample& s) { return s.acc; });
    const std::vector<bool> keep = InlierMask(acc);
    std::vector<DriveSample> inliers;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (keep[i]) {
        inliers.push_back(list[i]);
      }
    }
    list = std::move(inliers);
  }
  return bins;
}

GridBins PreprocessOffline(std::span<const DriveSample> log,
                           std::span<const double> cmd_grid,
                           std::span<const double> speed_grid,
                           const OfflinePreprocessConfig& config) {
  const std::vector<DriveSample> gated = StandstillGate(
      SteeringGate(AlignCommands(log, config.command_delay),
                   config.max_steer_deg),
      config.min_speed);
  std::vector<DriveSample> smoothed;
  smoothed.reserve(gated.size());
  const std::size_t n = config.mean_window;
  for (const auto& [begin, end] : ContiguousRuns(gated)) {
    if (end - begin <= n) {
      continue;
    }
    std::vector<double> v(end - begin);
    std::vector<double> acc(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      v[i - begin] = gated[i].v;
      acc[i - begin] = gated[i].acc;
    }
    const std::vector<double> v_mean = MeanFilter(v, n);
    const std::vector<double> acc_mean = MeanFilter(acc, n);
    // Frame begin+k+n is smoothed by window k (its n predecessors).
    for (std::size_t k = 0; begin + k + n < end; ++k) {
      DriveSample s = gated[begin + k + n];
      s.v = v_mean[k];
      s.acc = acc_mean[k];
      smoothed.push_back(s);
    }
  }
  return BinAndUniform(smoothed, cmd_grid, speed_grid, config.cell_cap,
                       config.seed);
}

}  // namespace preprocess
}  // namespace autocalib
