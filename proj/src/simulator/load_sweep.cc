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

#include "autocalib/simulator/load_sweep.h"

#include <utility>

namespace autocalib {
namespace simulator {

VisitStats::VisitStats(const table::CalibrationTable& grid_source)
    : cmd_grid_(grid_source.cmd_grid()),
      speed_grid_(grid_source.speed_grid()),
      counts_(grid_source.num_cells(), 0),
      cmd_sum_(grid_source.num_cells(), 0.0),
      v_sum_(grid_source.num_cells(), 0.0) {}

void VisitStats::Add(const online::CycleRecord& record) {
  const double cmd = record.feedback.cmd_ref;
  const double v = record.feedback.v_ref;
  const std::size_t k = table::NearestIndex(cmd_grid_, cmd) *
                            speed_grid_.size() +
                        table::NearestIndex(speed_grid_, v);
  ++counts_[k];
  cmd_sum_[k] += cmd;
  v_sum_[k] += v;
}

PlantConfig WithLoad(const PlantConfig& base_plant, double load) {
  PlantConfig plant = base_plant;
  plant.load = load;
  return plant;
}

TrackingMetrics MeanMetrics(const std::vector<RoundResult>& rounds) {
  TrackingMetrics mean;
  if (rounds.empty()) return mean;
  for (const RoundResult& r : rounds) {
    mean.speed_mae += r.metrics.speed_mae;
    mean.speed_rmse += r.metrics.speed_rmse;
    mean.station_mae += r.metrics.station_mae;
    mean.station_rmse += r.metrics.station_rmse;
    mean.frames += r.metrics.frames;
  }
  const double n = static_cast<double>(rounds.size());
  mean.speed_mae /= n;
  mean.speed_rmse /= n;
  mean.station_mae /= n;
  mean.station_rmse /= n;
  return mean;
}

std::vector<LoadResult> RunLoadSweep(const PlantConfig& base_plant,
                                     const table::CalibrationTable& initial,
                                     const LoadSweepOptions& options) {
  std::vector<SpeedProfile> profiles;
  profiles.reserve(options.rounds);
  for (std::size_t r = 0; r < options.rounds; ++r) {
    TrapezoidOptions p = options.profile;
    p.seed = options.profile.seed + r;
    profiles.push_back(TrapezoidProfile(base_plant.v_max, p));
  }

  std::vector<LoadResult> results;
  table::CalibrationTable online_table = initial;
  for (double load : options.loads) {
    const PlantConfig plant = WithLoad(base_plant, load);
    LoadResult lr{load, {}, {}, online_table, online_table,
                  VisitStats(initial), {}};
    for (std::size_t r = 0; r < options.rounds; ++r) {
      ClosedLoopOptions loop = options.loop;
      loop.seed = options.loop.seed + r;
      if (options.run_offline) {
        loop.online.reset();
        const ClosedLoopResult off =
            RunClosedLoop(plant, initial, profiles[r], loop);
        lr.offline_rounds.push_back({load, r, false, off.metrics});
        if (options.on_round) options.on_round(lr.offline_rounds.back(), off);
      }
      if (options.run_online) {
        loop.online = options.online;
        if (options.freeze_reference) loop.reference_table = initial;
        ClosedLoopResult on =
            RunClosedLoop(plant, online_table, profiles[r], loop);
        lr.online_rounds.push_back({load, r, true, on.metrics});
        if (options.on_round) options.on_round(lr.online_rounds.back(), on);
        for (const online::CycleRecord& u : on.updates) {
          lr.visits.Add(u);
          lr.latencies.push_back(u.latency_s);
        }
        online_table = std::move(on.final_table);
      }
    }
    lr.table_after = online_table;
    results.push_back(std::move(lr));
  }
  return results;
}

}  // namespace simulator
}  // namespace autocalib
