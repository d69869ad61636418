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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. All thresholds are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "autocalib/offline/cross_validation.h"
#include "autocalib/offline/pipeline.h"
#include "autocalib/online/online_update.h"
#include "autocalib/preprocess/butterworth.h"
#include "autocalib/preprocess/online_filters.h"
#include "autocalib/simulator/closed_loop.h"
#include "autocalib/simulator/drive_log.h"
#include "autocalib/simulator/load_sweep.h"
#include "autocalib/simulator/plant.h"
#include "autocalib/table/calibration_table.h"
#include "autocalib/table/inverse_view.h"
#include "autocalib/table/monotone.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace {

// Criterion 1.
constexpr double kNnMaxMae = 0.15;
constexpr double kNnMaxRmse = 0.20;
constexpr double kLinearOverNn = 2.0;
constexpr double kMaxBuildSeconds = 10.0;
// Criterion 2.
constexpr double kMaxOnlineVariation = 0.15;
// Criterion 3.
constexpr double kMinStationRatio = 1.8;
// Criterion 4.
constexpr double kAdaptLoad = 300.0;
constexpr double kCell20Cmd = 20.0;
constexpr double kCell20Speed = 0.4;   // m/s
constexpr double kCell20Shrink = 0.5;  // must at least halve
// Criterion 5.
constexpr double kMaxP99Ms = 2.0;
// Criterion 6.
constexpr double kRoundTripTol = 1e-9;
constexpr double kButterworthTol = 0.03;
constexpr double kButterworthStop = 0.005;
constexpr double kStationTol = 1e-3;
// Criterion 7.
constexpr double kMaxOfflineCellError = 0.2;
constexpr double kMaxOnlineCellError = 0.1;
constexpr std::size_t kCoveredMinSamples = 5;
// A cell counts as visited once this many accepted updates land nearest it.
constexpr std::uint32_t kVisitedMinUpdates = 50;

constexpr std::uint64_t kSeed = 1;

int failures = 0;

void Report(int id, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("CRITERION %d %s: %s | %s\n", id, pass ? "PASS" : "FAIL",
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0,
                double d = 0, double e = 0, double f = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d, e, f);
  return buf;
}

struct OfflineRun {
  std::string name;
  simulator::PlantConfig plant;
  std::vector<preprocess::DriveSample> log;
  offline::OfflineTrainResult result;
};

OfflineRun TrainVehicle(const std::string& name,
                        const simulator::PlantConfig& plant) {
  simulator::DriverScript script;
  script.seed = kSeed;
  auto log = simulator::GenerateDriveLog(plant, script);
  offline::OfflineTrainConfig cfg;
  cfg.mlp.seed = kSeed;
  cfg.preprocess.seed = kSeed;
  auto result = offline::TrainOffline(log, table::DefaultSpeedGrid(plant.v_max),
                                      table::DefaultCmdGrid(), cfg);
  return {name, plant, std::move(log), std::move(result)};
}

const offline::CvReport& FindReport(const offline::OfflineTrainResult& r,
                                    const std::string& model) {
  for (const auto& rep : r.reports) {
    if (rep.model == model) return rep;
  }
  std::fprintf(stderr, "missing CV report %s\n", model.c_str());
  std::abort();
}

void Criterion1(const std::vector<OfflineRun>& runs) {
  bool pass = true;
  std::string detail;
  for (const OfflineRun& run : runs) {
    for (const char* pedal : {"throttle", "brake"}) {
      const auto& nn = FindReport(run.result, std::string("nn_") + pedal);
      const auto& lin = FindReport(run.result, std::string("linear_") + pedal);
      pass = pass && nn.mae <= kNnMaxMae && nn.rmse <= kNnMaxRmse &&
             lin.mae >= kLinearOverNn * nn.mae;
      detail += run.name + " " + pedal +
                Fmt(" NN %.3f/%.3f linear %.3f/%.3f (x%.1f); ", nn.mae,
                    nn.rmse, lin.mae, lin.rmse, lin.mae / nn.mae);
    }
    pass = pass && run.result.build_seconds < kMaxBuildSeconds;
    detail += run.name + Fmt(" build %.2f s, 10-fold CV %.1f s; ",
                             run.result.build_seconds, run.result.cv_seconds);
  }
  Report(1, pass, "offline CV quality and build time", detail);
}

struct SweepRun {
  table::CalibrationTable initial;
  std::vector<simulator::LoadResult> results;
};

const simulator::LoadResult& AtLoad(const SweepRun& s, double load) {
  for (const auto& lr : s.results) {
    if (lr.load == load) return lr;
  }
  std::abort();
}

void Criterion2(const SweepRun& s) {
  const double base = simulator::MeanMetrics(AtLoad(s, 0.0).online_rounds)
                          .speed_mae;
  bool pass = true;
  std::string detail;
  for (const auto& lr : s.results) {
    const double on = simulator::MeanMetrics(lr.online_rounds).speed_mae;
    const double off = simulator::MeanMetrics(lr.offline_rounds).speed_mae;
    const double variation = std::abs(on - base) / base;
    pass = pass && variation <= kMaxOnlineVariation;
    if (lr.load >= 300.0) pass = pass && off > on;
    detail += Fmt("%.0f kg ON %.4f (%+.1f %%) OFF %.4f; ", lr.load, on,
                  100.0 * (on - base) / base, off);
  }
  Report(2, pass, "load-robust speed tracking", detail);
}

void Criterion3(const SweepRun& s) {
  bool pass = true;
  std::string detail;
  for (double load : {300.0, 360.0}) {
    const auto& lr = AtLoad(s, load);
    const double on = simulator::MeanMetrics(lr.online_rounds).station_mae;
    const double off = simulator::MeanMetrics(lr.offline_rounds).station_mae;
    pass = pass && off >= kMinStationRatio * on;
    detail += Fmt("%.0f kg station OFF %.3f ON %.3f ratio %.1f; ", load, off,
                  on, off / on);
  }
  Report(3, pass, "load-robust station tracking", detail);
}

void Criterion4(const SweepRun& s) {
  const auto& lr = AtLoad(s, kAdaptLoad);
  const auto& init = s.initial;
  const std::size_t ns = init.num_speed();
  std::size_t throttle_cells = 0;
  std::size_t lower = 0;
  for (std::size_t k = 0; k < init.num_cells(); ++k) {
    if (lr.visits.counts()[k] >= kVisitedMinUpdates &&
        init.cmd_grid()[k / ns] > 0.0) {
      ++throttle_cells;
      lower += lr.table_after.values()[k] < init.values()[k];
    }
  }
  // The low-speed launch cell on the 20 % throttle row. At full load the
  // launch needs more throttle, so this cell moves through its neighbours.
  const std::size_t i20 = table::NearestIndex(init.cmd_grid(), kCell20Cmd);
  const std::size_t j20 = table::NearestIndex(init.speed_grid(), kCell20Speed);
  const double before = init.at(i20, j20);
  const double after = lr.table_after.at(i20, j20);
  const double plant = simulator::SteadyStateAcc(
      simulator::WithLoad(simulator::Ax1Preset(), kAdaptLoad),
      init.cmd_grid()[i20], init.speed_grid()[j20]);
  const bool pass = throttle_cells > 0 && lower == throttle_cells &&
                    after > 0.0 && after < kCell20Shrink * before;
  const std::string detail =
      Fmt("%.0f kg: %.0f of %.0f visited throttle cells lower; cell "
          "(%.0f %%, %.1f m/s) %.3f -> ",
          kAdaptLoad, static_cast<double>(lower),
          static_cast<double>(throttle_cells), init.cmd_grid()[i20],
          init.speed_grid()[j20], before) +
      Fmt("%.3f (plant %.3f)", after, plant);
  Report(4, pass, "adaptation direction", detail);
}

void Criterion5(const SweepRun& s) {
  std::vector<double> lat;
  for (const auto& lr : s.results) {
    lat.insert(lat.end(), lr.latencies.begin(), lr.latencies.end());
  }
  std::sort(lat.begin(), lat.end());
  const double p99 = lat.empty() ? 0.0 : 1e3 * lat[lat.size() * 99 / 100];
  const double max = lat.empty() ? 0.0 : 1e3 * lat.back();
  Report(5, !lat.empty() && p99 < kMaxP99Ms, "online step budget",
         Fmt("p99 %.3f ms, max %.3f ms over %.0f updates", p99, max,
             static_cast<double>(lat.size())));
}

// ---- Criterion 6 property checks ----

table::CalibrationTable RandomTable(std::mt19937_64* rng, bool monotone) {
  const auto speeds = table::DefaultSpeedGrid(3.0);
  const auto cmds = table::DefaultCmdGrid();
  std::uniform_real_distribution<double> u(0.001, 0.3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> acc(speeds.size() * cmds.size());
  for (std::size_t j = 0; j < speeds.size(); ++j) {
    double a = -5.0;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      a += monotone ? u(*rng) : n(*rng);
      acc[i * speeds.size() + j] = a;
    }
  }
  return table::CalibrationTable(speeds, cmds, acc);
}

bool SameValues(const table::CalibrationTable& a,
                const table::CalibrationTable& b) {
  return std::equal(a.values().begin(), a.values().end(), b.values().begin(),
                    b.values().end());
}

double SineGain(double freq) {
  preprocess::ButterworthFilter f(3, 2.0, 100.0);
  double peak = 0.0;
  for (int k = 0; k < 4000; ++k) {
    const double y = f.Filter(std::sin(2.0 * std::numbers::pi * freq * k / 100.0));
    if (k >= 2000) peak = std::max(peak, std::abs(y));
  }
  return peak;
}

void Criterion6(const OfflineRun& ax1) {
  std::mt19937_64 rng(kSeed);
  std::string detail;
  bool all = true;
  const auto check = [&](const char* name, bool ok) {
    detail += std::string(name) + (ok ? " ok; " : " FAILED; ");
    all = all && ok;
  };

  bool idem = true;
  for (int r = 0; r < 50; ++r) {
    const auto p = table::ProjectMonotone(RandomTable(&rng, false));
    idem = idem && SameValues(table::ProjectMonotone(p), p);
  }
  check("projection idempotent", idem);

  // Command -> acceleration -> command at grid speeds, on grid commands and
  // between them.
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    const auto t = RandomTable(&rng, true);
    const table::InverseTableView inv(t);
    std::uniform_real_distribution<double> cmd(-100.0, 100.0);
    for (double speed : t.speed_grid()) {
      std::vector<double> cmds(t.cmd_grid().begin(), t.cmd_grid().end());
      for (int q = 0; q < 20; ++q) cmds.push_back(cmd(rng));
      for (double c : cmds) {
        worst = std::max(
            worst, std::abs(inv.LookupCmd(speed, t.LookupAcc(c, speed)) - c));
      }
    }
  }
  check("invert/lookup round trip", worst <= kRoundTripTol);

  {
    // Steep linear table: steps stay far below the row spacing, so the
    // monotone projection leaves every step untouched.
    const auto speeds = table::DefaultSpeedGrid(3.0);
    const auto cmds = table::DefaultCmdGrid();
    std::vector<double> acc;
    for (double c : cmds) {
      for (double s : speeds) acc.push_back(0.05 * c - 0.1 * s);
    }
    const table::CalibrationTable t(speeds, cmds, acc);
    online::OnlineConfig cfg;
    bool bounded = true;
    bool window_equal = true;
    std::uniform_real_distribution<double> c(-90.0, 90.0), s(0.0, 3.0),
        g(-1.0, 1.0);
    for (int q = 0; q < 50; ++q) {
      preprocess::OnlineFeedback fb;
      fb.cmd_ref = c(rng);
      fb.v_ref = s(rng);
      fb.acc_ref = t.LookupAcc(fb.cmd_ref, fb.v_ref);
      fb.acc_k = fb.acc_ref - g(rng);
      const auto r = online::UpdateTable(t, t, fb, cfg);
      const double limit = cfg.sigma * std::abs(r.gain);
      for (std::size_t i = 0; i < cmds.size(); ++i) {
        for (std::size_t j = 0; j < speeds.size(); ++j) {
          const double step = t.at(i, j) - r.table.at(i, j);
          bounded = bounded && std::abs(step) <= limit + 1e-15 &&
                    step * r.gain >= 0.0;
          if (online::InWindow(cmds[i], speeds[j], fb.cmd_ref, fb.v_ref, cfg)) {
            window_equal =
                window_equal && std::abs(std::abs(step) - limit) <= 1e-12;
          }
        }
      }
    }
    check("|step| <= sigma*|gain|", bounded);
    check("full step inside window", window_equal);
  }

  const double g2 = SineGain(2.0);
  const double g20 = SineGain(20.0);
  check("Butterworth 2 Hz gain",
        std::abs(g2 - 1.0 / std::sqrt(2.0)) <= kButterworthTol);
  check("Butterworth 20 Hz gain", g20 < kButterworthStop);
  detail += Fmt("(gains %.4f, %.5f); ", g2, g20);

  {
    using preprocess::SpeedAccConsistencyGate;
    const bool speed_acc =
        SpeedAccConsistencyGate(1.0, 0.9, 0.5, 0.4) &&
        SpeedAccConsistencyGate(0.9, 1.0, 0.4, 0.5) &&
        !SpeedAccConsistencyGate(1.0, 0.9, 0.4, 0.5) &&
        !SpeedAccConsistencyGate(0.9, 1.0, 0.5, 0.4) &&
        !SpeedAccConsistencyGate(1.0, 1.0, 0.5, 0.4) &&
        !SpeedAccConsistencyGate(1.0, 0.9, 0.5, 0.5);
    std::vector<double> times, steady, jump, near;
    for (int k = 0; k <= 40; ++k) {
      times.push_back(0.01 * k);
      steady.push_back(30.0);
      jump.push_back(k < 25 ? 30.0 : 40.0);
      near.push_back(k < 25 ? 30.0 : 39.9);
    }
    using preprocess::CommandConsistencyGate;
    const bool command = CommandConsistencyGate(times, steady, 0.2, 10.0) &&
                         !CommandConsistencyGate(times, jump, 0.2, 10.0) &&
                         CommandConsistencyGate(times, near, 0.2, 10.0);
    check("gate truth tables", speed_acc && command);
  }

  {
    const auto plant = simulator::Ax1Preset(300.0);
    simulator::TrapezoidOptions po;
    po.seed = kSeed;
    const auto run = simulator::RunClosedLoop(
        plant, ax1.result.table, simulator::TrapezoidProfile(plant.v_max, po),
        simulator::ClosedLoopOptions{});
    double integral = 0.0;
    double diff = 0.0;
    for (std::size_t k = 1; k < run.trace.size(); ++k) {
      if (run.trace[k].trip != run.trace[k - 1].trip) {
        integral = 0.0;
      } else {
        integral += run.trace[k].speed_error * plant.dt();
      }
      diff = std::max(diff, std::abs(integral - run.trace[k].station_error));
    }
    check("station error = integral of speed error", diff <= kStationTol);
    detail += Fmt("(%.0f s run, max gap %.1e m); ", run.trace.back().t, diff);
  }

  {
    simulator::DriverScript script;
    script.seed = kSeed;
    const bool log_same =
        simulator::GenerateDriveLog(ax1.plant, script) == ax1.log;
    offline::OfflineTrainConfig cfg;
    cfg.cross_validate = false;
    cfg.mlp.seed = kSeed;
    cfg.preprocess.seed = kSeed;
    const auto again = offline::TrainOffline(
        ax1.log, table::DefaultSpeedGrid(ax1.plant.v_max),
        table::DefaultCmdGrid(), cfg);
    const bool table_same = table::Serialize(again.table) ==
                            table::Serialize(ax1.result.table);
    const bool folds_same = offline::AssignFolds(1000, 10, kSeed) ==
                            offline::AssignFolds(1000, 10, kSeed);
    simulator::TrapezoidOptions po;
    po.duration = 120.0;
    simulator::ClosedLoopOptions lo;
    lo.online = online::OnlineConfig{};
    const auto plant = simulator::Ax1Preset(150.0);
    const auto prof = simulator::TrapezoidProfile(plant.v_max, po);
    const auto a = simulator::RunClosedLoop(plant, ax1.result.table, prof, lo);
    const auto b = simulator::RunClosedLoop(plant, ax1.result.table, prof, lo);
    const bool loop_same = simulator::TraceCsv(a.trace) ==
                               simulator::TraceCsv(b.trace) &&
                           SameValues(a.final_table, b.final_table);
    check("seeded determinism", log_same && table_same && folds_same && loop_same);
  }

  Report(6, all, "property suites", detail);
}

void Criterion7(const std::vector<OfflineRun>& runs, const SweepRun& s) {
  bool pass = true;
  std::string detail;
  for (const OfflineRun& run : runs) {
    const auto truth = simulator::TrueTable(
        run.plant, run.result.table.speed_grid(), run.result.table.cmd_grid());
    double worst = 0.0;
    std::size_t covered = 0;
    for (std::size_t k = 0; k < truth.num_cells(); ++k) {
      if (run.result.cell_counts[k] >= kCoveredMinSamples) {
        ++covered;
        worst = std::max(worst, std::abs(truth.values()[k] -
                                         run.result.table.values()[k]));
      }
    }
    pass = pass && covered > 0 && worst < kMaxOfflineCellError;
    detail += run.name + Fmt(" offline max error %.3f over %.0f covered cells; ",
                             worst, static_cast<double>(covered));
  }

  // After adaptation the table is judged where it was exercised: at each
  // visited cell's mean feedback point (cmd, v).
  for (double load : {kAdaptLoad, 360.0}) {
    const auto& lr = AtLoad(s, load);
    const auto plant = simulator::WithLoad(simulator::Ax1Preset(), load);
    const auto truth = simulator::TrueTable(plant, s.initial.speed_grid(),
                                            s.initial.cmd_grid());
    double op = 0.0;
    double grid = 0.0;
    std::size_t visited = 0;
    for (std::size_t k = 0; k < s.initial.num_cells(); ++k) {
      if (lr.visits.counts()[k] < kVisitedMinUpdates) continue;
      ++visited;
      const double c = lr.visits.MeanCmd(k);
      const double v = lr.visits.MeanSpeed(k);
      op = std::max(op, std::abs(lr.table_after.LookupAcc(c, v) -
                                 simulator::SteadyStateAcc(plant, c, v)));
      grid = std::max(grid,
                      std::abs(lr.table_after.values()[k] - truth.values()[k]));
    }
    if (load == kAdaptLoad) pass = pass && visited > 0 && op < kMaxOnlineCellError;
    detail += Fmt("%.0f kg online: %.0f visited cells, max error %.3f at "
                  "operating points, %.3f at grid nodes%s; ",
                  load, static_cast<double>(visited), op, grid);
    if (load != kAdaptLoad) detail.insert(detail.size() - 2, " (informational)");
  }
  Report(7, pass, "plant oracle equivalence", detail);
}

}  // namespace
}  // namespace autocalib

int main() {
  using namespace autocalib;
  const auto start = std::chrono::steady_clock::now();

  std::vector<OfflineRun> runs;
  runs.push_back(TrainVehicle("AX1", simulator::Ax1Preset()));
  runs.push_back(TrainVehicle("MKZ", simulator::MkzPreset()));
  Criterion1(runs);

  SweepRun sweep{runs[0].result.table, {}};
  simulator::LoadSweepOptions opts;
  opts.profile.seed = kSeed;
  opts.loop.seed = kSeed + 10;
  sweep.results = simulator::RunLoadSweep(simulator::Ax1Preset(), sweep.initial,
                                          opts);
  Criterion2(sweep);
  Criterion3(sweep);
  Criterion4(sweep);
  Criterion5(sweep);
  Criterion6(runs[0]);
  Criterion7(runs, sweep);

  std::printf("%d of 7 criteria failed (%.0f s)\n", failures,
              std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count());
  return failures == 0 ? 0 : 1;
}
