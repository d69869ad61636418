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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "autocalib/common/errors.h"
#include "autocalib/online/online_update.h"
#include "autocalib/simulator/closed_loop.h"
#include "autocalib/simulator/drive_log.h"
#include "autocalib/simulator/load_sweep.h"
#include "autocalib/simulator/plant.h"
#include "autocalib/table/calibration_table.h"

namespace autocalib {
namespace simulator {
namespace {

// Constant-force plant: no drag, rolling resistance, power cap or delay.
PlantConfig FrictionlessPlant() {
  PlantConfig p;
  p.mass = 250.0;
  p.throttle = ForceMap({0.0, 100.0}, {0.0, 1000.0});
  p.brake = ForceMap({0.0, 100.0}, {0.0, 1000.0});
  p.max_power = 0.0;
  p.drag = 0.0;
  p.rolling_coeff = 0.0;
  p.delay = 0.0;
  p.imu_noise_std = 0.0;
  p.v_max = 100.0;
  return p;
}

table::CalibrationTable Truth(const PlantConfig& plant) {
  return TrueTable(plant, table::DefaultSpeedGrid(plant.v_max),
                   table::DefaultCmdGrid());
}

std::vector<double> Values(const table::CalibrationTable& t) {
  return {t.values().begin(), t.values().end()};
}

TEST(PlantTest, ConstantForceIntegratesExactly) {
  const PlantConfig p = FrictionlessPlant();
  PlantState s = InitialState(p);
  const double force = 1000.0 * 0.4;
  for (int k = 0; k < 500; ++k) PlantStep(p, 40.0, p.dt(), &s);
  const double t = 500 * p.dt();
  EXPECT_NEAR(s.v, force / p.mass * t, 1e-6);
  EXPECT_NEAR(s.acc, force / p.mass, 1e-6);
}

TEST(PlantTest, ZeroCommandFromRestStaysAtRest) {
  PlantConfig p = Ax1Preset();
  p.rolling_coeff = 0.0;
  PlantState s = InitialState(p);
  for (int k = 0; k < 300; ++k) PlantStep(p, 0.0, p.dt(), &s);
  EXPECT_EQ(s.v, 0.0);
  EXPECT_EQ(s.station, 0.0);
}

TEST(PlantTest, DoubledMassHalvesAcceleration) {
  PlantConfig light = FrictionlessPlant();
  PlantConfig heavy = light;
  heavy.load = light.mass;
  EXPECT_NEAR(SteadyStateAcc(heavy, 30.0, 1.0),
              0.5 * SteadyStateAcc(light, 30.0, 1.0), 1e-12);
}

TEST(PlantTest, CoastingSpeedNeverIncreases) {
  const PlantConfig p = Ax1Preset();
  PlantState s = InitialState(p, 2.5);
  double last = s.v;
  for (int k = 0; k < 2000; ++k) {
    PlantStep(p, 0.0, p.dt(), &s);
    EXPECT_LE(s.v, last);
    EXPECT_GE(s.v, 0.0);
    last = s.v;
  }
  EXPECT_LT(last, 2.5);
}

TEST(PlantTest, ActuatorDelayHoldsCommandBack) {
  PlantConfig p = FrictionlessPlant();
  p.delay = 0.2;
  PlantState s = InitialState(p);
  for (int k = 0; k < 20; ++k) PlantStep(p, 50.0, p.dt(), &s);
  EXPECT_EQ(s.v, 0.0);
  PlantStep(p, 50.0, p.dt(), &s);
  EXPECT_GT(s.v, 0.0);
}

TEST(PlantTest, HeavierLoadLowersWholeTable) {
  const auto light = Truth(Ax1Preset(0.0));
  const auto heavy = Truth(Ax1Preset(300.0));
  for (std::size_t k = 0; k < light.num_cells(); ++k) {
    if (light.values()[k] > 0.0) {
      EXPECT_LT(heavy.values()[k], light.values()[k]);
    }
  }
}

TEST(PlantTest, RejectsInvalidConfig) {
  PlantConfig p = Ax1Preset();
  p.mass = 0.0;
  EXPECT_THROW(ValidatePlant(p), ConfigError);
  p = Ax1Preset();
  p.sample_rate = -1.0;
  EXPECT_THROW(ValidatePlant(p), ConfigError);
}

TEST(DriveLogTest, NoiselessLogMatchesPlant) {
  PlantConfig p = Ax1Preset();
  p.imu_noise_std = 0.0;
  DriverScript script;
  script.duration = 60.0;
  const auto log = GenerateDriveLog(p, script);
  ASSERT_GT(log.size(), 5000u);
  PlantState s = InitialState(p);
  for (const auto& row : log) {
    ASSERT_NEAR(row.v, s.v, 1e-12);
    PlantStep(p, row.cmd, p.dt(), &s);
    ASSERT_NEAR(row.acc, s.acc, 1e-12);
  }
}

TEST(DriveLogTest, SeededRunsAreIdentical) {
  DriverScript script;
  script.duration = 120.0;
  const auto a = GenerateDriveLog(Ax1Preset(), script);
  const auto b = GenerateDriveLog(Ax1Preset(), script);
  EXPECT_EQ(a, b);
  script.seed = 2;
  EXPECT_NE(a, GenerateDriveLog(Ax1Preset(), script));
}

TEST(DriveLogTest, TwentyMinutesCoverTheGrid) {
  const PlantConfig p = Ax1Preset();
  const auto log = GenerateDriveLog(p, DriverScript{});
  const Coverage c = GridCoverage(log, table::DefaultCmdGrid(),
                                  table::DefaultSpeedGrid(p.v_max));
  EXPECT_GE(c.fraction(), 0.8);
}

TEST(MetricsTest, HandValues) {
  const std::vector<double> a{1.0, -1.0};
  EXPECT_DOUBLE_EQ(Summarize(a).mae, 1.0);
  EXPECT_DOUBLE_EQ(Summarize(a).rmse, 1.0);
  const std::vector<double> b{0.0, 2.0};
  EXPECT_DOUBLE_EQ(Summarize(b).mae, 1.0);
  EXPECT_DOUBLE_EQ(Summarize(b).rmse, std::sqrt(2.0));
  EXPECT_THROW(Summarize(std::vector<double>{}), EmptyTrace);
  EXPECT_THROW(ComputeMetrics(std::vector<TraceFrame>{}), EmptyTrace);
}

TEST(ProfileTest, TrapezoidStaysWithinLimits) {
  TrapezoidOptions o;
  o.duration = 300.0;
  const SpeedProfile prof = TrapezoidProfile(3.0, o);
  EXPECT_GE(prof.duration(), 300.0);
  EXPECT_LE(prof.max_speed(), 3.0);
  for (double t = 0.0; t < prof.duration(); t += 0.05) {
    EXPECT_GE(prof.Speed(t), 0.0);
    EXPECT_LE(std::abs(prof.Acceleration(t)), o.max_accel + 1e-9);
  }
  EXPECT_GT(prof.TripIndex(prof.duration()), 3u);
}

TEST(ClosedLoopTest, ExactTableTracksTightly) {
  PlantConfig p = Ax1Preset();
  TrapezoidOptions o;
  o.duration = 300.0;
  const auto r = RunClosedLoop(p, Truth(p), TrapezoidProfile(p.v_max, o),
                               ClosedLoopOptions{});
  EXPECT_LT(r.metrics.speed_mae, 0.02);
  EXPECT_TRUE(r.updates.empty());
}

TEST(ClosedLoopTest, StationErrorIsIntegratedSpeedError) {
  const PlantConfig p = Ax1Preset(300.0);
  const SpeedProfile prof = TrapezoidProfile(p.v_max, TrapezoidOptions{});
  const auto r = RunClosedLoop(p, Truth(Ax1Preset()), prof,
                               ClosedLoopOptions{});
  ASSERT_GE(r.trace.back().t, 900.0 - 1e-9);
  // Running sum of speed error times dt, restarted at each trip. Each step
  // advances the position with the speed at the end of the step.
  double integral = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    const TraceFrame& prev = r.trace[k - 1];
    const TraceFrame& cur = r.trace[k];
    if (cur.trip != prev.trip) {
      integral = 0.0;
    } else {
      integral += cur.speed_error * p.dt();
    }
    worst = std::max(worst, std::abs(integral - cur.station_error));
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(ClosedLoopTest, RunsAreBitDeterministic) {
  const PlantConfig p = Ax1Preset(150.0);
  TrapezoidOptions o;
  o.duration = 120.0;
  const SpeedProfile prof = TrapezoidProfile(p.v_max, o);
  ClosedLoopOptions opts;
  opts.online = online::OnlineConfig{};
  const auto a = RunClosedLoop(p, Truth(Ax1Preset()), prof, opts);
  const auto b = RunClosedLoop(p, Truth(Ax1Preset()), prof, opts);
  EXPECT_EQ(TraceCsv(a.trace), TraceCsv(b.trace));
  EXPECT_EQ(Values(a.final_table), Values(b.final_table));
}

TEST(ClosedLoopTest, HopelessTableDiverges) {
  const PlantConfig p = Ax1Preset();
  // Claims every command yields a huge acceleration, so the controller
  // barely presses the pedal and the vehicle lags far behind.
  const auto truth = Truth(p);
  std::vector<double> acc = Values(truth);
  for (std::size_t i = 0; i < truth.num_cmd(); ++i) {
    for (std::size_t j = 0; j < truth.num_speed(); ++j) {
      acc[i * truth.num_speed() + j] = 100.0 * truth.cmd_grid()[i];
    }
  }
  const table::CalibrationTable bad(truth.speed_grid(), truth.cmd_grid(), acc);
  ClosedLoopOptions opts;
  opts.controller.kp = 0.0;
  opts.controller.ki = 0.0;
  opts.diverge_error = 1.0;
  TrapezoidOptions o;
  o.duration = 120.0;
  EXPECT_THROW(RunClosedLoop(p, bad, TrapezoidProfile(p.v_max, o), opts),
               Diverged);
}

TEST(ClosedLoopTest, SnapshotsMatchReplayedUpdates) {
  const PlantConfig p = Ax1Preset(300.0);
  const auto init = Truth(Ax1Preset());
  TrapezoidOptions o;
  o.duration = 120.0;
  ClosedLoopOptions opts;
  opts.online = online::OnlineConfig{};
  opts.snapshot_every = 1000;
  const auto r = RunClosedLoop(p, init, TrapezoidProfile(p.v_max, o), opts);
  ASSERT_FALSE(r.updates.empty());
  ASSERT_GE(r.snapshots.size(), 12u);

  // Snapshot s is taken after control cycle 1000 * s + 1.
  table::CalibrationTable replay = init;
  std::size_t next = 0;
  for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
    const std::uint64_t cycle = 1000 * s + 1;
    while (next < r.updates.size() && r.updates[next].cycle <= cycle) {
      replay = online::UpdateTable(replay, init, r.updates[next].feedback,
                                   *opts.online).table;
      ++next;
    }
    EXPECT_EQ(Values(r.snapshots[s]), Values(replay)) << "snapshot " << s;
  }
  for (; next < r.updates.size(); ++next) {
    replay = online::UpdateTable(replay, init, r.updates[next].feedback,
                                 *opts.online).table;
  }
  EXPECT_EQ(Values(r.final_table), Values(replay));
  for (std::size_t k = 0; k < init.num_cells(); ++k) {
    if (r.visit_counts[k] > 0) {
      EXPECT_NE(r.final_table.values()[k], init.values()[k]);
    }
  }
}

TEST(LoadSweepTest, ShapeAndCarryOver) {
  LoadSweepOptions o;
  o.loads = {0.0, 300.0};
  o.rounds = 2;
  o.profile.duration = 60.0;
  const auto init = Truth(Ax1Preset());
  const auto res = RunLoadSweep(Ax1Preset(), init, o);
  ASSERT_EQ(res.size(), 2u);
  for (const LoadResult& lr : res) {
    EXPECT_EQ(lr.online_rounds.size(), 2u);
    EXPECT_EQ(lr.offline_rounds.size(), 2u);
  }
  EXPECT_EQ(Values(res[1].table_before), Values(res[0].table_after));
  EXPECT_NE(Values(res[1].table_after), Values(init));
}

}  // namespace
}  // namespace simulator
}  // namespace autocalib
