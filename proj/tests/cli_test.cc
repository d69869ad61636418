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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "autocalib/cli/cli.h"
#include "autocalib/cli/manifest.h"
#include "autocalib/cli/run_config.h"
#include "autocalib/common/errors.h"
#include "autocalib/simulator/plant.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("autocalib_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "autocalib");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return RunCli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  std::string Read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

constexpr const char* kShortDrive = R"({"drive": {"duration": 300}})";

TEST(ManifestTest, Sha256KnownVectors) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunConfigTest, DefaultsAndOverrides) {
  const RunConfig d = ParseRunConfig("{}");
  EXPECT_EQ(d.vehicle, "ax1");
  EXPECT_EQ(d.loads.size(), 4u);
  const RunConfig c = ParseRunConfig(R"({
    "vehicle": {"preset": "mkz", "load": 100},
    "online": {"sigma": 0.2, "window_rule": "either"},
    "sweep": {"loads": [0, 50], "rounds": 2}})");
  EXPECT_EQ(c.plant.total_mass(), simulator::MkzPreset(100.0).total_mass());
  EXPECT_EQ(c.online.sigma, 0.2);
  EXPECT_EQ(c.online.window_rule, online::WindowRule::kEither);
  EXPECT_EQ(c.loads, (std::vector<double>{0.0, 50.0}));
  EXPECT_EQ(c.rounds, 2u);
}

TEST(RunConfigTest, RejectsBadInput) {
  EXPECT_THROW(ParseRunConfig("{"), ConfigError);
  EXPECT_THROW(ParseRunConfig("[]"), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"extra": {}})"), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"online": {"sigmaa": 1}})"), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"online": {"sigma": 2}})"), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"online": {"sigma": "x"}})"), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"vehicle": {"preset": "bus"}})"),
               ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"sweep": {"rounds": 0}})"), ConfigError);
}

TEST(ReportTest, AggregatesRoundsByLoadAndMode) {
  const std::string a =
      "scenario,load,online,round,speed_mae,speed_rmse,station_mae,"
      "station_rmse\n"
      "ax1,0,1,0,1,2,3,4\n"
      "ax1,300,0,0,5,5,5,5\n";
  const std::string b =
      "scenario,load,online,round,speed_mae,speed_rmse,station_mae,"
      "station_rmse\n"
      "ax1,0,1,1,3,4,5,6\n";
  EXPECT_EQ(AggregateReport(std::vector<std::string>{a, b}),
            "scenario,load,online,speed_mae,speed_rmse,station_mae,"
            "station_rmse\n"
            "ax1,0,1,2,3,4,5\n"
            "ax1,300,0,5,5,5,5\n");
  EXPECT_THROW(AggregateReport(std::vector<std::string>{"x,y\n"}),
               ParseError);
}

TEST_F(CliTest, GenerateIsByteIdenticalPerSeed) {
  Write("c.json", kShortDrive);
  ASSERT_EQ(Run({"generate", "--config", Path("c.json"), "--out", Path("a")}),
            kExitOk);
  ASSERT_EQ(Run({"generate", "--config", Path("c.json"), "--out", Path("b")}),
            kExitOk);
  ASSERT_EQ(Run({"generate", "--config", Path("c.json"), "--seed", "2",
                 "--out", Path("c")}),
            kExitOk);
  EXPECT_FALSE(Read("a/drive_log.csv").empty());
  EXPECT_EQ(Read("a/drive_log.csv"), Read("b/drive_log.csv"));
  EXPECT_NE(Read("a/drive_log.csv"), Read("c/drive_log.csv"));
  EXPECT_EQ(FileSha256(Path("a/drive_log.csv")),
            FileSha256(Path("b/drive_log.csv")));
  EXPECT_NE(Read("a/manifest.json").find(FileSha256(Path("a/drive_log.csv"))),
            std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(Run({"generate", "--config", Path("missing.json"), "--out",
                 Path("o")}),
            kExitConfig);
  Write("bad.json", R"({"drive": {"duration": -1}})");
  EXPECT_EQ(Run({"generate", "--config", Path("bad.json"), "--out", Path("o")}),
            kExitConfig);
  EXPECT_EQ(Run({"generate"}), kExitConfig);
  EXPECT_EQ(Run({"nonsense"}), kExitConfig);
}

TEST_F(CliTest, TrainOnEmptyLogExitsThree) {
  Write("empty.csv", "");
  EXPECT_EQ(Run({"train", Path("empty.csv"), "--out", Path("t")}),
            kExitTooFewSamples);
  Write("header.csv", "t,cmd,v,acc,theta,mode\n");
  EXPECT_EQ(Run({"train", Path("header.csv"), "--out", Path("t")}),
            kExitTooFewSamples);
}

TEST_F(CliTest, TrainWritesTableAndReport) {
  Write("c.json", R"({"drive": {"duration": 300}, "offline": {"folds": 3}})");
  ASSERT_EQ(Run({"generate", "--config", Path("c.json"), "--out", Path("g")}),
            kExitOk);
  ASSERT_EQ(Run({"train", Path("g/drive_log.csv"), "--config", Path("c.json"),
                 "--out", Path("t")}),
            kExitOk)
      << err_.str();
  const table::CalibrationTable t = table::Deserialize(Read("t/table.txt"));
  EXPECT_EQ(t.num_cells(), 656u);
  const std::string cv = Read("t/cv_report.csv");
  ASSERT_EQ(cv.rfind("model,fold,mae,rmse\n", 0), 0u);
  const auto mean_mae = [&](const std::string& model) {
    const std::string key = model + ",mean,";
    const std::size_t at = cv.find(key);
    EXPECT_NE(at, std::string::npos) << model;
    return std::stod(cv.substr(at + key.size()));
  };
  EXPECT_LT(mean_mae("nn_throttle"), mean_mae("linear_throttle"));
  EXPECT_LT(mean_mae("nn_brake"), mean_mae("linear_brake"));
}

class SimulateTest : public CliTest {
 protected:
  void SetUp() override {
    CliTest::SetUp();
    const auto p = simulator::Ax1Preset();
    table::SaveTable(simulator::TrueTable(p, table::DefaultSpeedGrid(p.v_max),
                                          table::DefaultCmdGrid()),
                     Path("table.txt"));
    Write("c.json", R"({"profile": {"duration": 60}})");
  }
};

TEST_F(SimulateTest, LoadSweepShapeAndDeterminism) {
  const std::vector<std::string> args = {
      "simulate", Path("table.txt"), "--config", Path("c.json"), "--online",
      "--loads", "0,300", "--rounds", "2"};
  auto a = args;
  a.insert(a.end(), {"--out", Path("a")});
  auto b = args;
  b.insert(b.end(), {"--out", Path("b")});
  ASSERT_EQ(Run(a), kExitOk) << err_.str();
  ASSERT_EQ(Run(b), kExitOk);

  std::istringstream rounds(Read("a/rounds.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(rounds, line)) ++rows;
  EXPECT_EQ(rows, 1u + 2 * 2 * 2);
  std::istringstream report(Read("a/report.csv"));
  rows = 0;
  while (std::getline(report, line)) ++rows;
  EXPECT_EQ(rows, 1u + 2 * 2);

  for (const char* name : {"rounds.csv", "report.csv", "table_after_300.txt",
                           "session_on_300_1.csv"}) {
    EXPECT_EQ(Read(std::string("a/") + name), Read(std::string("b/") + name))
        << name;
  }
  EXPECT_NE(Read("a/table_before_300.txt"), Read("a/table_after_300.txt"));
  EXPECT_EQ(Read("a/table_before_300.txt"), Read("a/table_after_0.txt"));
}

TEST_F(SimulateTest, OfflineOnlyWritesNoSnapshots) {
  ASSERT_EQ(Run({"simulate", Path("table.txt"), "--config", Path("c.json"),
                 "--loads", "150", "--rounds", "1", "--traces", "--out",
                 Path("o")}),
            kExitOk);
  EXPECT_FALSE(fs::exists(dir_ / "o/table_after_150.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "o/trace_off_150_0.csv"));
}

TEST_F(SimulateTest, DivergenceExitsFour) {
  // A table that promises far more acceleration than the plant delivers,
  // with feedback disabled, leaves the vehicle far behind.
  const auto p = simulator::Ax1Preset();
  const auto truth = table::LoadTable(Path("table.txt"));
  std::vector<double> acc(truth.values().begin(), truth.values().end());
  for (std::size_t i = 0; i < truth.num_cmd(); ++i) {
    for (std::size_t j = 0; j < truth.num_speed(); ++j) {
      acc[i * truth.num_speed() + j] = 100.0 * truth.cmd_grid()[i];
    }
  }
  table::SaveTable(
      table::CalibrationTable(truth.speed_grid(), truth.cmd_grid(), acc),
      Path("bad.txt"));
  Write("d.json",
        R"({"profile": {"duration": 60}, "controller": {"kp": 0, "ki": 0},
            "sweep": {"diverge_error": 1.0}})");
  EXPECT_EQ(Run({"simulate", Path("bad.txt"), "--config", Path("d.json"),
                 "--loads", "0", "--rounds", "1", "--out", Path("o")}),
            kExitDiverged);
}

TEST_F(SimulateTest, HeatmapMatchesTable) {
  ASSERT_EQ(Run({"heatmap", Path("table.txt"), "--out", Path("h")}), kExitOk);
  const table::CalibrationTable t = table::LoadTable(Path("table.txt"));
  std::istringstream csv(Read("h/heatmap.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "cmd,v,acc");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    double cmd, v, acc;
    char c1, c2;
    std::istringstream(line) >> cmd >> c1 >> v >> c2 >> acc;
    EXPECT_NEAR(acc, t.LookupAcc(cmd, v), 1e-9) << line;
    ++rows;
  }
  EXPECT_EQ(rows, t.num_cells());
  Write("garbage.txt", "not a table\n");
  EXPECT_EQ(Run({"heatmap", Path("garbage.txt"), "--out", Path("h2")}),
            kExitConfig);
}

}  // namespace
}  // namespace cli
}  // namespace autocalib
