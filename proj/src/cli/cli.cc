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

#include "autocalib/cli/cli.h"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"

#include "autocalib/cli/manifest.h"
#include "autocalib/cli/run_config.h"
#include "autocalib/common/errors.h"
#include "autocalib/offline/cross_validation.h"
#include "autocalib/offline/pipeline.h"
#include "autocalib/online/online_calibrator.h"
#include "autocalib/preprocess/drive_sample.h"
#include "autocalib/simulator/drive_log.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace cli {
namespace {

namespace fs = std::filesystem;
using table::FormatNumber;

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
};

void AddCommon(CLI::App* app, CommonOptions* o) {
  app->add_option("--config", o->config, "JSON experiment config");
  app->add_option("--seed", o->seed, "Seed for every random stage")
      ->capture_default_str();
  app->add_option("--out", o->out, "Output directory")->required();
}

RunConfig LoadConfig(const CommonOptions& o) {
  return o.config.empty() ? RunConfig{} : LoadRunConfig(o.config);
}

RunManifest StartManifest(const std::string& subcommand,
                          const CommonOptions& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + o.out);
  }
  RunManifest manifest(subcommand, o.seed, o.out);
  if (!o.config.empty()) manifest.AddConfig(o.config);
  return manifest;
}

void RequireFile(const std::string& path) {
  if (!fs::is_regular_file(path)) {
    throw ConfigError("no such file: " + path);
  }
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

int Generate(const CommonOptions& o, std::ostream& out) {
  RunConfig cfg = LoadConfig(o);
  cfg.drive.seed = o.seed;
  RunManifest manifest = StartManifest("generate", o);
  const auto log = simulator::GenerateDriveLog(cfg.plant, cfg.drive);
  const simulator::Coverage cov = simulator::GridCoverage(
      log, table::DefaultCmdGrid(), table::DefaultSpeedGrid(cfg.plant.v_max));
  manifest.WriteOutput("drive_log.csv", preprocess::WriteDriveLog(log));
  manifest.WriteOutput("coverage.csv",
                       "covered,total,fraction\n" + std::to_string(cov.covered) +
                           ',' + std::to_string(cov.total) + ',' +
                           FormatNumber(cov.fraction()) + '\n');
  manifest.Save();
  out << "wrote " << log.size() << " frames; grid coverage "
      << FormatNumber(100.0 * cov.fraction()) << " % (" << cov.covered << '/'
      << cov.total << " cells)\n";
  return kExitOk;
}

int Train(const CommonOptions& o, const std::string& log_path,
          std::ostream& out) {
  RunConfig cfg = LoadConfig(o);
  cfg.offline.mlp.seed = o.seed;
  cfg.offline.preprocess.seed = o.seed;
  RequireFile(log_path);
  RunManifest manifest = StartManifest("train", o);
  manifest.AddInput(log_path);
  // An empty file is a log without samples, not a malformed one.
  const auto log = fs::file_size(log_path) == 0
                       ? std::vector<preprocess::DriveSample>{}
                       : preprocess::LoadDriveLog(log_path);
  const auto start = std::chrono::steady_clock::now();
  const offline::OfflineTrainResult result = offline::TrainOffline(
      log, table::DefaultSpeedGrid(cfg.plant.v_max), table::DefaultCmdGrid(),
      cfg.offline);
  const double wall = Seconds(start);
  manifest.WriteOutput("table.txt", table::Serialize(result.table));
  if (!result.reports.empty()) {
    manifest.WriteOutput("cv_report.csv", offline::CvReportCsv(result.reports));
  }
  manifest.AddNote("build_seconds", result.build_seconds);
  manifest.AddNote("cv_seconds", result.cv_seconds);
  manifest.AddNote("wall_seconds", wall);
  manifest.Save();
  out << "throttle samples " << result.throttle_samples << ", brake samples "
      << result.brake_samples << '\n';
  for (const offline::CvReport& r : result.reports) {
    out << r.model << ": MAE " << FormatNumber(r.mae) << " RMSE "
        << FormatNumber(r.rmse) << '\n';
  }
  out << "table build " << FormatNumber(result.build_seconds)
      << " s, cross-validation " << FormatNumber(result.cv_seconds) << " s\n";
  return kExitOk;
}

std::string LoadTag(double load) {
  std::ostringstream s;
  s << load;
  return s.str();
}

int Simulate(const CommonOptions& o, const std::string& table_path,
             bool online, const std::vector<double>& loads,
             std::optional<std::size_t> rounds, bool traces,
             std::size_t snapshot_every, std::ostream& out) {
  RunConfig cfg = LoadConfig(o);
  if (!loads.empty()) cfg.loads = loads;
  if (rounds) cfg.rounds = *rounds;
  if (cfg.rounds == 0) throw ConfigError("--rounds must be positive");
  for (double load : cfg.loads) {
    if (load < 0.0) throw ConfigError("loads must be non-negative");
  }
  RequireFile(table_path);
  RunManifest manifest = StartManifest("simulate", o);
  manifest.AddInput(table_path);
  const table::CalibrationTable initial = table::LoadTable(table_path);

  simulator::LoadSweepOptions sweep;
  sweep.loads = cfg.loads;
  sweep.rounds = cfg.rounds;
  sweep.run_online = online;
  sweep.run_offline = true;
  sweep.profile = cfg.profile;
  sweep.profile.seed = o.seed;
  sweep.loop.controller = cfg.controller;
  sweep.loop.gates = cfg.gates;
  sweep.loop.seed = o.seed + 10;
  sweep.loop.snapshot_every = snapshot_every;
  sweep.loop.diverge_error = cfg.diverge_error;
  sweep.loop.diverge_time = cfg.diverge_time;
  sweep.online = cfg.online;
  sweep.on_round = [&](const simulator::RoundResult& r,
                       const simulator::ClosedLoopResult& run) {
    const std::string tag = std::string(r.online ? "on" : "off") + '_' +
                            LoadTag(r.load) + "_" + std::to_string(r.round);
    if (traces) {
      manifest.WriteOutput("trace_" + tag + ".csv", simulator::TraceCsv(run.trace));
    }
    if (r.online) {
      std::string log = online::SessionLogHeader() + '\n';
      for (const online::CycleRecord& u : run.updates) {
        log += online::SessionLogRow(u) + '\n';
      }
      manifest.WriteOutput("session_" + tag + ".csv", log);
      if (!run.snapshots.empty()) {
        std::string csv = "snapshot,cmd,v,acc\n";
        for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
          std::istringstream rows(HeatmapCsv(run.snapshots[s]));
          std::string line;
          std::getline(rows, line);  // header
          while (std::getline(rows, line)) {
            csv += std::to_string(s) + ',' + line + '\n';
          }
        }
        manifest.WriteOutput("snapshots_" + tag + ".csv", csv);
      }
    }
    out << (r.online ? "ON " : "OFF") << " load " << LoadTag(r.load)
        << " round " << r.round << ": speed MAE "
        << FormatNumber(r.metrics.speed_mae) << ", station MAE "
        << FormatNumber(r.metrics.station_mae) << '\n';
  };

  const auto results = simulator::RunLoadSweep(cfg.plant, initial, sweep);
  const std::string rounds_csv = RoundsCsv(cfg.vehicle, results);
  manifest.WriteOutput("rounds.csv", rounds_csv);
  manifest.WriteOutput("report.csv",
                       AggregateReport(std::vector<std::string>{rounds_csv}));
  if (online) {
    std::vector<double> latencies;
    for (const simulator::LoadResult& lr : results) {
      const std::string tag = LoadTag(lr.load);
      manifest.WriteOutput("table_before_" + tag + ".txt",
                           table::Serialize(lr.table_before));
      manifest.WriteOutput("table_after_" + tag + ".txt",
                           table::Serialize(lr.table_after));
      latencies.insert(latencies.end(), lr.latencies.begin(),
                       lr.latencies.end());
    }
    if (!latencies.empty()) {
      std::sort(latencies.begin(), latencies.end());
      const double p99 =
          latencies[std::min(latencies.size() - 1, latencies.size() * 99 / 100)];
      manifest.AddNote("update_latency_p99_ms", 1e3 * p99);
      manifest.AddNote("update_latency_max_ms", 1e3 * latencies.back());
      out << "online update plus publish: p99 " << FormatNumber(1e3 * p99)
          << " ms over " << latencies.size() << " updates\n";
    }
  }
  manifest.Save();
  return kExitOk;
}

int Heatmap(const CommonOptions& o, const std::string& table_path,
            std::ostream& out) {
  RequireFile(table_path);
  RunManifest manifest = StartManifest("heatmap", o);
  manifest.AddInput(table_path);
  const table::CalibrationTable t = table::LoadTable(table_path);
  manifest.WriteOutput("heatmap.csv", HeatmapCsv(t));
  manifest.Save();
  out << "wrote " << t.num_cells() << " cells\n";
  return kExitOk;
}

int Report(const CommonOptions& o, const std::vector<std::string>& inputs,
           std::ostream& out) {
  std::vector<std::string> texts;
  for (const std::string& path : inputs) {
    RequireFile(path);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    texts.push_back(buf.str());
  }
  RunManifest manifest = StartManifest("report", o);
  for (const std::string& path : inputs) manifest.AddInput(path);
  const std::string report = AggregateReport(texts);
  manifest.WriteOutput("report.csv", report);
  manifest.Save();
  out << report;
  return kExitOk;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) fields.push_back(field);
  return fields;
}

double ToDouble(const std::string& text, std::size_t line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used == text.size()) return x;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected a number, got '" + text + "'");
}

}  // namespace

std::string HeatmapCsv(const table::CalibrationTable& t) {
  std::string csv = "cmd,v,acc\n";
  for (std::size_t i = 0; i < t.num_cmd(); ++i) {
    for (std::size_t j = 0; j < t.num_speed(); ++j) {
      csv += FormatNumber(t.cmd_grid()[i]) + ',' +
             FormatNumber(t.speed_grid()[j]) + ',' + FormatNumber(t.at(i, j)) +
             '\n';
    }
  }
  return csv;
}

std::string RoundsCsv(const std::string& scenario,
                      std::span<const simulator::LoadResult> results) {
  std::string csv =
      "scenario,load,online,round,speed_mae,speed_rmse,station_mae,"
      "station_rmse\n";
  const auto row = [&](const simulator::RoundResult& r) {
    csv += scenario + ',' + FormatNumber(r.load) + ',' +
           (r.online ? "1" : "0") + ',' + std::to_string(r.round) + ',' +
           FormatNumber(r.metrics.speed_mae) + ',' +
           FormatNumber(r.metrics.speed_rmse) + ',' +
           FormatNumber(r.metrics.station_mae) + ',' +
           FormatNumber(r.metrics.station_rmse) + '\n';
  };
  for (const simulator::LoadResult& lr : results) {
    for (const auto& r : lr.offline_rounds) row(r);
    for (const auto& r : lr.online_rounds) row(r);
  }
  return csv;
}

std::string AggregateReport(std::span<const std::string> rounds_csvs) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::pair<std::array<double, 4>, std::size_t>> sums;
  for (const std::string& text : rounds_csvs) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      if (header) {
        if (line.rfind("scenario,load,online,round,", 0) != 0) {
          throw ParseError(line_no, "not a rounds CSV");
        }
        header = false;
        continue;
      }
      const auto f = SplitCsvLine(line);
      if (f.size() != 8) throw ParseError(line_no, "expected 8 fields");
      const Key key{f[0], FormatNumber(ToDouble(f[1], line_no)), f[2]};
      auto [it, inserted] = sums.try_emplace(key);
      if (inserted) order.push_back(key);
      for (std::size_t m = 0; m < 4; ++m) {
        it->second.first[m] += ToDouble(f[4 + m], line_no);
      }
      ++it->second.second;
    }
  }
  std::string csv =
      "scenario,load,online,speed_mae,speed_rmse,station_mae,station_rmse\n";
  for (const Key& key : order) {
    const auto& [sum, n] = sums.at(key);
    csv += std::get<0>(key) + ',' + std::get<1>(key) + ',' + std::get<2>(key);
    for (double s : sum) csv += ',' + FormatNumber(s / static_cast<double>(n));
    csv += '\n';
  }
  return csv;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Vehicle longitudinal calibration table toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  CLI::App* generate = app.add_subcommand("generate", "Simulate a manual drive log");
  AddCommon(generate, &common);

  std::string log_path;
  CLI::App* train = app.add_subcommand("train", "Build a table from a drive log");
  AddCommon(train, &common);
  train->add_option("log", log_path, "Drive log CSV")->required();

  std::string table_path;
  bool online = false;
  std::vector<double> loads;
  std::optional<std::size_t> rounds;
  bool traces = false;
  std::size_t snapshot_every = 0;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Closed-loop speed tracking over loads");
  AddCommon(simulate, &common);
  simulate->add_option("table", table_path, "Calibration table file")->required();
  simulate->add_flag("--online", online, "Also run with online calibration");
  simulate->add_option("--loads", loads, "Cargo loads in kg, e.g. 0,150,300")
      ->delimiter(',');
  simulate->add_option("--rounds", rounds, "Rounds per load");
  simulate->add_flag("--traces", traces, "Write per-frame traces");
  simulate->add_option("--snapshot-every", snapshot_every,
                       "Online table snapshot period in cycles, 0 = none");

  CLI::App* heatmap = app.add_subcommand("heatmap", "Grid dump of a table");
  AddCommon(heatmap, &common);
  heatmap->add_option("table", table_path, "Calibration table file")->required();

  std::vector<std::string> report_inputs;
  CLI::App* report =
      app.add_subcommand("report", "Aggregate rounds.csv files by load");
  AddCommon(report, &common);
  report->add_option("rounds_csv", report_inputs, "rounds.csv files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) return Generate(common, out);
    if (*train) return Train(common, log_path, out);
    if (*simulate) {
      return Simulate(common, table_path, online, loads, rounds, traces,
                      snapshot_every, out);
    }
    if (*heatmap) return Heatmap(common, table_path, out);
    if (*report) return Report(common, report_inputs, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TooFewSamples& e) {
    err << "insufficient data: " << e.what() << '\n';
    return kExitTooFewSamples;
  } catch (const Diverged& e) {
    err << "simulation diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cli
}  // namespace autocalib
