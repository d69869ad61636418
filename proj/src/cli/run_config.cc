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

#include "autocalib/cli/run_config.h"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "autocalib/common/errors.h"

namespace autocalib {
namespace cli {
namespace {

using nlohmann::json;

void RequireObject(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError(where + " must be a JSON object");
  }
}

void RejectUnknown(const json& j, const std::string& where,
                   std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, const std::string& where, T* out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    *out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

void ReadVehicle(const json& j, RunConfig* c) {
  const std::string w = "vehicle";
  RequireObject(j, w);
  RejectUnknown(j, w, {"preset", "load", "imu_noise_std", "delay",
                       "sample_rate", "v_max"});
  Read(j, "preset", w, &c->vehicle);
  double load = 0.0;
  Read(j, "load", w, &load);
  if (c->vehicle == "ax1") {
    c->plant = simulator::Ax1Preset(load);
  } else if (c->vehicle == "mkz") {
    c->plant = simulator::MkzPreset(load);
  } else {
    throw ConfigError("vehicle.preset must be 'ax1' or 'mkz'");
  }
  Read(j, "imu_noise_std", w, &c->plant.imu_noise_std);
  Read(j, "delay", w, &c->plant.delay);
  Read(j, "sample_rate", w, &c->plant.sample_rate);
  Read(j, "v_max", w, &c->plant.v_max);
  simulator::ValidatePlant(c->plant);
}

void ReadDrive(const json& j, simulator::DriverScript* d) {
  const std::string w = "drive";
  RequireObject(j, w);
  RejectUnknown(j, w, {"duration", "min_dwell", "max_dwell", "max_cmd",
                       "turn_probability"});
  Read(j, "duration", w, &d->duration);
  Read(j, "min_dwell", w, &d->min_dwell);
  Read(j, "max_dwell", w, &d->max_dwell);
  Read(j, "max_cmd", w, &d->max_cmd);
  Read(j, "turn_probability", w, &d->turn_probability);
  if (!(d->duration > 0.0) || !(d->min_dwell > 0.0) ||
      d->max_dwell < d->min_dwell || !(d->max_cmd > 0.0) ||
      d->max_cmd > 100.0 || d->turn_probability < 0.0 ||
      d->turn_probability > 1.0) {
    throw ConfigError("drive values out of range");
  }
}

void ReadOffline(const json& j, offline::OfflineTrainConfig* o) {
  const std::string w = "offline";
  RequireObject(j, w);
  RejectUnknown(j, w, {"command_delay", "max_steer_deg", "min_speed",
                       "mean_window", "cell_cap", "deadband", "folds",
                       "cross_validate", "hidden", "epochs", "learning_rate",
                       "batch_size"});
  Read(j, "command_delay", w, &o->preprocess.command_delay);
  Read(j, "max_steer_deg", w, &o->preprocess.max_steer_deg);
  Read(j, "min_speed", w, &o->preprocess.min_speed);
  Read(j, "mean_window", w, &o->preprocess.mean_window);
  Read(j, "cell_cap", w, &o->preprocess.cell_cap);
  Read(j, "deadband", w, &o->deadband);
  Read(j, "folds", w, &o->folds);
  Read(j, "cross_validate", w, &o->cross_validate);
  Read(j, "hidden", w, &o->mlp.hidden);
  Read(j, "epochs", w, &o->mlp.epochs);
  Read(j, "learning_rate", w, &o->mlp.learning_rate);
  Read(j, "batch_size", w, &o->mlp.batch_size);
  if (o->folds < 2 || o->mlp.epochs == 0 || !(o->mlp.learning_rate > 0.0) ||
      o->mlp.batch_size == 0 || o->preprocess.cell_cap == 0 ||
      o->deadband < 0.0) {
    throw ConfigError("offline values out of range");
  }
}

void ReadOnline(const json& j, online::OnlineConfig* o) {
  const std::string w = "online";
  RequireObject(j, w);
  RejectUnknown(j, w, {"alpha", "beta", "m_cmd", "m_v", "epsilon", "iota",
                       "sigma", "delta_cmd", "delta_v", "delta_cmd_gap",
                       "gamma_v", "window_rule", "cmd_unit", "speed_unit"});
  Read(j, "alpha", w, &o->alpha);
  Read(j, "beta", w, &o->beta);
  Read(j, "m_cmd", w, &o->m_cmd);
  Read(j, "m_v", w, &o->m_v);
  Read(j, "epsilon", w, &o->epsilon);
  Read(j, "iota", w, &o->iota);
  Read(j, "sigma", w, &o->sigma);
  Read(j, "delta_cmd", w, &o->delta_cmd);
  Read(j, "delta_v", w, &o->delta_v);
  Read(j, "delta_cmd_gap", w, &o->delta_cmd_gap);
  Read(j, "gamma_v", w, &o->gamma_v);
  Read(j, "cmd_unit", w, &o->cmd_unit);
  Read(j, "speed_unit", w, &o->speed_unit);
  std::string rule;
  Read(j, "window_rule", w, &rule);
  if (rule == "either") {
    o->window_rule = online::WindowRule::kEither;
  } else if (rule == "both") {
    o->window_rule = online::WindowRule::kBoth;
  } else if (!rule.empty()) {
    throw ConfigError("online.window_rule must be 'either' or 'both'");
  }
  online::ValidateConfig(*o);
}

void ReadGates(const json& j, preprocess::OnlineGateConfig* g) {
  const std::string w = "gates";
  RequireObject(j, w);
  RejectUnknown(j, w, {"delay", "window", "max_steer_deg", "min_speed",
                       "cutoff_hz", "filter_order"});
  Read(j, "delay", w, &g->delay);
  Read(j, "window", w, &g->window);
  Read(j, "max_steer_deg", w, &g->max_steer_deg);
  Read(j, "min_speed", w, &g->min_speed);
  Read(j, "cutoff_hz", w, &g->cutoff_hz);
  Read(j, "filter_order", w, &g->filter_order);
  if (g->delay < 0.0 || !(g->window > 0.0) || !(g->cutoff_hz > 0.0) ||
      g->filter_order < 1) {
    throw ConfigError("gates values out of range");
  }
}

void ReadController(const json& j, simulator::ControllerConfig* c) {
  const std::string w = "controller";
  RequireObject(j, w);
  RejectUnknown(j, w, {"kp", "ki", "preview", "hold_brake", "stop_speed"});
  Read(j, "kp", w, &c->kp);
  Read(j, "ki", w, &c->ki);
  Read(j, "preview", w, &c->preview);
  Read(j, "hold_brake", w, &c->hold_brake);
  Read(j, "stop_speed", w, &c->stop_speed);
  if (c->kp < 0.0 || c->ki < 0.0 || c->preview < 0.0 || c->hold_brake > 0.0) {
    throw ConfigError("controller values out of range");
  }
}

void ReadProfile(const json& j, simulator::TrapezoidOptions* p) {
  const std::string w = "profile";
  RequireObject(j, w);
  RejectUnknown(j, w, {"duration", "min_accel", "max_accel"});
  Read(j, "duration", w, &p->duration);
  Read(j, "min_accel", w, &p->min_accel);
  Read(j, "max_accel", w, &p->max_accel);
  if (!(p->duration > 0.0) || !(p->min_accel > 0.0) ||
      p->max_accel < p->min_accel) {
    throw ConfigError("profile values out of range");
  }
}

void ReadSweep(const json& j, RunConfig* c) {
  const std::string w = "sweep";
  RequireObject(j, w);
  RejectUnknown(j, w, {"loads", "rounds", "diverge_error", "diverge_time"});
  Read(j, "loads", w, &c->loads);
  Read(j, "rounds", w, &c->rounds);
  Read(j, "diverge_error", w, &c->diverge_error);
  Read(j, "diverge_time", w, &c->diverge_time);
  if (c->loads.empty() || c->rounds == 0) {
    throw ConfigError("sweep needs at least one load and one round");
  }
  if (!(c->diverge_error > 0.0) || !(c->diverge_time > 0.0)) {
    throw ConfigError("sweep divergence limits must be positive");
  }
  for (double load : c->loads) {
    if (load < 0.0) throw ConfigError("sweep loads must be non-negative");
  }
}

}  // namespace

RunConfig ParseRunConfig(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RequireObject(root, "config");
  RejectUnknown(root, "config", {"vehicle", "drive", "offline", "online",
                                 "gates", "controller", "profile", "sweep"});
  RunConfig c;
  if (root.contains("vehicle")) ReadVehicle(root["vehicle"], &c);
  if (root.contains("drive")) ReadDrive(root["drive"], &c.drive);
  if (root.contains("offline")) ReadOffline(root["offline"], &c.offline);
  if (root.contains("online")) ReadOnline(root["online"], &c.online);
  if (root.contains("gates")) ReadGates(root["gates"], &c.gates);
  if (root.contains("controller")) {
    ReadController(root["controller"], &c.controller);
  }
  if (root.contains("profile")) ReadProfile(root["profile"], &c.profile);
  if (root.contains("sweep")) ReadSweep(root["sweep"], &c);
  c.gates.sample_rate = c.plant.sample_rate;
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str());
}

}  // namespace cli
}  // namespace autocalib
