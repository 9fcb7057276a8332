/*
 * Copyright 2026 The vanetsim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vanetsim/config.hpp"

#include "vanetsim/csv.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vanetsim {
namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path + ": expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": cannot parse '" + node.Scalar() + "'");
  }
}

// Unsigned fields are read through int64 so that "-3" is reported rather
// than wrapped.
template <typename T>
T unsigned_scalar(const YAML::Node& node, const std::string& path) {
  const auto v = scalar<long long>(node, path);
  if (v < 0) throw ConfigError(path + ": must be non-negative");
  return static_cast<T>(v);
}

using Binder = std::function<void(const YAML::Node&, const std::string&)>;

template <typename T>
Binder bind(T& field) {
  return [&field](const YAML::Node& n, const std::string& path) {
    if constexpr (std::is_floating_point_v<T>)
      field = scalar<T>(n, path);
    else
      field = unsigned_scalar<T>(n, path);
  };
}

Binder section(std::map<std::string, Binder> fields) {
  return [fields = std::move(fields)](const YAML::Node& n, const std::string& path) {
    if (!n.IsMap()) throw ConfigError(path + ": expected a mapping");
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      auto it = fields.find(key);
      if (it == fields.end()) throw ConfigError(path + "." + key + ": unknown key");
      it->second(kv.second, path + "." + key);
    }
  };
}

std::map<std::string, Binder> binders(ScenarioConfig& c) {
  std::map<std::string, Binder> b;
  b["n_vehicles"] = bind(c.n_vehicles);
  b["n_rsus"] = bind(c.n_rsus);
  b["rounds"] = bind(c.rounds);
  b["seed"] = [&c](const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path + ": expected a scalar value");
    try {
      c.seed = n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path + ": cannot parse '" + n.Scalar() + "'");
    }
  };
  b["area"] = section({{"width", bind(c.area.width)}, {"height", bind(c.area.height)}});
  b["packet_size_range"] =
      section({{"min", bind(c.packet_size_range.min)}, {"max", bind(c.packet_size_range.max)}});
  b["delay_model"] = section({{"t_b", bind(c.delay_model.t_b)},
                              {"t_s", bind(c.delay_model.t_s)},
                              {"t_n", bind(c.delay_model.t_n)},
                              {"t_c", bind(c.delay_model.t_c)},
                              {"t_v", bind(c.delay_model.t_v)}});
  b["energy_model"] = section({{"initial_energy", bind(c.energy_model.initial_energy)},
                               {"tx_cost_per_byte", bind(c.energy_model.tx_cost_per_byte)},
                               {"rx_cost_per_byte", bind(c.energy_model.rx_cost_per_byte)},
                               {"idle_cost_per_round", bind(c.energy_model.idle_cost_per_round)},
                               {"ch_overhead_per_round", bind(c.energy_model.ch_overhead_per_round)}});
  b["gas_model"] = section({{"g0", bind(c.gas_model.g0)},
                            {"cb", bind(c.gas_model.cb)},
                            {"fixed_overhead", bind(c.gas_model.fixed_overhead)}});
  b["election_weights"] = section({{"w_signal", bind(c.election_weights.w_signal)},
                                   {"w_power", bind(c.election_weights.w_power)},
                                   {"w_type", bind(c.election_weights.w_type)}});
  b["ids_config"] = section({{"n_trees", bind(c.ids_config.forest.n_trees)},
                             {"subsample_size", bind(c.ids_config.forest.subsample_size)},
                             {"threshold", bind(c.ids_config.forest.threshold)},
                             {"training_samples", bind(c.ids_config.training_samples)},
                             {"training_contamination", bind(c.ids_config.training_contamination)}});
  b["cluster_size_target"] = [&c](const YAML::Node& n, const std::string& path) {
    if (n.IsNull() || (n.IsScalar() && (n.Scalar() == "none" || n.Scalar().empty()))) {
      c.cluster_size_target.reset();
      return;
    }
    c.cluster_size_target = unsigned_scalar<std::uint32_t>(n, path);
  };
  b["radio"] = section({{"tx_power_dbm", bind(c.radio.tx_power_dbm)},
                        {"path_loss_exp", bind(c.radio.path_loss_exp)},
                        {"coverage_radius", bind(c.radio.coverage_radius)},
                        {"rsu_layout", [&c](const YAML::Node& n, const std::string& path) {
                           const auto v = scalar<std::string>(n, path);
                           if (v == "grid")
                             c.radio.rsu_layout = RsuLayout::kGrid;
                           else if (v == "uniform")
                             c.radio.rsu_layout = RsuLayout::kUniform;
                           else
                             throw ConfigError(path + ": expected 'grid' or 'uniform', got '" + v + "'");
                         }}});
  b["mobility"] = section({{"max_speed", bind(c.mobility.max_speed)},
                           {"max_accel", bind(c.mobility.max_accel)},
                           {"max_decel", bind(c.mobility.max_decel)}});
  b["traffic"] = section({{"messages_per_round", bind(c.traffic.messages_per_round)},
                          {"malicious_fraction", bind(c.traffic.malicious_fraction)},
                          {"tamper_fraction", bind(c.traffic.tamper_fraction)}});
  b["clustering"] = section({{"recluster_interval", bind(c.clustering.recluster_interval)}});
  b["ledger"] = section({{"cloud_flush_interval", bind(c.ledger.cloud_flush_interval)}});
  b["control_plane"] = section({{"n_controllers", bind(c.control_plane.n_controllers)},
                                {"nfv_window", bind(c.control_plane.nfv_window)},
                                {"target_utilization", bind(c.control_plane.target_utilization)},
                                {"per_unit_capacity", bind(c.control_plane.per_unit_capacity)},
                                {"max_capacity", bind(c.control_plane.max_capacity)}});
  return b;
}

}  // namespace

namespace {

// Shortest round-trip text for reals; everything else passes through.
template <typename T>
auto v(const T& x) {
  if constexpr (std::is_floating_point_v<T>)
    return format_double(x);
  else
    return x;
}

}  // namespace

std::string_view to_string(RsuLayout layout) { return layout == RsuLayout::kGrid ? "grid" : "uniform"; }

std::vector<Violation> validate_config(const ScenarioConfig& cfg) {
  std::vector<Violation> out;
  auto check = [&out](bool ok, std::string path, std::string message) {
    if (!ok) out.push_back({std::move(path), std::move(message)});
  };
  auto finite_nonneg = [&](double v, const std::string& path) {
    check(std::isfinite(v) && v >= 0.0, path, "must be finite and >= 0");
  };

  check(cfg.n_vehicles > 0, "n_vehicles", "must be > 0");
  check(cfg.n_rsus > 0, "n_rsus", "must be > 0");
  check(std::isfinite(cfg.area.width) && cfg.area.width > 0.0, "area.width", "must be > 0");
  check(std::isfinite(cfg.area.height) && cfg.area.height > 0.0, "area.height", "must be > 0");
  check(cfg.packet_size_range.min > 0, "packet_size_range.min", "must be > 0");
  check(cfg.packet_size_range.min <= cfg.packet_size_range.max, "packet_size_range",
        "min must not exceed max");

  const auto& d = cfg.delay_model;
  finite_nonneg(d.t_b, "delay_model.t_b");
  finite_nonneg(d.t_s, "delay_model.t_s");
  finite_nonneg(d.t_n, "delay_model.t_n");
  finite_nonneg(d.t_c, "delay_model.t_c");
  finite_nonneg(d.t_v, "delay_model.t_v");
  check(d.t_b + d.t_s + d.t_n + d.t_c > 0.0, "delay_model", "t_b + t_s + t_n + t_c must be > 0");
  check(d.t_b + d.t_s + d.t_n + d.t_v > 0.0, "delay_model", "t_b + t_s + t_n + t_v must be > 0");

  const auto& e = cfg.energy_model;
  check(std::isfinite(e.initial_energy) && e.initial_energy > 0.0, "energy_model.initial_energy", "must be > 0");
  finite_nonneg(e.tx_cost_per_byte, "energy_model.tx_cost_per_byte");
  finite_nonneg(e.rx_cost_per_byte, "energy_model.rx_cost_per_byte");
  finite_nonneg(e.idle_cost_per_round, "energy_model.idle_cost_per_round");
  finite_nonneg(e.ch_overhead_per_round, "energy_model.ch_overhead_per_round");

  const auto& w = cfg.election_weights;
  const bool weights_in_range = w.w_signal >= 0.0 && w.w_signal <= 1.0 && w.w_power >= 0.0 && w.w_power <= 1.0 &&
                                w.w_type >= 0.0 && w.w_type <= 1.0;
  check(weights_in_range, "election_weights", "each weight must lie in [0, 1]");
  const double sum = w.w_signal + w.w_power + w.w_type;
  check(std::abs(sum - 1.0) <= 1e-9, "election_weights",
        "weights must sum to 1 (got " + std::to_string(sum) + ")");

  const auto& f = cfg.ids_config.forest;
  check(f.n_trees > 0, "ids_config.n_trees", "must be > 0");
  check(f.subsample_size >= 2, "ids_config.subsample_size", "must be >= 2");
  check(f.threshold > 0.0 && f.threshold < 1.0, "ids_config.threshold", "must lie in (0, 1)");
  check(cfg.ids_config.training_samples >= 2, "ids_config.training_samples", "must be >= 2");
  check(cfg.ids_config.training_contamination >= 0.0 && cfg.ids_config.training_contamination < 1.0,
        "ids_config.training_contamination", "must lie in [0, 1)");

  if (cfg.cluster_size_target) check(*cfg.cluster_size_target > 0, "cluster_size_target", "must be > 0 when set");

  check(std::isfinite(cfg.radio.tx_power_dbm), "radio.tx_power_dbm", "must be finite");
  check(std::isfinite(cfg.radio.path_loss_exp) && cfg.radio.path_loss_exp > 0.0, "radio.path_loss_exp", "must be > 0");
  check(std::isfinite(cfg.radio.coverage_radius) && cfg.radio.coverage_radius > 0.0, "radio.coverage_radius",
        "must be > 0");

  const auto& m = cfg.mobility;
  check(std::isfinite(m.max_speed) && m.max_speed > 0.0, "mobility.max_speed", "must be > 0");
  finite_nonneg(m.max_accel, "mobility.max_accel");
  finite_nonneg(m.max_decel, "mobility.max_decel");

  const auto& t = cfg.traffic;
  check(t.malicious_fraction >= 0.0 && t.malicious_fraction <= 1.0, "traffic.malicious_fraction", "must lie in [0, 1]");
  check(t.tamper_fraction >= 0.0 && t.tamper_fraction <= 1.0, "traffic.tamper_fraction", "must lie in [0, 1]");

  check(cfg.clustering.recluster_interval > 0, "clustering.recluster_interval", "must be > 0");
  check(cfg.ledger.cloud_flush_interval > 0, "ledger.cloud_flush_interval", "must be > 0");

  const auto& cp = cfg.control_plane;
  check(cp.n_controllers > 0, "control_plane.n_controllers", "must be > 0");
  check(cp.nfv_window > 0, "control_plane.nfv_window", "must be > 0");
  check(cp.target_utilization > 0.0 && cp.target_utilization <= 1.0, "control_plane.target_utilization",
        "must lie in (0, 1]");
  check(cp.per_unit_capacity > 0, "control_plane.per_unit_capacity", "must be > 0");
  check(cp.max_capacity > 0, "control_plane.max_capacity", "must be > 0");
  return out;
}

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) os << v.path << ": " << v.message << '\n';
  return os.str();
}

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  ScenarioConfig cfg;
  if (root.IsNull()) return cfg;
  if (!root.IsMap()) throw ConfigError("config root must be a mapping");
  auto table = binders(cfg);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key + ": unknown key");
    it->second(kv.second, key);
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ScenarioConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "n_vehicles" << YAML::Value << v(c.n_vehicles);
  out << YAML::Key << "n_rsus" << YAML::Value << v(c.n_rsus);
  out << YAML::Key << "area" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "width"
      << YAML::Value << v(c.area.width) << YAML::Key << "height" << YAML::Value << v(c.area.height) << YAML::EndMap;
  out << YAML::Key << "packet_size_range" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "min"
      << YAML::Value << v(c.packet_size_range.min) << YAML::Key << "max" << YAML::Value << v(c.packet_size_range.max)
      << YAML::EndMap;
  out << YAML::Key << "rounds" << YAML::Value << v(c.rounds);
  out << YAML::Key << "seed" << YAML::Value << v(c.seed);
  out << YAML::Key << "delay_model" << YAML::Value << YAML::BeginMap << YAML::Key << "t_b" << YAML::Value
      << v(c.delay_model.t_b) << YAML::Key << "t_s" << YAML::Value << v(c.delay_model.t_s) << YAML::Key << "t_n"
      << YAML::Value << v(c.delay_model.t_n) << YAML::Key << "t_c" << YAML::Value << v(c.delay_model.t_c) << YAML::Key
      << "t_v" << YAML::Value << v(c.delay_model.t_v) << YAML::EndMap;
  out << YAML::Key << "energy_model" << YAML::Value << YAML::BeginMap << YAML::Key << "initial_energy"
      << YAML::Value << v(c.energy_model.initial_energy) << YAML::Key << "tx_cost_per_byte" << YAML::Value
      << v(c.energy_model.tx_cost_per_byte) << YAML::Key << "rx_cost_per_byte" << YAML::Value
      << v(c.energy_model.rx_cost_per_byte) << YAML::Key << "idle_cost_per_round" << YAML::Value
      << v(c.energy_model.idle_cost_per_round) << YAML::Key << "ch_overhead_per_round" << YAML::Value
      << v(c.energy_model.ch_overhead_per_round) << YAML::EndMap;
  out << YAML::Key << "gas_model" << YAML::Value << YAML::BeginMap << YAML::Key << "g0" << YAML::Value
      << c.gas_model.g0 << YAML::Key << "cb" << YAML::Value << v(c.gas_model.cb) << YAML::Key << "fixed_overhead"
      << YAML::Value << v(c.gas_model.fixed_overhead) << YAML::EndMap;
  out << YAML::Key << "election_weights" << YAML::Value << YAML::BeginMap << YAML::Key << "w_signal"
      << YAML::Value << v(c.election_weights.w_signal) << YAML::Key << "w_power" << YAML::Value
      << v(c.election_weights.w_power) << YAML::Key << "w_type" << YAML::Value << v(c.election_weights.w_type)
      << YAML::EndMap;
  out << YAML::Key << "ids_config" << YAML::Value << YAML::BeginMap << YAML::Key << "n_trees" << YAML::Value
      << v(c.ids_config.forest.n_trees) << YAML::Key << "subsample_size" << YAML::Value
      << v(c.ids_config.forest.subsample_size) << YAML::Key << "threshold" << YAML::Value
      << v(c.ids_config.forest.threshold) << YAML::Key << "training_samples" << YAML::Value
      << v(c.ids_config.training_samples) << YAML::Key << "training_contamination" << YAML::Value
      << v(c.ids_config.training_contamination) << YAML::EndMap;
  out << YAML::Key << "cluster_size_target" << YAML::Value;
  if (c.cluster_size_target)
    out << *c.cluster_size_target;
  else
    out << YAML::Null;
  out << YAML::Key << "radio" << YAML::Value << YAML::BeginMap << YAML::Key << "tx_power_dbm" << YAML::Value
      << v(c.radio.tx_power_dbm) << YAML::Key << "path_loss_exp" << YAML::Value << v(c.radio.path_loss_exp) << YAML::Key
      << "coverage_radius" << YAML::Value << v(c.radio.coverage_radius) << YAML::Key << "rsu_layout" << YAML::Value
      << std::string(to_string(c.radio.rsu_layout)) << YAML::EndMap;
  out << YAML::Key << "mobility" << YAML::Value << YAML::BeginMap << YAML::Key << "max_speed" << YAML::Value
      << v(c.mobility.max_speed) << YAML::Key << "max_accel" << YAML::Value << v(c.mobility.max_accel) << YAML::Key
      << "max_decel" << YAML::Value << v(c.mobility.max_decel) << YAML::EndMap;
  out << YAML::Key << "traffic" << YAML::Value << YAML::BeginMap << YAML::Key << "messages_per_round"
      << YAML::Value << v(c.traffic.messages_per_round) << YAML::Key << "malicious_fraction" << YAML::Value
      << v(c.traffic.malicious_fraction) << YAML::Key << "tamper_fraction" << YAML::Value
      << v(c.traffic.tamper_fraction) << YAML::EndMap;
  out << YAML::Key << "clustering" << YAML::Value << YAML::BeginMap << YAML::Key << "recluster_interval"
      << YAML::Value << v(c.clustering.recluster_interval) << YAML::EndMap;
  out << YAML::Key << "ledger" << YAML::Value << YAML::BeginMap << YAML::Key << "cloud_flush_interval"
      << YAML::Value << v(c.ledger.cloud_flush_interval) << YAML::EndMap;
  out << YAML::Key << "control_plane" << YAML::Value << YAML::BeginMap << YAML::Key << "n_controllers"
      << YAML::Value << v(c.control_plane.n_controllers) << YAML::Key << "nfv_window" << YAML::Value
      << v(c.control_plane.nfv_window) << YAML::Key << "target_utilization" << YAML::Value
      << v(c.control_plane.target_utilization) << YAML::Key << "per_unit_capacity" << YAML::Value
      << v(c.control_plane.per_unit_capacity) << YAML::Key << "max_capacity" << YAML::Value
      << v(c.control_plane.max_capacity) << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace vanetsim
