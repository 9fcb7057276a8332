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

#pragma once

// Scenario configuration. Defaults reproduce the reference environment:
// 80 vehicles, 10 RSUs, 100-512 byte packets, speed <= 50 m/s,
// acceleration <= 3.6 m/s^2, deceleration <= 5 m/s^2.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vanetsim/gas.hpp"
#include "vanetsim/ids/iforest.hpp"

namespace vanetsim {

/// Per-stage delays in seconds.
struct DelayModel {
  double t_b = 0.25;  // ledger validation
  double t_s = 0.05;  // SDN processing
  double t_n = 0.05;  // NFV allocation (base)
  double t_c = 0.02;  // member to head
  double t_v = 0.03;  // vehicle to infrastructure
};

struct EnergyModel {
  double initial_energy = 5000.0;  // mJ per vehicle at start
  double tx_cost_per_byte = 0.002;
  double rx_cost_per_byte = 0.001;
  double idle_cost_per_round = 0.5;
  double ch_overhead_per_round = 1.0;
};

struct ElectionWeights {
  double w_signal = 0.4;
  double w_power = 0.4;
  double w_type = 0.2;
};

struct IdsConfig {
  // Cutoff sits between the benign and attack score bands of the synthetic traffic.
  ids::ForestParams forest{100, 256, 0.66};
  std::uint32_t training_samples = 2048;
  double training_contamination = 0.02;
};

struct Area {
  double width = 2000.0;
  double height = 2000.0;
};

struct PacketSizeRange {
  std::uint32_t min = 100;
  std::uint32_t max = 512;
};

enum class RsuLayout { kGrid, kUniform };

std::string_view to_string(RsuLayout layout);

struct RadioConfig {
  double tx_power_dbm = 20.0;
  double path_loss_exp = 2.7;
  double coverage_radius = 500.0;
  RsuLayout rsu_layout = RsuLayout::kGrid;
};

struct MobilityConfig {
  double max_speed = 50.0;
  double max_accel = 3.6;
  double max_decel = 5.0;
};

struct TrafficConfig {
  std::uint32_t messages_per_round = 1;  // per vehicle
  double malicious_fraction = 0.05;
  double tamper_fraction = 0.0;  // stored payloads corrupted in transit
};

struct ClusteringConfig {
  std::uint32_t recluster_interval = 50;
};

struct LedgerConfig {
  std::uint32_t cloud_flush_interval = 10;
};

struct ControlPlaneConfig {
  std::uint32_t n_controllers = 2;
  std::uint32_t nfv_window = 5;
  double target_utilization = 0.8;
  std::uint32_t per_unit_capacity = 10;  // messages per round per unit
  std::uint32_t max_capacity = 16;       // units
};

struct ScenarioConfig {
  std::uint32_t n_vehicles = 80;
  std::uint32_t n_rsus = 10;
  Area area{};
  PacketSizeRange packet_size_range{};
  std::uint32_t rounds = 1000;
  std::uint64_t seed = 1;
  DelayModel delay_model{};
  EnergyModel energy_model{};
  GasModel gas_model{};
  ElectionWeights election_weights{};
  IdsConfig ids_config{};
  std::optional<std::uint32_t> cluster_size_target;
  RadioConfig radio{};
  MobilityConfig mobility{};
  TrafficConfig traffic{};
  ClusteringConfig clustering{};
  LedgerConfig ledger{};
  ControlPlaneConfig control_plane{};
};

struct Violation {
  std::string path;
  std::string message;
};

/// Every invariant the engine relies on; empty means runnable.
std::vector<Violation> validate_config(const ScenarioConfig& cfg);

std::string format_violations(const std::vector<Violation>& violations);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// YAML mapping, flat or one level deep, keyed by the field names above.
/// Unknown keys and type errors throw ConfigError. Missing keys keep defaults.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace vanetsim
