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

// Round-based simulation engine. One round is one simulated second.
//
// Phase order within a round (also the event kind order):
//   churn -> generate -> cluster-forward -> ids-check -> ledger-commit
//   -> controller-route -> cloud-flush -> idle -> depletion
// followed by mobility. Within a phase, subjects are processed in ascending
// id order, so the event log is totally ordered and replayable.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "vanetsim/cluster.hpp"
#include "vanetsim/config.hpp"
#include "vanetsim/control_plane.hpp"
#include "vanetsim/core.hpp"
#include "vanetsim/ids/flows.hpp"
#include "vanetsim/ledger.hpp"
#include "vanetsim/rng.hpp"

namespace vanetsim {

enum class EventKind : std::uint8_t {
  kChurn,
  kGenerate,
  kClusterForward,
  kIdsCheck,
  kLedgerCommit,
  kControllerRoute,
  kCloudFlush,
  kIdle,
  kDepletion,
};

enum class Outcome : std::uint8_t {
  kNone,       // intermediate step, message still moving
  kDelivered,
  kBlocked,    // IDS verdict malicious
  kDropped,    // no route, verification failure or drop rule
};

enum class DropCause : std::uint8_t {
  kNone,
  kNoRoute,
  kBadSignature,
  kNotOnChain,
  kBadClusterSignature,
  kMissingContent,
  kContentMismatch,
  kFlowDrop,
};

std::string_view to_string(EventKind k);
std::string_view to_string(Outcome o);
std::string_view to_string(DropCause c);

/// One line of the event log. `message_id` is 0 for records that are not
/// about a single message. `energy_mj` was drawn from `energy_vehicle`.
struct EventRecord {
  std::uint64_t round = 0;
  EventKind kind = EventKind::kGenerate;
  std::uint64_t subject = 0;
  std::uint64_t message_id = 0;
  std::uint64_t peer = 0;
  std::uint32_t bytes = 0;
  Outcome outcome = Outcome::kNone;
  DropCause cause = DropCause::kNone;
  double delay_s = 0.0;
  double t_n_effective = 0.0;
  double score = 0.0;
  double energy_mj = 0.0;
  std::uint64_t energy_vehicle = 0;
  std::uint64_t exchanged = 0;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct ClusterSnapshot {
  std::uint64_t round = 0;
  ClusterId cluster_id = 0;
  RsuId rsu_id = 0;
  VehicleId head_id = 0;
  std::uint64_t member_count = 0;
};

struct Counters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t blocked = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t exchanged = 0;
  double generated_bits = 0.0;
  double delivered_bits = 0.0;
  double total_delay_s = 0.0;
  double total_t_n_effective = 0.0;  // summed over delivered messages
  double energy_consumed_mj = 0.0;
  std::optional<std::uint64_t> first_depletion_round;  // 1-based round count
};

struct RunReport {
  ScenarioConfig config;
  std::uint64_t rounds_completed = 0;
  Counters counters;
  std::vector<EventRecord> events;
  std::vector<ClusterSnapshot> snapshots;
  std::vector<Vehicle> vehicles;
  std::vector<Rsu> rsus;
  std::map<ClusterId, Ledger> cluster_ledgers;
  Ledger cloud_ledger;
  std::size_t quarantined = 0;
  std::size_t stored_payloads = 0;
};

/// Feature vector dimensions of simulated flows.
inline constexpr Eigen::Index kFlowFeatureDims = 4;

/// Synthetic flow features: benign flows are concentrated around nominal
/// timing with the packet size as the first feature; malicious flows are
/// drawn from a far region (flood timing, long durations, bursts).
ids::FeatureVector benign_flow(Rng& rng, std::uint32_t packet_bytes, const PacketSizeRange& range);
ids::FeatureVector malicious_flow(Rng& rng, const PacketSizeRange& range);

/// Forest trained on unlabelled synthetic traffic (benign plus a small attack share) from the scenario seed.
ids::IsolationForest train_traffic_forest(const ScenarioConfig& cfg);

/// Roadside unit sites: a row-balanced grid, or uniform draws from the "rsus" stream.
std::vector<Position> place_rsus(const ScenarioConfig& cfg);

struct SimState;

/// Seeded discrete-event simulation of one scenario.
class Simulation {
 public:
  /// Throws ConfigError when `cfg` has violations and std::invalid_argument
  /// when the supplied forest does not match the traffic dimensionality.
  explicit Simulation(const ScenarioConfig& cfg, std::optional<ids::IsolationForest> forest = std::nullopt);
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  void step_round();
  /// Bounded random acceleration, speed clamp, boundary reflection.
  void step_mobility();
  /// Final cloud flush and report assembly. The simulation is spent after.
  RunReport finish();

  std::uint64_t round() const noexcept;
  const std::vector<Vehicle>& vehicles() const noexcept;
  std::vector<Vehicle>& mutable_vehicles() noexcept;
  const std::vector<Rsu>& rsus() const noexcept;
  const std::map<ClusterId, Cluster>& clusters() const noexcept;
  const Counters& counters() const noexcept;

 private:
  std::unique_ptr<SimState> state_;
};

/// Runs cfg.rounds rounds.
RunReport run(const ScenarioConfig& cfg, std::optional<ids::IsolationForest> forest = std::nullopt);

/// Mean end-to-end delay components for one delivered message.
double end_to_end_delay(const DelayModel& delays, double t_n_effective);

/// Delay of a delivered message in a report. Throws std::invalid_argument
/// for an unknown or undelivered message id.
double end_to_end_delay(const RunReport& report, std::uint64_t message_id);

void write_event_log(const RunReport& report, std::ostream& out);
/// Controller decisions only (round, message, action, verify outcome, t_s, t_n).
void write_controller_log(const RunReport& report, std::ostream& out);

}  // namespace vanetsim
