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

#include "vanetsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace vanetsim {
namespace {

constexpr ClusterId kNoCluster = std::numeric_limits<ClusterId>::max();
constexpr std::int32_t kClusterRoutePriority = 10;
// Digest, signature and addressing forwarded by a head per message.
constexpr std::uint32_t kForwardRecordBytes = 128;

double clipped_normal(Rng& rng) { return std::clamp(rng.normal(), -2.0, 2.0); }

DropCause cause_from(RejectReason r) {
  switch (r) {
    case RejectReason::kBadSignature: return DropCause::kBadSignature;
    case RejectReason::kContentMismatch: return DropCause::kContentMismatch;
    case RejectReason::kMissingContent: return DropCause::kMissingContent;
  }
  return DropCause::kBadSignature;
}

DropCause cause_from(VerifyFailure f) {
  switch (f) {
    case VerifyFailure::kNotOnChain: return DropCause::kNotOnChain;
    case VerifyFailure::kBadClusterSignature: return DropCause::kBadClusterSignature;
    case VerifyFailure::kMissingContent: return DropCause::kMissingContent;
    case VerifyFailure::kContentMismatch: return DropCause::kContentMismatch;
  }
  return DropCause::kNotOnChain;
}

struct Pending {
  std::uint64_t id = 0;
  VehicleId sender = 0;
  ClusterId cluster = 0;
  VehicleId head = 0;
  std::uint32_t bytes = 0;
  bool tamper = false;
  ids::FeatureVector features;
  SignedMessage sm;
  bool resolved = false;
};

}  // namespace

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kChurn: return "churn";
    case EventKind::kGenerate: return "generate";
    case EventKind::kClusterForward: return "cluster-forward";
    case EventKind::kIdsCheck: return "ids-check";
    case EventKind::kLedgerCommit: return "ledger-commit";
    case EventKind::kControllerRoute: return "controller-route";
    case EventKind::kCloudFlush: return "cloud-flush";
    case EventKind::kIdle: return "idle";
    case EventKind::kDepletion: return "depletion";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kNone: return "none";
    case Outcome::kDelivered: return "delivered";
    case Outcome::kBlocked: return "blocked";
    case Outcome::kDropped: return "dropped";
  }
  return "unknown";
}

std::string_view to_string(DropCause c) {
  switch (c) {
    case DropCause::kNone: return "none";
    case DropCause::kNoRoute: return "no-route";
    case DropCause::kBadSignature: return "bad-signature";
    case DropCause::kNotOnChain: return "not-on-chain";
    case DropCause::kBadClusterSignature: return "bad-cluster-signature";
    case DropCause::kMissingContent: return "missing-content";
    case DropCause::kContentMismatch: return "content-mismatch";
    case DropCause::kFlowDrop: return "flow-drop";
  }
  return "unknown";
}

ids::FeatureVector benign_flow(Rng& rng, std::uint32_t packet_bytes, const PacketSizeRange& range) {
  ids::FeatureVector f(kFlowFeatureDims);
  f << static_cast<double>(packet_bytes) / range.max, 1.0 + 0.05 * clipped_normal(rng),
      2.0 + 0.2 * clipped_normal(rng), 1.0 + 0.1 * clipped_normal(rng);
  return f;
}

ids::FeatureVector malicious_flow(Rng& rng, const PacketSizeRange& range) {
  ids::FeatureVector f(kFlowFeatureDims);
  // Flood-style flows: tiny packets, near-zero gaps, long and widely spread bursts.
  const double bytes = rng.uniform(0.1, 0.6) * range.min;
  f << bytes / range.max, rng.uniform(0.0, 0.3), rng.uniform(6.0, 46.0), rng.uniform(4.0, 44.0);
  return f;
}

std::vector<Position> place_rsus(const ScenarioConfig& cfg) {
  std::vector<Position> sites;
  sites.reserve(cfg.n_rsus);
  if (cfg.radio.rsu_layout == RsuLayout::kUniform) {
    Rng rng = Rng(cfg.seed).split("rsus");
    for (std::uint32_t i = 0; i < cfg.n_rsus; ++i)
      sites.emplace_back(rng.uniform(0.0, cfg.area.width), rng.uniform(0.0, cfg.area.height));
    return sites;
  }
  if (cfg.n_rsus == 0) return sites;
  // Rows follow the aspect ratio; sites are spread as evenly as possible across them.
  const double n = cfg.n_rsus;
  const auto rows = static_cast<std::uint32_t>(
      std::clamp<long long>(std::llround(std::sqrt(n * cfg.area.height / cfg.area.width)), 1, cfg.n_rsus));
  for (std::uint32_t r = 0; r < rows; ++r) {
    const std::uint32_t count = cfg.n_rsus / rows + (r < cfg.n_rsus % rows ? 1 : 0);
    const double y = (r + 0.5) * cfg.area.height / rows;
    for (std::uint32_t j = 0; j < count; ++j) sites.emplace_back((j + 0.5) * cfg.area.width / count, y);
  }
  return sites;
}

ids::IsolationForest train_traffic_forest(const ScenarioConfig& cfg) {
  Rng rng = Rng(cfg.seed).split("ids-training");
  const auto n = static_cast<Eigen::Index>(cfg.ids_config.training_samples);
  ids::FeatureMatrix data(n, kFlowFeatureDims);
  // Unlabelled capture: mostly benign with a small share of attack flows.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rng.bernoulli(cfg.ids_config.training_contamination)) {
      data.row(i) = malicious_flow(rng, cfg.packet_size_range).transpose();
      continue;
    }
    const auto bytes = static_cast<std::uint32_t>(
        rng.uniform_int(cfg.packet_size_range.min, cfg.packet_size_range.max));
    data.row(i) = benign_flow(rng, bytes, cfg.packet_size_range).transpose();
  }
  return ids::fit(data, cfg.ids_config.forest, derive_seed(cfg.seed, "ids-forest"));
}

double end_to_end_delay(const DelayModel& d, double t_n_effective) {
  return d.t_c + d.t_b + d.t_s + t_n_effective + d.t_v;
}

struct SimState {
  ScenarioConfig cfg;
  Rng mobility_rng;
  Rng traffic_rng;
  std::vector<Vehicle> vehicles;
  std::vector<Rsu> rsus;
  std::map<ClusterId, Cluster> clusters;
  ClusterLedgers ledgers;
  Ledger cloud;
  std::map<ClusterId, std::uint64_t> next_anchor;
  ControlPlane control;
  NfvPolicy nfv;
  std::vector<double> load_history;
  ContentStore store;
  ContentStore quarantine;
  ids::IsolationForest forest;
  Counters counters;
  std::vector<EventRecord> events;
  std::vector<ClusterSnapshot> snapshots;
  std::uint64_t round = 0;
  std::uint64_t next_message_id = 1;
  bool head_depleted = false;
  bool finished = false;

  explicit SimState(const ScenarioConfig& c)
      : cfg(c),
        mobility_rng(Rng(c.seed).split("mobility")),
        traffic_rng(Rng(c.seed).split("traffic")),
        cloud(make_ledger(LedgerTier::kCloud, 0, c.gas_model)),
        control(c.control_plane.n_controllers),
        nfv(nfv_policy_from(c)) {
    ledgers.seed = c.seed;
    ledgers.gas = c.gas_model;
  }

  Vehicle& vehicle(VehicleId id) { return vehicles[static_cast<std::size_t>(id)]; }

  double drain(VehicleId id, double amount) {
    Vehicle& v = vehicle(id);
    const double applied = std::min(v.energy, amount);
    v.energy -= applied;
    counters.energy_consumed_mj += applied;
    return applied;
  }

  EventRecord& log(EventKind kind, std::uint64_t subject, std::uint64_t message_id = 0) {
    EventRecord e;
    e.round = round;
    e.kind = kind;
    e.subject = subject;
    e.message_id = message_id;
    events.push_back(e);
    return events.back();
  }

  void populate() {
    Rng vrng = Rng(cfg.seed).split("vehicles");
    vehicles.resize(cfg.n_vehicles);
    for (std::uint32_t i = 0; i < cfg.n_vehicles; ++i) {
      Vehicle& v = vehicles[i];
      v.id = i;
      v.position = Position(vrng.uniform(0.0, cfg.area.width), vrng.uniform(0.0, cfg.area.height));
      v.max_speed = cfg.mobility.max_speed;
      v.max_accel = cfg.mobility.max_accel;
      v.max_decel = cfg.mobility.max_decel;
      v.speed = vrng.uniform(0.0, v.max_speed);
      v.heading = vrng.uniform(0.0, 2.0 * std::numbers::pi);
      v.processing_power = vrng.uniform();
      v.vehicle_type_weight = vrng.uniform();
      v.energy = cfg.energy_model.initial_energy;
      v.key_pair = generate_keypair(cfg.seed, "vehicle", i);
    }
    const std::vector<Position> sites = place_rsus(cfg);
    rsus.resize(cfg.n_rsus);
    for (std::uint32_t i = 0; i < cfg.n_rsus; ++i) {
      rsus[i].id = i;
      rsus[i].position = sites[i];
      rsus[i].coverage_radius = cfg.radio.coverage_radius;
    }
  }

  void install_route(ClusterId id, FlowAction action) {
    FlowRule rule;
    rule.match = {id, Destination::kCloud};
    rule.action = action;
    rule.priority = kClusterRoutePriority;
    rule.installed_round = round;
    control.controller(control.controller_for(id)).register_flow(rule);
  }

  void snapshot() {
    for (const auto& [id, c] : clusters) snapshots.push_back({round, id, c.rsu_id, c.head, c.members.size()});
  }

  void recluster() {
    Clustering formed = form_clusters(vehicles, rsus, cfg, ledgers, round, &clusters);
    std::map<ClusterId, Cluster> next;
    for (auto& c : formed.clusters) next.emplace(c.id, std::move(c));
    for (const auto& [id, c] : clusters)
      if (!next.contains(id)) install_route(id, FlowAction::kDrop);
    for (auto& v : vehicles) v.cluster_id.reset();
    for (auto& r : rsus) r.cluster_ids.clear();
    for (const auto& [id, c] : next) {
      install_route(id, FlowAction::kForwardToCloud);
      for (VehicleId m : c.members) vehicle(m).cluster_id = id;
      rsus[static_cast<std::size_t>(c.rsu_id)].cluster_ids.insert(id);
      auto& e = log(EventKind::kChurn, id);
      e.peer = c.head;
      e.exchanged = c.members.size() + 1;
      counters.exchanged += e.exchanged;
    }
    clusters = std::move(next);
    head_depleted = false;
    snapshot();
  }

  void remove_depleted_members() {
    std::set<VehicleId> clustered;
    for (const auto& [id, c] : clusters) clustered.insert(c.members.begin(), c.members.end());
    bool changed = false;
    for (auto it = clusters.begin(); it != clusters.end();) {
      Cluster& c = it->second;
      std::set<VehicleId> departed;
      for (VehicleId m : c.members)
        if (vehicle(m).depleted()) departed.insert(m);
      if (departed.empty()) {
        ++it;
        continue;
      }
      changed = true;
      const auto result = handle_churn(c, departed, {}, vehicles, rsus[static_cast<std::size_t>(c.rsu_id)], cfg,
                                       ledgers, round, clustered);
      for (VehicleId m : departed) vehicle(m).cluster_id.reset();
      auto& e = log(EventKind::kChurn, c.id);
      e.peer = c.head;
      e.exchanged = departed.size() + (result.head_changed ? c.members.size() + 1 : 0);
      counters.exchanged += e.exchanged;
      if (result.dissolved) {
        install_route(c.id, FlowAction::kDrop);
        rsus[static_cast<std::size_t>(c.rsu_id)].cluster_ids.erase(c.id);
        it = clusters.erase(it);
      } else {
        ++it;
      }
    }
    if (changed) snapshot();
  }

  void flush_to_cloud() {
    std::vector<Transaction> txs;
    for (const auto& [id, ledger] : ledgers.ledgers) {
      auto& next = next_anchor[id];
      for (; next < ledger.blocks.size(); ++next)
        txs.push_back(make_verification_tx(id, next, ledger.blocks[next].hash));
    }
    if (txs.empty()) return;
    auto& e = log(EventKind::kCloudFlush, 0);
    e.exchanged = txs.size();
    counters.exchanged += e.exchanged;
    append_block(cloud, std::move(txs), round, true);
  }

  void step() {
    const auto& energy = cfg.energy_model;

    // churn
    if (round % cfg.clustering.recluster_interval == 0 || head_depleted)
      recluster();
    else
      remove_depleted_members();

    std::vector<bool> alive(vehicles.size());
    for (std::size_t i = 0; i < vehicles.size(); ++i) alive[i] = !vehicles[i].depleted();

    // generate
    std::vector<Pending> pending;
    for (auto& v : vehicles) {
      if (!alive[v.id]) continue;
      for (std::uint32_t k = 0; k < cfg.traffic.messages_per_round; ++k) {
        Pending p;
        p.id = next_message_id++;
        p.sender = v.id;
        p.bytes = static_cast<std::uint32_t>(
            traffic_rng.uniform_int(cfg.packet_size_range.min, cfg.packet_size_range.max));
        const bool malicious = traffic_rng.bernoulli(cfg.traffic.malicious_fraction);
        p.tamper = traffic_rng.bernoulli(cfg.traffic.tamper_fraction);
        p.features = malicious ? malicious_flow(traffic_rng, cfg.packet_size_range)
                               : benign_flow(traffic_rng, p.bytes, cfg.packet_size_range);
        Bytes payload;
        payload.reserve(p.bytes);
        put_u64(payload, p.id);
        put_u64(payload, p.sender);
        put_u64(payload, round);
        while (payload.size() < p.bytes) put_u64(payload, traffic_rng.next_u64());
        payload.resize(p.bytes);

        p.cluster = v.cluster_id.value_or(kNoCluster);
        p.sm = sign_message(payload, v.id, p.cluster, round, v.key_pair, store);

        auto& e = log(EventKind::kGenerate, v.id, p.id);
        e.bytes = p.bytes;
        e.energy_mj = drain(v.id, p.bytes * energy.tx_cost_per_byte);
        e.energy_vehicle = v.id;
        e.exchanged = 1;
        ++counters.sent;
        ++counters.exchanged;
        counters.generated_bits += 8.0 * p.bytes;
        if (!v.cluster_id) {
          e.outcome = Outcome::kDropped;
          e.cause = DropCause::kNoRoute;
          ++counters.dropped;
          continue;
        }
        e.peer = p.cluster;
        p.head = clusters.at(p.cluster).head;
        pending.push_back(std::move(p));
      }
    }

    // cluster-forward: member -> head
    for (const auto& p : pending) {
      auto& e = log(EventKind::kClusterForward, p.sender, p.id);
      e.peer = p.head;
      e.bytes = p.bytes;
      if (p.sender != p.head) {
        e.energy_mj = drain(p.head, p.bytes * energy.rx_cost_per_byte);
        e.energy_vehicle = p.head;
        e.exchanged = 1;
        ++counters.exchanged;
      }
    }

    // ids-check at the head
    for (auto& p : pending) {
      auto& e = log(EventKind::kIdsCheck, p.sender, p.id);
      e.peer = p.head;
      e.score = forest.anomaly_score(p.features);
      if (ids::classify_score(e.score, forest.threshold()) == ids::Verdict::kMalicious) {
        if (auto payload = store.get(p.sm.content_id)) quarantine.put(*payload);
        store.erase(p.sm.content_id);
        e.outcome = Outcome::kBlocked;
        ++counters.blocked;
        p.resolved = true;
      }
    }

    // ledger-commit: head checks the member signature, commits the digest
    std::map<ClusterId, std::vector<Transaction>> batches;
    for (auto& p : pending) {
      if (p.resolved) continue;
      auto& e = log(EventKind::kLedgerCommit, p.sender, p.id);
      e.peer = p.cluster;
      const auto check = verify_message(p.sm, vehicle(p.sender).key_pair.public_key(), store);
      if (!check) {
        e.outcome = Outcome::kDropped;
        e.cause = cause_from(check.reason);
        ++counters.dropped;
        p.resolved = true;
        continue;
      }
      batches[p.cluster].push_back(make_message_tx(p.sm));
    }
    for (auto& [cid, txs] : batches) {
      auto& e = log(EventKind::kLedgerCommit, cid);
      e.exchanged = clusters.at(cid).members.size();
      counters.exchanged += e.exchanged;
      append_block(ledgers.ledger_for(cid), std::move(txs), round, true);
    }
    for (const auto& p : pending) {
      if (p.resolved || !p.tamper) continue;
      if (auto payload = store.get(p.sm.content_id)) {
        (*payload)[payload->size() / 2] ^= 0x01;
        store.overwrite(p.sm.content_id, std::move(*payload));
      }
    }

    // controller-route
    double load = 0.0;
    for (const auto& p : pending)
      if (!p.resolved) load += 1.0;
    const std::uint32_t capacity =
        load_history.empty() ? 1 : allocate_resources(load_history, nfv).capacity_units;
    const double t_n = effective_t_n(load, capacity, nfv);
    for (auto& p : pending) {
      if (p.resolved) continue;
      const Cluster& c = clusters.at(p.cluster);
      auto& e = log(EventKind::kControllerRoute, p.sender, p.id);
      e.peer = p.cluster;
      e.bytes = p.bytes;
      e.t_n_effective = t_n;
      e.energy_mj = drain(c.head, kForwardRecordBytes * energy.tx_cost_per_byte);
      e.energy_vehicle = c.head;
      e.exchanged = 1;
      ++counters.exchanged;
      p.resolved = true;

      const auto verdict = two_step_verify(endorse(p.sm, c.key_pair), c.key_pair.public_key(),
                                           ledgers.ledger_for(p.cluster), store);
      if (!verdict) {
        e.outcome = Outcome::kDropped;
        e.cause = cause_from(verdict.reason);
        ++counters.dropped;
        continue;
      }
      const auto& sdn = control.controller(control.controller_for(p.cluster));
      if (sdn.lookup({p.cluster, Destination::kCloud}) != FlowAction::kForwardToCloud) {
        e.outcome = Outcome::kDropped;
        e.cause = DropCause::kFlowDrop;
        ++counters.dropped;
        continue;
      }
      e.outcome = Outcome::kDelivered;
      e.delay_s = end_to_end_delay(cfg.delay_model, t_n);
      ++counters.delivered;
      counters.delivered_bits += 8.0 * p.bytes;
      counters.total_delay_s += e.delay_s;
      counters.total_t_n_effective += t_n;
    }
    load_history.push_back(load);
    if (load_history.size() > nfv.window) load_history.erase(load_history.begin());

    // cloud-flush
    if ((round + 1) % cfg.ledger.cloud_flush_interval == 0) flush_to_cloud();

    // idle
    std::set<VehicleId> heads;
    for (const auto& [id, c] : clusters) heads.insert(c.head);
    for (auto& v : vehicles) {
      if (!alive[v.id]) continue;
      auto& e = log(EventKind::kIdle, v.id);
      const double cost = energy.idle_cost_per_round + (heads.contains(v.id) ? energy.ch_overhead_per_round : 0.0);
      e.energy_mj = drain(v.id, cost);
      e.energy_vehicle = v.id;
    }

    // depletion
    for (auto& v : vehicles) {
      if (!alive[v.id] || !v.depleted()) continue;
      log(EventKind::kDepletion, v.id);
      if (!counters.first_depletion_round) counters.first_depletion_round = round + 1;
      if (heads.contains(v.id)) head_depleted = true;
    }

    move_vehicles();
    ++round;
  }

  void move_vehicles() {
    const double w = cfg.area.width, h = cfg.area.height;
    for (auto& v : vehicles) {
      const double accel = mobility_rng.uniform(-v.max_decel, v.max_accel);
      v.speed = std::clamp(v.speed + accel, 0.0, v.max_speed);
      v.position += v.speed * Position(std::cos(v.heading), std::sin(v.heading));
      if (v.position.x() < 0.0) {
        v.position.x() = -v.position.x();
        v.heading = std::numbers::pi - v.heading;
      } else if (v.position.x() > w) {
        v.position.x() = 2.0 * w - v.position.x();
        v.heading = std::numbers::pi - v.heading;
      }
      if (v.position.y() < 0.0) {
        v.position.y() = -v.position.y();
        v.heading = -v.heading;
      } else if (v.position.y() > h) {
        v.position.y() = 2.0 * h - v.position.y();
        v.heading = -v.heading;
      }
      v.position.x() = std::clamp(v.position.x(), 0.0, w);
      v.position.y() = std::clamp(v.position.y(), 0.0, h);
      v.heading = std::remainder(v.heading, 2.0 * std::numbers::pi);
    }
  }
};

Simulation::Simulation(const ScenarioConfig& cfg, std::optional<ids::IsolationForest> forest) {
  if (const auto violations = validate_config(cfg); !violations.empty())
    throw ConfigError("invalid scenario config:\n" + format_violations(violations));
  state_ = std::make_unique<SimState>(cfg);
  if (forest) {
    if (forest->dimensionality() != kFlowFeatureDims)
      throw std::invalid_argument("IDS forest expects " + std::to_string(forest->dimensionality()) +
                                  " features, simulated flows have " + std::to_string(kFlowFeatureDims));
    state_->forest = std::move(*forest);
  } else {
    state_->forest = train_traffic_forest(cfg);
  }
  state_->populate();
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

void Simulation::step_round() {
  if (state_->finished) throw std::logic_error("simulation already finished");
  state_->step();
}

void Simulation::step_mobility() { state_->move_vehicles(); }

RunReport Simulation::finish() {
  SimState& s = *state_;
  if (s.finished) throw std::logic_error("simulation already finished");
  s.flush_to_cloud();
  s.finished = true;
  RunReport r;
  r.config = s.cfg;
  r.rounds_completed = s.round;
  r.counters = s.counters;
  r.events = std::move(s.events);
  r.snapshots = std::move(s.snapshots);
  r.vehicles = s.vehicles;
  r.rsus = s.rsus;
  r.cluster_ledgers = std::move(s.ledgers.ledgers);
  r.cloud_ledger = std::move(s.cloud);
  r.quarantined = s.quarantine.size();
  r.stored_payloads = s.store.size();
  return r;
}

std::uint64_t Simulation::round() const noexcept { return state_->round; }
const std::vector<Vehicle>& Simulation::vehicles() const noexcept { return state_->vehicles; }
std::vector<Vehicle>& Simulation::mutable_vehicles() noexcept { return state_->vehicles; }
const std::vector<Rsu>& Simulation::rsus() const noexcept { return state_->rsus; }
const std::map<ClusterId, Cluster>& Simulation::clusters() const noexcept { return state_->clusters; }
const Counters& Simulation::counters() const noexcept { return state_->counters; }

RunReport run(const ScenarioConfig& cfg, std::optional<ids::IsolationForest> forest) {
  Simulation sim(cfg, std::move(forest));
  for (std::uint32_t r = 0; r < cfg.rounds; ++r) sim.step_round();
  return sim.finish();
}

double end_to_end_delay(const RunReport& report, std::uint64_t message_id) {
  for (const auto& e : report.events) {
    if (e.message_id != message_id || e.kind != EventKind::kControllerRoute) continue;
    if (e.outcome != Outcome::kDelivered) break;
    return e.delay_s;
  }
  throw std::invalid_argument("message " + std::to_string(message_id) + " was not delivered");
}

void write_event_log(const RunReport& report, std::ostream& out) {
  for (const auto& e : report.events) {
    nlohmann::ordered_json j;
    j["round"] = e.round;
    j["kind"] = to_string(e.kind);
    j["subject"] = e.subject;
    if (e.message_id) j["message_id"] = e.message_id;
    j["peer"] = e.peer;
    j["bytes"] = e.bytes;
    j["outcome"] = to_string(e.outcome);
    if (e.cause != DropCause::kNone) j["cause"] = to_string(e.cause);
    j["delay_s"] = e.delay_s;
    j["t_n_effective"] = e.t_n_effective;
    j["score"] = e.score;
    j["energy_mj"] = e.energy_mj;
    j["energy_vehicle"] = e.energy_vehicle;
    j["exchanged"] = e.exchanged;
    out << j.dump() << '\n';
  }
}

void write_controller_log(const RunReport& report, std::ostream& out) {
  for (const auto& e : report.events) {
    if (e.kind != EventKind::kControllerRoute) continue;
    const bool verify_failed = e.outcome == Outcome::kDropped && e.cause != DropCause::kFlowDrop;
    nlohmann::ordered_json j;
    j["round"] = e.round;
    j["message_id"] = e.message_id;
    j["action"] = e.outcome == Outcome::kDelivered ? to_string(FlowAction::kForwardToCloud)
                                                   : to_string(FlowAction::kDrop);
    j["verify"] = verify_failed ? to_string(e.cause) : "accepted";
    j["t_s"] = report.config.delay_model.t_s;
    j["t_n_effective"] = e.t_n_effective;
    out << j.dump() << '\n';
  }
}

}  // namespace vanetsim
