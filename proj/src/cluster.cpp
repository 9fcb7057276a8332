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

#include "vanetsim/cluster.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace vanetsim {
namespace {

std::vector<double> min_max(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  std::vector<double> out(xs.size(), 0.5);
  if (*hi > *lo)
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - *lo) / (*hi - *lo);
  return out;
}

std::map<VehicleId, const Vehicle*> index_by_id(std::span<const Vehicle> vehicles) {
  std::map<VehicleId, const Vehicle*> out;
  for (const auto& v : vehicles) out.emplace(v.id, &v);
  return out;
}

VehicleId run_election(Cluster& c, std::span<const Vehicle> vehicles, const Rsu& rsu, const ScenarioConfig& cfg,
                       ClusterLedgers& ledgers, std::uint64_t round) {
  const auto by_id = index_by_id(vehicles);
  std::vector<const Vehicle*> members;
  for (VehicleId id : c.members) members.push_back(by_id.at(id));
  const auto scores = score_candidates(members, rsu, cfg);
  return elect_head(scores, ledgers.ledger_for(c.id), c.id, rsu.id, round, &c.vote_record);
}

void register_cluster(const Cluster& c, ClusterLedgers& ledgers, std::uint64_t round) {
  append_block(ledgers.ledger_for(c.id),
               {make_registration_tx(c.id, c.rsu_id, c.head, c.key_pair.public_key(), c.key_epoch)}, round, true);
}

}  // namespace

Ledger& ClusterLedgers::ledger_for(ClusterId id) {
  auto it = ledgers.find(id);
  if (it == ledgers.end()) it = ledgers.emplace(id, make_ledger(LedgerTier::kCluster, id, gas)).first;
  return it->second;
}

std::pair<KeyPair, std::uint64_t> ClusterLedgers::issue_key(ClusterId id) {
  const std::uint64_t epoch = next_key_epoch[id]++;
  return {generate_keypair(seed, "cluster", id, epoch), epoch};
}

std::vector<CandidateScore> score_candidates(std::span<const Vehicle* const> members, const Rsu& rsu,
                                             const ScenarioConfig& cfg) {
  std::vector<double> signal, power;
  for (const Vehicle* v : members) {
    signal.push_back(signal_strength(*v, rsu, cfg.radio.tx_power_dbm, cfg.radio.path_loss_exp));
    power.push_back(v->processing_power);
  }
  const auto ns = min_max(signal);
  const auto np = min_max(power);
  const auto& w = cfg.election_weights;
  std::vector<CandidateScore> out;
  out.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    CandidateScore s;
    s.vehicle_id = members[i]->id;
    s.normalized_signal = ns[i];
    s.normalized_power = np[i];
    s.type_weight = members[i]->vehicle_type_weight;
    s.total = w.w_signal * s.normalized_signal + w.w_power * s.normalized_power + w.w_type * s.type_weight;
    out.push_back(s);
  }
  return out;
}

VehicleId argmax_candidate(std::span<const CandidateScore> candidates) {
  if (candidates.empty()) throw std::invalid_argument("election needs at least one candidate");
  const CandidateScore* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.total > best->total || (c.total == best->total && c.vehicle_id < best->vehicle_id)) best = &c;
  }
  return best->vehicle_id;
}

VehicleId elect_head(std::span<const CandidateScore> candidates, Ledger& ledger, ClusterId cluster_id,
                     RsuId coordinator, std::uint64_t round, std::vector<VoteEntry>* record_out) {
  const VehicleId winner = argmax_candidate(candidates);
  std::vector<VoteEntry> record;
  record.reserve(candidates.size());
  for (const auto& c : candidates) record.push_back({coordinator, c.vehicle_id, c.total});
  append_block(ledger, {make_vote_tx(cluster_id, round, winner, record)}, round, true);
  if (record_out) *record_out = std::move(record);
  return winner;
}

Assignment assign_vehicles(std::span<const Vehicle> vehicles, std::span<const Rsu> rsus,
                           std::optional<std::uint32_t> size_target) {
  using Pair = std::tuple<double, RsuId, VehicleId>;
  std::vector<Pair> pairs;
  for (const auto& v : vehicles) {
    if (v.depleted()) continue;
    for (const auto& r : rsus) {
      const double d = distance(v, r);
      if (d <= r.coverage_radius) pairs.emplace_back(d, r.id, v.id);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  Assignment out;
  std::set<VehicleId> placed;
  for (const auto& [d, rsu, vid] : pairs) {
    if (placed.contains(vid)) continue;
    auto& slot = out.members[rsu];
    if (size_target && slot.size() >= *size_target) continue;
    slot.push_back(vid);
    placed.insert(vid);
  }
  std::erase_if(out.members, [](const auto& kv) { return kv.second.empty(); });
  for (auto& [rsu, ids] : out.members) std::sort(ids.begin(), ids.end());
  for (const auto& v : vehicles)
    if (!v.depleted() && !placed.contains(v.id)) out.unclustered.push_back(v.id);
  std::sort(out.unclustered.begin(), out.unclustered.end());
  return out;
}

Clustering form_clusters(std::span<const Vehicle> vehicles, std::span<const Rsu> rsus, const ScenarioConfig& cfg,
                         ClusterLedgers& ledgers, std::uint64_t round, const std::map<ClusterId, Cluster>* previous) {
  const Assignment assignment = assign_vehicles(vehicles, rsus, cfg.cluster_size_target);
  std::map<RsuId, const Rsu*> rsu_by_id;
  for (const auto& r : rsus) rsu_by_id.emplace(r.id, &r);

  Clustering out;
  out.unclustered = assignment.unclustered;
  for (const auto& [rsu_id, ids] : assignment.members) {
    Cluster c;
    c.id = rsu_id;
    c.rsu_id = rsu_id;
    c.members.insert(ids.begin(), ids.end());
    c.head = run_election(c, vehicles, *rsu_by_id.at(rsu_id), cfg, ledgers, round);

    const Cluster* prior = nullptr;
    if (previous) {
      auto it = previous->find(c.id);
      if (it != previous->end()) prior = &it->second;
    }
    if (prior && prior->head == c.head) {
      c.key_pair = prior->key_pair;
      c.key_epoch = prior->key_epoch;
    } else {
      std::tie(c.key_pair, c.key_epoch) = ledgers.issue_key(c.id);
    }
    register_cluster(c, ledgers, round);
    out.clusters.push_back(std::move(c));
  }
  return out;
}

ChurnResult handle_churn(Cluster& cluster, const std::set<VehicleId>& departed, const std::set<VehicleId>& joined,
                         std::span<const Vehicle> vehicles, const Rsu& rsu, const ScenarioConfig& cfg,
                         ClusterLedgers& ledgers, std::uint64_t round, const std::set<VehicleId>& clustered) {
  for (VehicleId id : departed)
    if (!cluster.members.contains(id))
      throw std::invalid_argument("vehicle " + std::to_string(id) + " is not a member of cluster " +
                                  std::to_string(cluster.id));
  for (VehicleId id : joined)
    if (clustered.contains(id) || cluster.members.contains(id))
      throw std::invalid_argument("vehicle " + std::to_string(id) + " already belongs to a cluster");

  for (VehicleId id : departed) cluster.members.erase(id);
  cluster.members.insert(joined.begin(), joined.end());

  ChurnResult result;
  if (cluster.members.empty()) {
    result.dissolved = true;
    return result;
  }
  if (departed.contains(cluster.head)) {
    const VehicleId old_head = cluster.head;
    cluster.head = run_election(cluster, vehicles, rsu, cfg, ledgers, round);
    if (cluster.head != old_head) {
      result.head_changed = true;
      std::tie(cluster.key_pair, cluster.key_epoch) = ledgers.issue_key(cluster.id);
      register_cluster(cluster, ledgers, round);
    }
  }
  return result;
}

}  // namespace vanetsim
