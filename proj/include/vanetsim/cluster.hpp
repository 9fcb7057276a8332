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

// Cluster formation and RSU-coordinated head election.
//
// Every cluster is anchored at one RSU and shares that RSU's id. A vehicle
// joins its nearest RSU among those covering it (lower RSU id on ties). With
// a size target, vehicles are admitted in order of increasing distance and
// overflow to the next-nearest covering RSU with room.

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "vanetsim/config.hpp"
#include "vanetsim/core.hpp"
#include "vanetsim/ledger.hpp"

namespace vanetsim {

struct CandidateScore {
  VehicleId vehicle_id = 0;
  double normalized_signal = 0.0;
  double normalized_power = 0.0;
  double type_weight = 0.0;
  double total = 0.0;
};

struct Cluster {
  ClusterId id = 0;
  RsuId rsu_id = 0;
  std::set<VehicleId> members;
  VehicleId head = 0;
  KeyPair key_pair;
  std::uint64_t key_epoch = 0;
  std::vector<VoteEntry> vote_record;
};

/// Per-cluster ledgers plus what is needed to derive cluster keys.
struct ClusterLedgers {
  std::uint64_t seed = 0;
  GasModel gas;
  std::map<ClusterId, Ledger> ledgers;
  std::map<ClusterId, std::uint64_t> next_key_epoch;

  Ledger& ledger_for(ClusterId id);
  /// Fresh key pair for a cluster; never reuses an epoch.
  std::pair<KeyPair, std::uint64_t> issue_key(ClusterId id);
};

/// Min-max normalization per field over the candidate set (constant fields
/// map to 0.5), then the configured weighted sum.
std::vector<CandidateScore> score_candidates(std::span<const Vehicle* const> members, const Rsu& rsu,
                                             const ScenarioConfig& cfg);

/// Highest total wins, lowest vehicle id on ties. Throws
/// std::invalid_argument on an empty list.
VehicleId argmax_candidate(std::span<const CandidateScore> candidates);

/// Election with the vote record committed to `ledger` (a block holding the
/// vote transaction) before the winner is returned.
VehicleId elect_head(std::span<const CandidateScore> candidates, Ledger& ledger, ClusterId cluster_id,
                     RsuId coordinator, std::uint64_t round, std::vector<VoteEntry>* record_out = nullptr);

struct Assignment {
  std::map<RsuId, std::vector<VehicleId>> members;
  std::vector<VehicleId> unclustered;
};

/// Vehicle to RSU assignment only; depleted vehicles are skipped.
Assignment assign_vehicles(std::span<const Vehicle> vehicles, std::span<const Rsu> rsus,
                           std::optional<std::uint32_t> size_target);

struct Clustering {
  std::vector<Cluster> clusters;
  std::vector<VehicleId> unclustered;
};

/// Builds one cluster per RSU with at least one member, elects its head and
/// registers head and cluster public key on the cluster ledger.
/// `previous` lets key material persist: the key rotates only when the head
/// changes.
Clustering form_clusters(std::span<const Vehicle> vehicles, std::span<const Rsu> rsus, const ScenarioConfig& cfg,
                         ClusterLedgers& ledgers, std::uint64_t round,
                         const std::map<ClusterId, Cluster>* previous = nullptr);

struct ChurnResult {
  bool dissolved = false;
  bool head_changed = false;
};

/// Removes `departed` members and adds `joined` ones. Re-elects when the head
/// departs, rotates the key whenever the head changes. Throws
/// std::invalid_argument when a departing id is not a member or a joining id
/// is already in `clustered`.
ChurnResult handle_churn(Cluster& cluster, const std::set<VehicleId>& departed, const std::set<VehicleId>& joined,
                         std::span<const Vehicle> vehicles, const Rsu& rsu, const ScenarioConfig& cfg,
                         ClusterLedgers& ledgers, std::uint64_t round, const std::set<VehicleId>& clustered);

}  // namespace vanetsim
