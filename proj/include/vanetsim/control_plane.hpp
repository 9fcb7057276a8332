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

// SDN flow tables, the controller-side two-step message verification and
// the NFV capacity allocator that sets the effective t_n delay.

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "vanetsim/config.hpp"
#include "vanetsim/crypto.hpp"
#include "vanetsim/ledger.hpp"

namespace vanetsim {

enum class Destination : std::uint8_t { kCloud, kCluster };
enum class FlowAction : std::uint8_t { kForwardToCloud, kForwardToCluster, kDrop };

std::string_view to_string(FlowAction a);

struct FlowMatch {
  std::uint64_t cluster_id = 0;
  Destination destination = Destination::kCloud;

  friend auto operator<=>(const FlowMatch&, const FlowMatch&) = default;
};

struct FlowRule {
  FlowMatch match;
  FlowAction action = FlowAction::kDrop;
  std::int32_t priority = 0;
  std::uint64_t installed_round = 0;
};

/// One controller's flow table. Lookups fall through to a default drop rule
/// at the lowest priority.
class SdnController {
 public:
  /// Installs `rule`, replacing any rule with the same match and priority.
  void register_flow(const FlowRule& rule);
  FlowAction lookup(const FlowMatch& match) const;
  /// Installed rules, excluding the implicit default.
  std::size_t rule_count() const noexcept;

 private:
  // match -> priority -> rule
  std::map<FlowMatch, std::map<std::int32_t, FlowRule>> table_;
};

/// Several controllers sharing the clusters round-robin in cluster id order.
class ControlPlane {
 public:
  explicit ControlPlane(std::uint32_t n_controllers);

  /// Controller responsible for a cluster; assigns one on first sight.
  std::uint32_t controller_for(std::uint64_t cluster_id);
  std::uint32_t controller_for(std::uint64_t cluster_id) const;
  SdnController& controller(std::uint32_t i) { return controllers_.at(i); }
  const SdnController& controller(std::uint32_t i) const { return controllers_.at(i); }
  std::size_t size() const noexcept { return controllers_.size(); }

 private:
  std::vector<SdnController> controllers_;
  std::map<std::uint64_t, std::uint32_t> assignment_;
  std::uint32_t next_ = 0;
};

/// A vehicle message as forwarded by its cluster head, countersigned with
/// the cluster key over the same signing bytes.
struct ForwardedMessage {
  SignedMessage message;
  Signature cluster_signature{};
};

ForwardedMessage endorse(const SignedMessage& sm, const KeyPair& cluster_key);

enum class VerifyStep : std::uint8_t { kLedger = 1, kContent = 2 };
enum class VerifyFailure : std::uint8_t { kNotOnChain, kBadClusterSignature, kMissingContent, kContentMismatch };

std::string_view to_string(VerifyFailure f);

struct TwoStepResult {
  bool accepted = true;
  VerifyStep step = VerifyStep::kLedger;
  VerifyFailure reason = VerifyFailure::kNotOnChain;

  explicit operator bool() const noexcept { return accepted; }
};

/// Step 1: digest committed on the cluster ledger and cluster signature
/// valid. Step 2: payload fetched by content id hashes to the digest.
TwoStepResult two_step_verify(const ForwardedMessage& fm, const PublicKey& cluster_key, const Ledger& cluster_ledger,
                              const ContentStore& store);

struct NfvPolicy {
  std::uint32_t window = 5;
  double target_utilization = 0.8;
  std::uint32_t per_unit_capacity = 10;
  std::uint32_t max_capacity = 16;
  double base_t_n = 0.05;
};

NfvPolicy nfv_policy_from(const ScenarioConfig& cfg);

struct VnfAllocation {
  std::uint32_t capacity_units = 1;
  double load = 0.0;  // messages per round
  double t_n_effective = 0.0;
};

/// base_t_n * max(1, load / (capacity_units * per_unit_capacity)).
double effective_t_n(double load, std::uint32_t capacity_units, const NfvPolicy& policy);

/// Sizes capacity from the mean of the last `window` loads:
/// ceil(mean / target_utilization / per_unit_capacity), clamped to
/// [1, max_capacity]. The reported load and t_n are for the latest entry.
VnfAllocation allocate_resources(std::span<const double> load_history, const NfvPolicy& policy);

}  // namespace vanetsim
