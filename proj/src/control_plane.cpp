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

#include "vanetsim/control_plane.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vanetsim {

std::string_view to_string(FlowAction a) {
  switch (a) {
    case FlowAction::kForwardToCloud: return "forward-to-cloud";
    case FlowAction::kForwardToCluster: return "forward-to-cluster";
    case FlowAction::kDrop: return "drop";
  }
  return "unknown";
}

std::string_view to_string(VerifyFailure f) {
  switch (f) {
    case VerifyFailure::kNotOnChain: return "not-on-chain";
    case VerifyFailure::kBadClusterSignature: return "bad-cluster-signature";
    case VerifyFailure::kMissingContent: return "missing-content";
    case VerifyFailure::kContentMismatch: return "content-mismatch";
  }
  return "unknown";
}

void SdnController::register_flow(const FlowRule& rule) { table_[rule.match][rule.priority] = rule; }

FlowAction SdnController::lookup(const FlowMatch& match) const {
  auto it = table_.find(match);
  if (it == table_.end() || it->second.empty()) return FlowAction::kDrop;
  return it->second.rbegin()->second.action;
}

std::size_t SdnController::rule_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [m, rules] : table_) n += rules.size();
  return n;
}

ControlPlane::ControlPlane(std::uint32_t n_controllers) : controllers_(std::max<std::uint32_t>(1, n_controllers)) {}

std::uint32_t ControlPlane::controller_for(std::uint64_t cluster_id) {
  auto [it, inserted] = assignment_.try_emplace(cluster_id, next_);
  if (inserted) next_ = (next_ + 1) % static_cast<std::uint32_t>(controllers_.size());
  return it->second;
}

std::uint32_t ControlPlane::controller_for(std::uint64_t cluster_id) const {
  auto it = assignment_.find(cluster_id);
  if (it == assignment_.end()) throw std::out_of_range("cluster has no controller");
  return it->second;
}

ForwardedMessage endorse(const SignedMessage& sm, const KeyPair& cluster_key) {
  return {sm, cluster_key.sign(signing_bytes(sm))};
}

TwoStepResult two_step_verify(const ForwardedMessage& fm, const PublicKey& cluster_key, const Ledger& cluster_ledger,
                              const ContentStore& store) {
  auto reject = [](VerifyStep s, VerifyFailure f) { return TwoStepResult{false, s, f}; };
  const SignedMessage& sm = fm.message;
  if (!cluster_ledger.find_message(sm.payload_digest)) return reject(VerifyStep::kLedger, VerifyFailure::kNotOnChain);
  if (!verify_signature(cluster_key, signing_bytes(sm), fm.cluster_signature))
    return reject(VerifyStep::kLedger, VerifyFailure::kBadClusterSignature);

  const auto payload = store.get(sm.content_id);
  if (!payload) return reject(VerifyStep::kContent, VerifyFailure::kMissingContent);
  if (sm.content_id != sm.payload_digest || sha256(*payload) != sm.payload_digest)
    return reject(VerifyStep::kContent, VerifyFailure::kContentMismatch);
  return {};
}

NfvPolicy nfv_policy_from(const ScenarioConfig& cfg) {
  const auto& cp = cfg.control_plane;
  return {cp.nfv_window, cp.target_utilization, cp.per_unit_capacity, cp.max_capacity, cfg.delay_model.t_n};
}

double effective_t_n(double load, std::uint32_t capacity_units, const NfvPolicy& policy) {
  const double capacity = static_cast<double>(capacity_units) * policy.per_unit_capacity;
  return policy.base_t_n * std::max(1.0, load / capacity);
}

VnfAllocation allocate_resources(std::span<const double> load_history, const NfvPolicy& policy) {
  if (load_history.empty()) throw std::invalid_argument("allocate_resources needs at least one load sample");
  const std::size_t n = std::min<std::size_t>(std::max<std::uint32_t>(1, policy.window), load_history.size());
  const auto recent = load_history.last(n);
  const double mean = std::accumulate(recent.begin(), recent.end(), 0.0) / static_cast<double>(n);
  const double needed = std::ceil(mean / policy.target_utilization / policy.per_unit_capacity);

  VnfAllocation a;
  a.capacity_units = static_cast<std::uint32_t>(std::clamp(needed, 1.0, static_cast<double>(policy.max_capacity)));
  a.load = load_history.back();
  a.t_n_effective = effective_t_n(a.load, a.capacity_units, policy);
  return a;
}

}  // namespace vanetsim
