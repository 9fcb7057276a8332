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

// Hash-chained ledgers for the two tiers: one ledger per cluster and a
// single cloud chain that archives cluster block digests.
//
// Block hash input, in order (integers big-endian):
//   index u64 | prev_hash 32B | timestamp u64 | tx_count u64 | gas_used u64
//   | per transaction: kind u8, body length u32, body bytes
// The hash field itself is excluded.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vanetsim/crypto.hpp"
#include "vanetsim/gas.hpp"

namespace vanetsim {

enum class TxKind : std::uint8_t {
  kVote = 1,
  kMessageDigest = 2,
  kClusterRegistration = 3,
  kVerificationRecord = 4,
};

std::string_view to_string(TxKind k);

struct Transaction {
  TxKind kind = TxKind::kMessageDigest;
  Bytes body;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct VoteEntry {
  std::uint64_t voter = 0;
  std::uint64_t candidate = 0;
  double score = 0.0;
};

Transaction make_vote_tx(std::uint64_t cluster_id, std::uint64_t round, std::uint64_t elected,
                         const std::vector<VoteEntry>& record);
Transaction make_message_tx(const SignedMessage& sm);
Transaction make_registration_tx(std::uint64_t cluster_id, std::uint64_t rsu_id, std::uint64_t head,
                                 const PublicKey& cluster_key, std::uint64_t key_epoch);
/// Cloud-tier record anchoring one cluster-ledger block.
Transaction make_verification_tx(std::uint64_t cluster_id, std::uint64_t height, const Digest& block_hash);

/// Digest carried by a message-digest transaction, if `tx` is one.
std::optional<Digest> message_digest_of(const Transaction& tx);

struct AnchorRecord {
  std::uint64_t cluster_id = 0;
  std::uint64_t height = 0;
  Digest block_hash{};
};
std::optional<AnchorRecord> anchor_of(const Transaction& tx);

struct Block {
  std::uint64_t index = 0;
  Digest prev_hash{};
  std::uint64_t timestamp = 0;
  std::vector<Transaction> transactions;
  std::uint64_t tx_count = 0;
  std::uint64_t gas_used = 0;
  Digest hash{};
};

Bytes block_hash_input(const Block& b);
Digest compute_block_hash(const Block& b);

enum class LedgerTier { kCluster, kCloud };
std::string_view to_string(LedgerTier t);

struct Ledger {
  LedgerTier tier = LedgerTier::kCluster;
  std::uint64_t chain_id = 0;
  GasModel gas_model;
  std::vector<Block> blocks;

  std::size_t height() const noexcept { return blocks.empty() ? 0 : blocks.size() - 1; }
  const Block& tip() const { return blocks.back(); }

  /// Height of the most recent block holding a message-digest transaction
  /// for `digest`. Scans from the tip.
  std::optional<std::uint64_t> find_message(const Digest& digest) const;
};

Ledger make_ledger(LedgerTier tier, std::uint64_t chain_id, const GasModel& gas);

enum class ChainFault { kBadGenesis, kIndexGap, kBrokenLink, kTxCountMismatch, kGasMismatch, kHashMismatch };
std::string_view to_string(ChainFault f);

struct ChainStatus {
  bool valid = true;
  std::uint64_t at_height = 0;
  ChainFault reason = ChainFault::kHashMismatch;

  explicit operator bool() const noexcept { return valid; }
};

ChainStatus validate_chain(const Ledger& ledger);

/// Appends one block at `timestamp`. Throws std::logic_error when the
/// existing chain does not validate. Validation of the prefix is skipped when
/// `trusted_prefix` is set (the engine owns the chain and appends in a loop).
void append_block(Ledger& ledger, std::vector<Transaction> transactions, std::uint64_t timestamp,
                  bool trusted_prefix = false);

/// Newline-delimited JSON export: one header record then one record per block.
void export_ledger(const Ledger& ledger, std::ostream& out);

}  // namespace vanetsim
