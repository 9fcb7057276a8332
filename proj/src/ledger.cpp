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

#include "vanetsim/ledger.hpp"

#include <bit>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace vanetsim {
namespace {

std::uint64_t read_u64(const Bytes& b, std::size_t at) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | b[at + i];
  return v;
}

Digest read_digest(const Bytes& b, std::size_t at) {
  Digest d{};
  std::copy(b.begin() + static_cast<std::ptrdiff_t>(at), b.begin() + static_cast<std::ptrdiff_t>(at + 32),
            d.begin());
  return d;
}

}  // namespace

std::string_view to_string(TxKind k) {
  switch (k) {
    case TxKind::kVote: return "vote";
    case TxKind::kMessageDigest: return "message-digest";
    case TxKind::kClusterRegistration: return "cluster-registration";
    case TxKind::kVerificationRecord: return "verification-record";
  }
  return "unknown";
}

std::string_view to_string(LedgerTier t) { return t == LedgerTier::kCluster ? "cluster" : "cloud"; }

std::string_view to_string(ChainFault f) {
  switch (f) {
    case ChainFault::kBadGenesis: return "bad-genesis";
    case ChainFault::kIndexGap: return "index-gap";
    case ChainFault::kBrokenLink: return "broken-link";
    case ChainFault::kTxCountMismatch: return "tx-count-mismatch";
    case ChainFault::kGasMismatch: return "gas-mismatch";
    case ChainFault::kHashMismatch: return "hash-mismatch";
  }
  return "unknown";
}

Transaction make_vote_tx(std::uint64_t cluster_id, std::uint64_t round, std::uint64_t elected,
                         const std::vector<VoteEntry>& record) {
  Transaction tx{TxKind::kVote, {}};
  put_u64(tx.body, cluster_id);
  put_u64(tx.body, round);
  put_u64(tx.body, elected);
  put_u32(tx.body, static_cast<std::uint32_t>(record.size()));
  for (const auto& v : record) {
    put_u64(tx.body, v.voter);
    put_u64(tx.body, v.candidate);
    put_u64(tx.body, std::bit_cast<std::uint64_t>(v.score));
  }
  return tx;
}

Transaction make_message_tx(const SignedMessage& sm) {
  Transaction tx{TxKind::kMessageDigest, {}};
  put_bytes(tx.body, sm.payload_digest);
  put_u64(tx.body, sm.sender);
  put_u64(tx.body, sm.cluster_id);
  put_u64(tx.body, sm.round);
  return tx;
}

Transaction make_registration_tx(std::uint64_t cluster_id, std::uint64_t rsu_id, std::uint64_t head,
                                 const PublicKey& cluster_key, std::uint64_t key_epoch) {
  Transaction tx{TxKind::kClusterRegistration, {}};
  put_u64(tx.body, cluster_id);
  put_u64(tx.body, rsu_id);
  put_u64(tx.body, head);
  put_bytes(tx.body, cluster_key);
  put_u64(tx.body, key_epoch);
  return tx;
}

Transaction make_verification_tx(std::uint64_t cluster_id, std::uint64_t height, const Digest& block_hash) {
  Transaction tx{TxKind::kVerificationRecord, {}};
  put_u64(tx.body, cluster_id);
  put_u64(tx.body, height);
  put_bytes(tx.body, block_hash);
  return tx;
}

std::optional<Digest> message_digest_of(const Transaction& tx) {
  if (tx.kind != TxKind::kMessageDigest || tx.body.size() < 32) return std::nullopt;
  return read_digest(tx.body, 0);
}

std::optional<AnchorRecord> anchor_of(const Transaction& tx) {
  if (tx.kind != TxKind::kVerificationRecord || tx.body.size() != 48) return std::nullopt;
  return AnchorRecord{read_u64(tx.body, 0), read_u64(tx.body, 8), read_digest(tx.body, 16)};
}

Bytes block_hash_input(const Block& b) {
  Bytes out;
  out.reserve(72 + b.transactions.size() * 64);
  put_u64(out, b.index);
  put_bytes(out, b.prev_hash);
  put_u64(out, b.timestamp);
  put_u64(out, b.tx_count);
  put_u64(out, b.gas_used);
  for (const auto& tx : b.transactions) {
    put_u8(out, static_cast<std::uint8_t>(tx.kind));
    put_u32(out, static_cast<std::uint32_t>(tx.body.size()));
    put_bytes(out, tx.body);
  }
  return out;
}

Digest compute_block_hash(const Block& b) { return sha256(block_hash_input(b)); }

std::optional<std::uint64_t> Ledger::find_message(const Digest& digest) const {
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    for (const auto& tx : it->transactions)
      if (auto d = message_digest_of(tx); d && *d == digest) return it->index;
  return std::nullopt;
}

Ledger make_ledger(LedgerTier tier, std::uint64_t chain_id, const GasModel& gas) {
  Ledger ledger;
  ledger.tier = tier;
  ledger.chain_id = chain_id;
  ledger.gas_model = gas;
  Block genesis;
  genesis.gas_used = gas_cost(0, gas);
  genesis.hash = compute_block_hash(genesis);
  ledger.blocks.push_back(std::move(genesis));
  return ledger;
}

ChainStatus validate_chain(const Ledger& ledger) {
  auto fail = [](std::uint64_t h, ChainFault f) { return ChainStatus{false, h, f}; };
  if (ledger.blocks.empty()) return fail(0, ChainFault::kBadGenesis);
  for (std::size_t i = 0; i < ledger.blocks.size(); ++i) {
    const Block& b = ledger.blocks[i];
    if (b.index != i) return fail(i, ChainFault::kIndexGap);
    if (i == 0) {
      if (b.prev_hash != Digest{}) return fail(0, ChainFault::kBadGenesis);
    } else if (b.prev_hash != ledger.blocks[i - 1].hash) {
      return fail(i, ChainFault::kBrokenLink);
    }
    if (b.tx_count != b.transactions.size()) return fail(i, ChainFault::kTxCountMismatch);
    if (b.gas_used != gas_cost(b.tx_count, ledger.gas_model)) return fail(i, ChainFault::kGasMismatch);
    if (compute_block_hash(b) != b.hash) return fail(i, ChainFault::kHashMismatch);
  }
  return {};
}

void append_block(Ledger& ledger, std::vector<Transaction> transactions, std::uint64_t timestamp,
                  bool trusted_prefix) {
  if (!trusted_prefix) {
    if (const auto status = validate_chain(ledger); !status)
      throw std::logic_error("append to invalid chain: " + std::string(to_string(status.reason)) +
                             " at height " + std::to_string(status.at_height));
  }
  Block b;
  b.index = ledger.blocks.size();
  b.prev_hash = ledger.tip().hash;
  b.timestamp = timestamp;
  b.tx_count = transactions.size();
  b.transactions = std::move(transactions);
  b.gas_used = gas_cost(b.tx_count, ledger.gas_model);
  b.hash = compute_block_hash(b);
  ledger.blocks.push_back(std::move(b));
}

void export_ledger(const Ledger& ledger, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json header;
  header["format"] = "vanetsim-ledger";
  header["version"] = 1;
  header["tier"] = to_string(ledger.tier);
  header["chain_id"] = ledger.chain_id;
  header["hash"] = kHashScheme;
  header["signature_scheme"] = kSignatureScheme;
  header["gas_model"] = {{"g0", ledger.gas_model.g0},
                         {"cb", ledger.gas_model.cb},
                         {"fixed_overhead", ledger.gas_model.fixed_overhead}};
  out << header.dump() << '\n';
  for (const Block& b : ledger.blocks) {
    ordered_json rec;
    rec["index"] = b.index;
    rec["prev_hash"] = to_hex(b.prev_hash);
    rec["timestamp"] = b.timestamp;
    rec["tx_count"] = b.tx_count;
    rec["gas_used"] = b.gas_used;
    rec["hash"] = to_hex(b.hash);
    auto txs = ordered_json::array();
    for (const auto& tx : b.transactions)
      txs.push_back({{"kind", to_string(tx.kind)}, {"body", to_hex(tx.body)}});
    rec["transactions"] = std::move(txs);
    out << rec.dump() << '\n';
  }
}

}  // namespace vanetsim
