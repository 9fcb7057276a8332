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

#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

#include "support/oracles.hpp"
#include "vanetsim/ledger.hpp"

namespace vanetsim {
namespace {

std::vector<Transaction> message_txs(std::size_t n, std::uint64_t salt) {
  KeyPair k = generate_keypair(salt, "vehicle", 0);
  ContentStore store;
  std::vector<Transaction> out;
  for (std::size_t i = 0; i < n; ++i) {
    Bytes p;
    put_u64(p, salt);
    put_u64(p, i);
    out.push_back(make_message_tx(sign_message(p, 0, 1, salt, k, store)));
  }
  return out;
}

Ledger chain_of(std::size_t blocks, GasModel gas = {}) {
  Ledger l = make_ledger(LedgerTier::kCluster, 1, gas);
  for (std::size_t i = 1; i < blocks; ++i) append_block(l, message_txs(1 + i % 4, i), i);
  return l;
}

TEST(Ledger, Genesis) {
  const Ledger l = make_ledger(LedgerTier::kCluster, 9, {});
  ASSERT_EQ(l.blocks.size(), 1u);
  EXPECT_EQ(l.height(), 0u);
  EXPECT_EQ(l.tip().prev_hash, Digest{});
  EXPECT_EQ(l.tip().tx_count, 0u);
  EXPECT_EQ(l.tip().gas_used, 0u);
  EXPECT_TRUE(validate_chain(l));
}

TEST(Ledger, FirstAppend) {
  Ledger l = make_ledger(LedgerTier::kCluster, 1, {});
  const Digest genesis = l.tip().hash;
  append_block(l, message_txs(2, 1), 1);
  EXPECT_EQ(l.height(), 1u);
  EXPECT_EQ(l.tip().prev_hash, genesis);
  EXPECT_EQ(l.tip().index, 1u);
}

TEST(Ledger, FiveTransactionsCost27000) {
  Ledger l = make_ledger(LedgerTier::kCluster, 1, {});
  append_block(l, message_txs(5, 1), 1);
  EXPECT_EQ(l.tip().gas_used, 27000u);
}

TEST(Ledger, CalibratedGasIsAppliedPerBlock) {
  Ledger l = make_ledger(LedgerTier::kCloud, 0, GasModel{0, 2944, 12920});
  append_block(l, message_txs(3, 1), 1);
  EXPECT_EQ(l.tip().gas_used, 3u * 2944u + 12920u);
  EXPECT_TRUE(validate_chain(l));
}

TEST(Ledger, IndependentRehashMatches) {
  const Ledger l = chain_of(20);
  for (std::size_t i = 0; i < l.blocks.size(); ++i) {
    EXPECT_EQ(oracle::block_hash(l.blocks[i]), l.blocks[i].hash) << "block " << i;
    if (i) EXPECT_EQ(l.blocks[i].prev_hash, l.blocks[i - 1].hash);
  }
}

TEST(Ledger, FreshChainOfTenIsValid) { EXPECT_TRUE(validate_chain(chain_of(10))); }

TEST(Ledger, TransactionByteTamperInBlock4) {
  Ledger l = chain_of(10);
  l.blocks[4].transactions[0].body[5] ^= 0x40;
  const auto s = validate_chain(l);
  EXPECT_FALSE(s);
  EXPECT_EQ(s.at_height, 4u);
  EXPECT_EQ(s.reason, ChainFault::kHashMismatch);
}

TEST(Ledger, FaultClasses) {
  {
    Ledger l = chain_of(6);
    l.blocks[3].prev_hash[0] ^= 1;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kBrokenLink);
  }
  {
    Ledger l = chain_of(6);
    l.blocks[3].index = 7;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kIndexGap);
  }
  {
    Ledger l = chain_of(6);
    l.blocks[2].gas_used += 1;
    const auto s = validate_chain(l);
    EXPECT_EQ(s.reason, ChainFault::kGasMismatch);
    EXPECT_EQ(s.at_height, 2u);
  }
  {
    Ledger l = chain_of(6);
    l.blocks[2].tx_count += 1;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kTxCountMismatch);
  }
  {
    Ledger l = chain_of(6);
    l.blocks[0].prev_hash[31] = 1;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kBadGenesis);
  }
  {
    Ledger l = chain_of(6);
    l.blocks[5].timestamp += 1;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kHashMismatch);
  }
  {
    Ledger l = chain_of(6);
    l.blocks[5].hash[0] ^= 1;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kHashMismatch);
  }
  {
    Ledger l;
    EXPECT_EQ(validate_chain(l).reason, ChainFault::kBadGenesis);
  }
}

TEST(Ledger, ReportsFirstFailure) {
  Ledger l = chain_of(10);
  l.blocks[7].transactions[0].body[0] ^= 1;
  l.blocks[3].transactions[0].body[0] ^= 1;
  EXPECT_EQ(validate_chain(l).at_height, 3u);
}

TEST(Ledger, AppendToInvalidChainThrows) {
  Ledger l = chain_of(4);
  l.blocks[2].timestamp = 99;
  EXPECT_THROW(append_block(l, message_txs(1, 7), 9), std::logic_error);
}

TEST(Ledger, FindMessage) {
  Ledger l = make_ledger(LedgerTier::kCluster, 1, {});
  const auto txs = message_txs(3, 5);
  append_block(l, txs, 1);
  append_block(l, message_txs(2, 6), 2);
  EXPECT_EQ(l.find_message(*message_digest_of(txs[1])), 1u);
  EXPECT_FALSE(l.find_message(sha256(std::string_view("never committed"))));
}

TEST(Ledger, AnchorRoundTrip) {
  const Digest h = sha256(std::string_view("block"));
  const auto a = anchor_of(make_verification_tx(4, 12, h));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->cluster_id, 4u);
  EXPECT_EQ(a->height, 12u);
  EXPECT_EQ(a->block_hash, h);
  EXPECT_FALSE(anchor_of(make_registration_tx(1, 1, 1, PublicKey{}, 0)));
}

TEST(Ledger, ExportSchema) {
  const Ledger l = chain_of(3);
  std::ostringstream os;
  export_ledger(l, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  EXPECT_EQ(header["format"], "vanetsim-ledger");
  EXPECT_EQ(header["tier"], "cluster");
  EXPECT_EQ(header["hash"], "sha256");
  EXPECT_EQ(header["signature_scheme"], "ed25519");
  EXPECT_EQ(header["gas_model"]["g0"], 4000);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto rec = nlohmann::json::parse(line);
    EXPECT_EQ(rec["index"], n);
    EXPECT_EQ(rec["hash"], to_hex(l.blocks[n].hash));
    EXPECT_EQ(rec["transactions"].size(), l.blocks[n].transactions.size());
    ++n;
  }
  EXPECT_EQ(n, l.blocks.size());
}

}  // namespace
}  // namespace vanetsim
