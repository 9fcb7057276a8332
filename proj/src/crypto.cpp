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

#include "vanetsim/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace vanetsim {
namespace {

void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    return true;
  }();
  (void)ready;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Digest sha256(ByteView data) {
  ensure_sodium();
  Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest sha256(std::string_view data) {
  return sha256(ByteView(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0x0f]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_bytes(Bytes& out, ByteView v) { out.insert(out.end(), v.begin(), v.end()); }

Signature KeyPair::sign(ByteView message) const {
  ensure_sodium();
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key_.data());
  return sig;
}

KeyPair generate_keypair(std::uint64_t seed, std::string_view entity_tag, std::uint64_t entity_id,
                         std::uint64_t epoch) {
  ensure_sodium();
  Bytes material;
  put_bytes(material, ByteView(reinterpret_cast<const std::uint8_t*>("vanetsim-key"), 12));
  put_u64(material, seed);
  put_u32(material, static_cast<std::uint32_t>(entity_tag.size()));
  put_bytes(material,
            ByteView(reinterpret_cast<const std::uint8_t*>(entity_tag.data()), entity_tag.size()));
  put_u64(material, entity_id);
  put_u64(material, epoch);
  const Digest key_seed = sha256(material);

  PublicKey pub{};
  std::array<std::uint8_t, 64> secret{};
  crypto_sign_seed_keypair(pub.data(), secret.data(), key_seed.data());
  return KeyPair(pub, secret);
}

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), key.data()) == 0;
}

Digest ContentStore::put(ByteView payload) {
  const Digest id = sha256(payload);
  blobs_.try_emplace(id, payload.begin(), payload.end());
  return id;
}

std::optional<Bytes> ContentStore::get(const Digest& id) const {
  auto it = blobs_.find(id);
  if (it == blobs_.end()) return std::nullopt;
  return it->second;
}

void ContentStore::overwrite(const Digest& id, Bytes payload) { blobs_[id] = std::move(payload); }

Bytes signing_bytes(const SignedMessage& sm) {
  Bytes out;
  out.reserve(32 + 24);
  put_bytes(out, sm.payload_digest);
  put_u64(out, sm.sender);
  put_u64(out, sm.cluster_id);
  put_u64(out, sm.round);
  return out;
}

SignedMessage sign_message(ByteView payload, std::uint64_t sender, std::uint64_t cluster_id,
                           std::uint64_t round, const KeyPair& key, ContentStore& store) {
  SignedMessage sm;
  sm.payload_digest = sha256(payload);
  sm.content_id = store.put(payload);
  sm.sender = sender;
  sm.cluster_id = cluster_id;
  sm.round = round;
  sm.signature = key.sign(signing_bytes(sm));
  return sm;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kBadSignature: return "bad-signature";
    case RejectReason::kContentMismatch: return "content-mismatch";
    case RejectReason::kMissingContent: return "missing-content";
  }
  return "unknown";
}

VerifyResult verify_message(const SignedMessage& sm, const PublicKey& sender_key,
                            const ContentStore& store) {
  if (!verify_signature(sender_key, signing_bytes(sm), sm.signature))
    return VerifyResult::reject(RejectReason::kBadSignature);
  if (sm.content_id != sm.payload_digest) return VerifyResult::reject(RejectReason::kContentMismatch);
  const auto payload = store.get(sm.content_id);
  if (!payload) return VerifyResult::reject(RejectReason::kMissingContent);
  if (sha256(*payload) != sm.payload_digest)
    return VerifyResult::reject(RejectReason::kContentMismatch);
  return VerifyResult::accept();
}

}  // namespace vanetsim
