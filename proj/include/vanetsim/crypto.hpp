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

// Hashing, Ed25519 signing and the content-addressed payload store.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vanetsim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 256-bit SHA-256 digest.
using Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

inline constexpr std::string_view kSignatureScheme = "ed25519";
inline constexpr std::string_view kHashScheme = "sha256";

Digest sha256(ByteView data);
Digest sha256(std::string_view data);

std::string to_hex(ByteView data);
template <std::size_t N>
std::string to_hex(const std::array<std::uint8_t, N>& a) {
  return to_hex(ByteView(a.data(), a.size()));
}
/// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// Big-endian append helpers shared by every canonical encoding.
void put_u8(Bytes& out, std::uint8_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
void put_bytes(Bytes& out, ByteView v);

class KeyPair {
 public:
  KeyPair() = default;
  KeyPair(const PublicKey& pub, const std::array<std::uint8_t, 64>& secret)
      : public_key_(pub), secret_key_(secret) {}

  const PublicKey& public_key() const noexcept { return public_key_; }

  Signature sign(ByteView message) const;

  friend bool operator==(const KeyPair&, const KeyPair&) = default;

 private:
  PublicKey public_key_{};
  // libsodium layout: 32-byte seed followed by the public key.
  std::array<std::uint8_t, 64> secret_key_{};
};

/// Key pair for an entity, fully determined by (scenario seed, entity tag,
/// entity id, epoch). Epoch changes on key rotation.
KeyPair generate_keypair(std::uint64_t seed, std::string_view entity_tag, std::uint64_t entity_id,
                         std::uint64_t epoch = 0);

bool verify_signature(const PublicKey& key, ByteView message, const Signature& sig);

/// Off-chain payload store keyed by the SHA-256 of the payload.
class ContentStore {
 public:
  Digest put(ByteView payload);
  std::optional<Bytes> get(const Digest& id) const;
  bool contains(const Digest& id) const { return blobs_.contains(id); }
  std::size_t size() const noexcept { return blobs_.size(); }

  /// Overwrites stored bytes without re-keying. Models corruption of the
  /// replicated copy; used by fault injection and tests.
  void overwrite(const Digest& id, Bytes payload);
  void erase(const Digest& id) { blobs_.erase(id); }

 private:
  std::map<Digest, Bytes> blobs_;
};

struct SignedMessage {
  Digest payload_digest{};
  Digest content_id{};
  std::uint64_t sender = 0;
  std::uint64_t cluster_id = 0;
  std::uint64_t round = 0;
  Signature signature{};
};

/// Bytes covered by a message signature: digest, sender, cluster, round.
Bytes signing_bytes(const SignedMessage& sm);

SignedMessage sign_message(ByteView payload, std::uint64_t sender, std::uint64_t cluster_id,
                           std::uint64_t round, const KeyPair& key, ContentStore& store);

enum class RejectReason { kBadSignature, kContentMismatch, kMissingContent };

std::string_view to_string(RejectReason r);

struct VerifyResult {
  bool accepted = true;
  RejectReason reason = RejectReason::kBadSignature;  // meaningful only when rejected

  static VerifyResult accept() { return {}; }
  static VerifyResult reject(RejectReason r) { return {false, r}; }
  explicit operator bool() const noexcept { return accepted; }
};

/// Signature over the signing bytes first, then the stored content must hash
/// to the carried digest.
VerifyResult verify_message(const SignedMessage& sm, const PublicKey& sender_key,
                            const ContentStore& store);

}  // namespace vanetsim
