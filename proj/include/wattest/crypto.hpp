// Copyright 2026 The Wattest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WATTEST_CRYPTO_HPP_
#define WATTEST_CRYPTO_HPP_

#include <array>
#include <cstdint>
#include <memory>

#include "wattest/bytes.hpp"

namespace wattest {

// One signature scheme for all parties: Ed25519 (64-byte detached
// signatures, 32-byte public keys), backed by libsodium.
inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kSecretKeySize = 64;
inline constexpr std::size_t kSignatureSize = 64;

using PublicKey = std::array<std::uint8_t, kPublicKeySize>;
using SecretKey = std::array<std::uint8_t, kSecretKeySize>;
using Signature = std::array<std::uint8_t, kSignatureSize>;
using Seed32 = std::array<std::uint8_t, 32>;

/// Source of randomness. The system source is used in normal operation;
/// scenarios and property tests substitute a seeded deterministic source.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  template <std::size_t N>
  std::array<std::uint8_t, N> array() {
    std::array<std::uint8_t, N> a;
    fill(a);
    return a;
  }
};

class SystemRng final : public Rng {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// ChaCha20-based deterministic stream; the same seed and call sequence
/// reproduce the same outputs.
class DeterministicRng final : public Rng {
 public:
  explicit DeterministicRng(std::uint64_t seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::array<std::uint8_t, 32> state_;
};

/// Seconds-since-epoch clock; scenarios use a manual clock for
/// reproducible timestamps.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now() const = 0;
};

class SystemClock final : public Clock {
 public:
  std::int64_t now() const override;
};

class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t start) : t_(start) {}
  std::int64_t now() const override { return t_; }
  void advance(std::int64_t seconds) { t_ += seconds; }
  void set(std::int64_t t) { t_ = t; }

 private:
  std::int64_t t_;
};

Digest32 sha256(ByteView data);
Digest32 sha256(ByteView a, ByteView b);

struct KeyPair {
  PublicKey public_key{};
  SecretKey secret_key{};

  static KeyPair generate(Rng& rng);
  static KeyPair from_seed(const Seed32& seed);

  Signature sign(ByteView body) const;
};

bool verify_signature(ByteView body, const Signature& sig, const PublicKey& pub);

// Authenticated encryption for private key material at rest
// (XSalsa20-Poly1305 secretbox).
using FileSecret = std::array<std::uint8_t, 32>;

struct SealedBox {
  std::array<std::uint8_t, 24> nonce{};
  Bytes ciphertext;
};

SealedBox seal(ByteView plaintext, const FileSecret& secret, Rng& rng);
Bytes unseal(const SealedBox& box, const FileSecret& secret);  // throws on forgery

/// Must be called once before any other crypto entry point; safe to call
/// repeatedly.
void crypto_init();

}  // namespace wattest

#endif  // WATTEST_CRYPTO_HPP_
