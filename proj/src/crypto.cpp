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

#include "wattest/crypto.hpp"

#include <sodium.h>

#include <ctime>
#include <stdexcept>

#include "wattest/errors.hpp"

namespace wattest {

void crypto_init() {
  if (sodium_init() < 0) {
    throw std::runtime_error("libsodium initialization failed");
  }
}

namespace {
struct InitOnce {
  InitOnce() { crypto_init(); }
};
const InitOnce init_once;
}  // namespace

void SystemRng::fill(std::span<std::uint8_t> out) {
  randombytes_buf(out.data(), out.size());
}

DeterministicRng::DeterministicRng(std::uint64_t seed) {
  std::array<std::uint8_t, randombytes_SEEDBYTES> s{};
  for (int i = 0; i < 8; ++i) {
    s[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  }
  state_ = s;
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
  // Draw output plus the next state from one deterministic stream so the
  // sequence depends only on the seed and the order of calls.
  std::vector<std::uint8_t> block(out.size() + state_.size());
  randombytes_buf_deterministic(block.data(), block.size(), state_.data());
  std::copy_n(block.data(), out.size(), out.data());
  std::copy_n(block.data() + out.size(), state_.size(), state_.data());
}

std::int64_t SystemClock::now() const {
  return static_cast<std::int64_t>(std::time(nullptr));
}

Digest32 sha256(ByteView data) {
  Digest32 out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest32 sha256(ByteView a, ByteView b) {
  Digest32 out{};
  crypto_hash_sha256_state st;
  crypto_hash_sha256_init(&st);
  crypto_hash_sha256_update(&st, a.data(), a.size());
  crypto_hash_sha256_update(&st, b.data(), b.size());
  crypto_hash_sha256_final(&st, out.data());
  return out;
}

KeyPair KeyPair::generate(Rng& rng) {
  Seed32 seed{};
  rng.fill(seed);
  return from_seed(seed);
}

KeyPair KeyPair::from_seed(const Seed32& seed) {
  static_assert(crypto_sign_SEEDBYTES == 32);
  static_assert(crypto_sign_PUBLICKEYBYTES == kPublicKeySize);
  static_assert(crypto_sign_SECRETKEYBYTES == kSecretKeySize);
  KeyPair kp;
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(),
                           seed.data());
  return kp;
}

Signature KeyPair::sign(ByteView body) const {
  static_assert(crypto_sign_BYTES == kSignatureSize);
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, body.data(), body.size(),
                       secret_key.data());
  return sig;
}

bool verify_signature(ByteView body, const Signature& sig, const PublicKey& pub) {
  return crypto_sign_verify_detached(sig.data(), body.data(), body.size(),
                                     pub.data()) == 0;
}

SealedBox seal(ByteView plaintext, const FileSecret& secret, Rng& rng) {
  static_assert(crypto_secretbox_KEYBYTES == 32);
  static_assert(crypto_secretbox_NONCEBYTES == 24);
  SealedBox box;
  rng.fill(box.nonce);
  box.ciphertext.resize(plaintext.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(box.ciphertext.data(), plaintext.data(),
                        plaintext.size(), box.nonce.data(), secret.data());
  return box;
}

Bytes unseal(const SealedBox& box, const FileSecret& secret) {
  if (box.ciphertext.size() < crypto_secretbox_MACBYTES) {
    throw Error(ErrorCode::kDecodeFailed, "sealed box too short");
  }
  Bytes out(box.ciphertext.size() - crypto_secretbox_MACBYTES);
  if (crypto_secretbox_open_easy(out.data(), box.ciphertext.data(),
                                 box.ciphertext.size(), box.nonce.data(),
                                 secret.data()) != 0) {
    throw Error(ErrorCode::kDecodeFailed, "sealed box authentication failed");
  }
  return out;
}

}  // namespace wattest
