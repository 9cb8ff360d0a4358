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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reference.hpp"
#include "wattest/crypto.hpp"
#include "wattest/errors.hpp"

using namespace wattest;
namespace ts = wattest::testsupport;

TEST_CASE("sha256 matches NIST known answers") {
  CHECK(hex_encode(view(sha256(Bytes{}))) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hex_encode(view(sha256(to_bytes("abc")))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hex_encode(view(sha256(to_bytes(
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")))) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 agrees with the OpenSSL reference on random inputs") {
  ts::TestRand rng(7);
  for (int i = 0; i < 200; ++i) {
    Bytes data = ts::random_bytes(rng, rng() % 300);
    CHECK(sha256(data) == ts::ref_sha256(data));
  }
}

TEST_CASE("two-part sha256 equals hash of concatenation") {
  ts::TestRand rng(8);
  for (int i = 0; i < 50; ++i) {
    Bytes a = ts::random_bytes(rng, rng() % 64);
    Bytes b = ts::random_bytes(rng, rng() % 64);
    CHECK(sha256(a, b) == ts::ref_sha256(concat(a, b)));
  }
}

TEST_CASE("sign/verify round trip and rejection") {
  SystemRng rng;
  KeyPair kp = KeyPair::generate(rng);
  Bytes body = to_bytes("the canonical body");
  Signature sig = kp.sign(body);

  CHECK(verify_signature(body, sig, kp.public_key));

  KeyPair other = KeyPair::generate(rng);
  CHECK_FALSE(verify_signature(body, sig, other.public_key));

  SUBCASE("single bit flips in the body are detected") {
    ts::TestRand trand(9);
    for (int i = 0; i < 50; ++i) {
      Bytes mutated = body;
      std::size_t byte = trand() % mutated.size();
      mutated[byte] ^= static_cast<std::uint8_t>(1u << (trand() % 8));
      CHECK_FALSE(verify_signature(mutated, sig, kp.public_key));
    }
  }
  SUBCASE("signature bit flips are detected") {
    Signature bad = sig;
    bad[10] ^= 0x40;
    CHECK_FALSE(verify_signature(body, bad, kp.public_key));
  }
}

TEST_CASE("keypair from seed is deterministic") {
  Seed32 seed{};
  seed[0] = 0xAB;
  KeyPair a = KeyPair::from_seed(seed);
  KeyPair b = KeyPair::from_seed(seed);
  CHECK(a.public_key == b.public_key);
  CHECK(a.secret_key == b.secret_key);
}

TEST_CASE("deterministic rng reproduces its stream") {
  DeterministicRng a(42), b(42), c(43);
  Bytes ba(64), bb(64), bc(64);
  a.fill(ba);
  b.fill(bb);
  c.fill(bc);
  CHECK(ba == bb);
  CHECK(ba != bc);

  // Consecutive draws differ from each other.
  Bytes next(64);
  a.fill(next);
  CHECK(next != ba);
}

TEST_CASE("sealed boxes round trip and reject tampering") {
  SystemRng rng;
  FileSecret secret{};
  rng.fill(secret);
  Bytes plain = to_bytes("private key bytes");

  SealedBox box = seal(plain, secret, rng);
  CHECK(unseal(box, secret) == plain);

  SealedBox bad = box;
  bad.ciphertext[3] ^= 0x01;
  CHECK_THROWS_AS(unseal(bad, secret), Error);

  FileSecret wrong = secret;
  wrong[0] ^= 0xFF;
  CHECK_THROWS_AS(unseal(box, wrong), Error);
}

TEST_CASE("hex round trip") {
  ts::TestRand rng(10);
  Bytes data = ts::random_bytes(rng, 33);
  CHECK(hex_decode(hex_encode(data)) == data);
  CHECK_THROWS_AS(hex_decode("zz"), Error);
}
