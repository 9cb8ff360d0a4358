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

#include <filesystem>

#include "reference.hpp"
#include "wattest/ledger.hpp"

using namespace wattest;

TEST_CASE("submissions confirm in order") {
  SystemRng rng;
  KeyPair signer = KeyPair::generate(rng);
  ledger::ConfirmedLedger chain;

  CHECK(chain.submit(ledger::make_tx(signer, to_bytes("a"))) == 0);
  CHECK(chain.submit(ledger::make_tx(signer, to_bytes("b"))) == 1);
  CHECK(chain.size() == 2);
  CHECK(chain.position_of(sha256(to_bytes("a"))) == 0);
  CHECK_FALSE(chain.position_of(sha256(to_bytes("zzz"))).has_value());
}

TEST_CASE("invalid transactions are rejected") {
  SystemRng rng;
  KeyPair signer = KeyPair::generate(rng);
  ledger::ConfirmedLedger chain;

  SUBCASE("duplicate digest") {
    chain.submit(ledger::make_tx(signer, to_bytes("dup")));
    CHECK_THROWS_AS(chain.submit(ledger::make_tx(signer, to_bytes("dup"))), Error);
    try {
      chain.submit(ledger::make_tx(signer, to_bytes("dup")));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDuplicateTx);
    }
  }
  SUBCASE("bad signature") {
    ledger::LedgerTx tx = ledger::make_tx(signer, to_bytes("x"));
    tx.signature[0] ^= 1;
    CHECK_THROWS_AS(chain.submit(tx), Error);
  }
  SUBCASE("digest mismatch") {
    ledger::LedgerTx tx = ledger::make_tx(signer, to_bytes("x"));
    tx.tx_digest[0] ^= 1;
    CHECK_THROWS_AS(chain.submit(tx), Error);
  }
}

TEST_CASE("query_by_key preserves confirmation order across interleavings") {
  SystemRng rng;
  KeyPair alice = KeyPair::generate(rng);
  KeyPair bob = KeyPair::generate(rng);
  ledger::ConfirmedLedger chain;

  chain.submit(ledger::make_tx(alice, to_bytes("a0")));
  chain.submit(ledger::make_tx(bob, to_bytes("b0")));
  chain.submit(ledger::make_tx(alice, to_bytes("a1")));

  auto for_alice = chain.query_by_key(alice.public_key);
  REQUIRE(for_alice.size() == 2);
  CHECK(for_alice[0].first == 0);
  CHECK(for_alice[1].first == 2);

  auto for_bob = chain.query_by_key(bob.public_key);
  REQUIRE(for_bob.size() == 1);
  CHECK(for_bob[0].first == 1);

  KeyPair stranger = KeyPair::generate(rng);
  CHECK(chain.query_by_key(stranger.public_key).empty());
}

TEST_CASE("append-only: existing query results are stable as the ledger grows") {
  SystemRng rng;
  KeyPair signer = KeyPair::generate(rng);
  ledger::ConfirmedLedger chain;
  for (int i = 0; i < 5; ++i) {
    chain.submit(ledger::make_tx(signer, to_bytes("s" + std::to_string(i))));
  }
  auto before = chain.query_by_key(signer.public_key);
  for (int i = 5; i < 10; ++i) {
    chain.submit(ledger::make_tx(signer, to_bytes("s" + std::to_string(i))));
  }
  auto after = chain.query_by_key(signer.public_key);
  REQUIRE(after.size() == 10);
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(after[i] == before[i]);
  }
}

TEST_CASE("ledger log persists and replays") {
  SystemRng rng;
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "wattest_ledger_test.log";
  fs::remove(path);

  KeyPair signer = KeyPair::generate(rng);
  {
    ledger::ConfirmedLedger chain;
    for (int i = 0; i < 3; ++i) {
      ledger::LedgerTx tx = ledger::make_tx(signer, to_bytes("p" + std::to_string(i)));
      chain.submit(tx);
      ledger::ConfirmedLedger::append_log(path, tx);
    }
  }
  ledger::ConfirmedLedger loaded = ledger::ConfirmedLedger::load(path);
  CHECK(loaded.size() == 3);
  CHECK(loaded.query_by_key(signer.public_key).size() == 3);
  CHECK(loaded.at(1).payload == to_bytes("p1"));
  fs::remove(path);
}
