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

#include <cstdio>
#include <filesystem>
#include <string>

#include "wattest/bytes.hpp"
#include "wattest/canonical.hpp"
#include "wattest/model.hpp"

using namespace wattest;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  std::string command = std::string(WATTEST_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buffer[512];
  while (fgets(buffer, sizeof buffer, pipe) != nullptr) {
    result.output += buffer;
  }
  int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

struct TempStore {
  fs::path dir;
  TempStore() {
    dir = fs::temp_directory_path() /
          ("wattest_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~TempStore() { fs::remove_all(dir); }
  std::string flag() const { return "--store-dir " + dir.string(); }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("every built-in scenario meets its expectation") {
  for (const char* name :
       {"happy-path", "pop-insufficiency", "tamper", "reconcile-mismatch"}) {
    CliResult r = run_cli(std::string("scenario run ") + name + " --seed 7");
    INFO(name, ": ", r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("met") != std::string::npos);
  }
}

TEST_CASE("pop-insufficiency prints the possession-vs-binding line") {
  CliResult r = run_cli("scenario run pop-insufficiency --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PoP ok, attestation contraindicated") != std::string::npos);
}

TEST_CASE("scenario output is byte-identical for a fixed seed") {
  CliResult a = run_cli("scenario run happy-path --seed 99");
  CliResult b = run_cli("scenario run happy-path --seed 99");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);

  CliResult c = run_cli("scenario run happy-path --seed 100");
  CHECK(c.output != a.output);  // the seed reaches the generated identities
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("device").exit_code == 2);
  CHECK(run_cli("scenario run").exit_code == 2);  // missing name
  CHECK(run_cli("").exit_code == 2);
}

TEST_CASE("unknown scenario names fail with exit 1") {
  CliResult r = run_cli("scenario run nonesuch");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("NotFound") != std::string::npos);
}

TEST_CASE("device lifecycle through the CLI") {
  TempStore store;
  std::string digest1(64, '1');
  std::string digest2(64, '2');

  CliResult provision = run_cli(
      "device provision --lat 42.36 --lon -71.09 --alt 10 --component board=" +
      digest1 + " --component fw=" + digest2 + " " + store.flag());
  INFO(provision.output);
  REQUIRE(provision.exit_code == 0);
  CHECK(provision.output.find("device_id:") != std::string::npos);

  CliResult create = run_cli("device create-key --fixed --sign-only --parent ak " +
                             store.flag());
  REQUIRE(create.exit_code == 0);
  CHECK(create.output.find("handle:") != std::string::npos);

  CliResult sign = run_cli("device sign --key newest --payload hello " +
                           store.flag());
  REQUIRE(sign.exit_code == 0);
  CHECK(sign.output.find("\"seq\":0") != std::string::npos);
  CHECK(sign.output.find("\"counter_after\":1") != std::string::npos);

  std::string nonce(64, 'a');
  CliResult quote = run_cli("device quote --nonce " + nonce + " --pcrs 0,16 " +
                            store.flag());
  REQUIRE(quote.exit_code == 0);
  CHECK(quote.output.find("\"counter\":1") != std::string::npos);

  SUBCASE("bad geolocation is a runtime failure, not a usage error") {
    TempStore other;
    CliResult bad = run_cli(
        "device provision --lat 91 --lon 0 --component a=" + digest1 + " " +
        other.flag());
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("InvalidGeolocation") != std::string::npos);
  }
}

TEST_CASE("offline endorse + evidence + appraise round trip") {
  TempStore store;
  std::string digest1(64, '3');

  REQUIRE(run_cli("device provision --lat 10 --lon 20 --component fw=" +
                  digest1 + " " + store.flag())
              .exit_code == 0);
  REQUIRE(run_cli("device create-key --fixed --sign-only --parent ak " +
                  store.flag())
              .exit_code == 0);
  REQUIRE(run_cli("endorse issue --endorser-id acme " + store.flag())
              .exit_code == 0);

  // the endorsement must reach the verifier's endorsement log
  fs::path end_file;
  for (const auto& entry : fs::directory_iterator(store.dir)) {
    if (entry.path().extension() == ".end") end_file = entry.path();
  }
  REQUIRE(!end_file.empty());
  auto endorsement = load_canonical<model::Endorsement>(end_file);
  {
    std::ofstream log(store.dir / "endorsements.log", std::ios::app);
    log << canonical_dump(Json(endorsement)) << "\n";
  }

  std::string nonce(64, 'b');
  fs::path evd = store.dir / "session.evd";
  CliResult evidence = run_cli(
      "device evidence --nonce " + nonce +
      " --claims system_config,key_provenance --subject newest --out " +
      evd.string() + " --produced-at 1700000000 " + store.flag());
  REQUIRE(evidence.exit_code == 0);

  CliResult appraise = run_cli(
      "verify appraise --evidence " + evd.string() + " --nonce " + nonce +
      " --nonce-issued-at 1700000000 --now 1700000010 " + store.flag());
  INFO(appraise.output);
  REQUIRE(appraise.exit_code == 0);
  CHECK(appraise.output.find("verdict: affirming") != std::string::npos);

  SUBCASE("stale challenge flips the verdict") {
    CliResult stale = run_cli(
        "verify appraise --evidence " + evd.string() + " --nonce " + nonce +
        " --nonce-issued-at 1700000000 --now 1700009999 " + store.flag());
    REQUIRE(stale.exit_code == 0);
    CHECK(stale.output.find("verdict: contraindicated") != std::string::npos);
  }
}

TEST_CASE("vasp register, certify and lookup through the CLI") {
  TempStore store;
  SystemRng rng;
  KeyPair customer_key = KeyPair::generate(rng);
  std::string key_b64 = b64url_encode(view(customer_key.public_key));
  DeviceId device{};
  device.fill(0x31);

  std::string reg_args =
      "vasp register --customer-name Alice --customer-account alice-1 "
      "--customer-address '1 Main St' --institution-name 'First VASP' "
      "--institution-address '99 Broad St' --institution-id 021000021 "
      "--key " + key_b64 + " --device " + b64url_encode(view(device)) + " " +
      store.flag();
  CliResult reg = run_cli(reg_args);
  INFO(reg.output);
  REQUIRE(reg.exit_code == 0);
  CHECK(reg.output.find("acct-000001") != std::string::npos);

  CliResult cert = run_cli("vasp certify --account acct-000001 --key " +
                           key_b64 + " " + store.flag());
  REQUIRE(cert.exit_code == 0);
  auto chain = load_canonical<std::vector<model::SimpleCertificate>>(
      store.dir / "acct-000001.cert");
  REQUIRE(chain.size() == 2);
  CHECK(model::verify_chain(chain, SystemClock{}.now()));

  CliResult lookup = run_cli("vasp lookup --key " + key_b64 + " " + store.flag());
  CHECK(lookup.exit_code == 0);
  CHECK(lookup.output.find("Alice") != std::string::npos);

  CliResult missing = run_cli(
      "vasp lookup --key " +
      b64url_encode(view(KeyPair::generate(rng).public_key)) + " " + store.flag());
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("not_found") != std::string::npos);

  SUBCASE("duplicate key registration fails") {
    CliResult dup = run_cli(reg_args);
    CHECK(dup.exit_code == 1);
    CHECK(dup.output.find("DuplicateKey") != std::string::npos);
  }
}

TEST_CASE("ledger submit and query through the CLI") {
  TempStore store;
  SystemRng rng;
  KeyPair signer = KeyPair::generate(rng);

  // pre-signed transaction file
  Json kp{{"public", b64url_encode(view(signer.public_key))},
          {"secret", b64url_encode(view(signer.secret_key))}};
  fs::path key_file = store.dir / "signer.key";
  write_file(key_file, canonical_bytes(kp));

  CliResult s0 = run_cli("ledger submit --payload one --signer-key " +
                         key_file.string() + " " + store.flag());
  REQUIRE(s0.exit_code == 0);
  CHECK(s0.output.find("position: 0") != std::string::npos);

  CliResult s1 = run_cli("ledger submit --payload two --signer-key " +
                         key_file.string() + " " + store.flag());
  CHECK(s1.output.find("position: 1") != std::string::npos);

  CliResult dup = run_cli("ledger submit --payload one --signer-key " +
                          key_file.string() + " " + store.flag());
  CHECK(dup.exit_code == 1);
  CHECK(dup.output.find("DuplicateTx") != std::string::npos);

  CliResult q = run_cli("ledger query --key " +
                        b64url_encode(view(signer.public_key)) + " " +
                        store.flag());
  REQUIRE(q.exit_code == 0);
  CHECK(q.output.find("0 ") == 0);
  CHECK(q.output.find("\n1 ") != std::string::npos);
}
