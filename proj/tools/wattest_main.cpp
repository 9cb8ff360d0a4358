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

#include <sys/stat.h>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "wattest/appraise.hpp"
#include "wattest/endorse.hpp"
#include "wattest/evidence.hpp"
#include "wattest/ledger.hpp"
#include "wattest/protocol.hpp"
#include "wattest/risk.hpp"
#include "wattest/scenario.hpp"
#include "wattest/vasp.hpp"

namespace {

using namespace wattest;
namespace fs = std::filesystem;

struct GlobalOptions {
  std::string store_dir;
  std::string policy_file;
  std::string anchors_file;
  std::string weights_file;
  std::string bind = "127.0.0.1:7754";
  std::uint64_t seed = 0;
  bool seeded = false;
};

fs::path store_dir(const GlobalOptions& g) {
  fs::path dir;
  if (!g.store_dir.empty()) {
    dir = g.store_dir;
  } else if (const char* env = std::getenv("WALLET_ATTEST_HOME")) {
    dir = env;
  } else {
    dir = ".wattest";
  }
  fs::create_directories(dir);
  return dir;
}

std::unique_ptr<Rng> make_rng(const GlobalOptions& g) {
  if (g.seeded) return std::make_unique<DeterministicRng>(g.seed);
  return std::make_unique<SystemRng>();
}

fs::path anchors_path(const GlobalOptions& g) {
  return g.anchors_file.empty() ? store_dir(g) / "anchors.json"
                                : fs::path(g.anchors_file);
}

endorse::TrustAnchors load_anchors(const GlobalOptions& g) {
  fs::path path = anchors_path(g);
  if (fs::exists(path)) return endorse::TrustAnchors::load(path);
  return {};
}

appraise::AppraisalPolicy load_policy(const GlobalOptions& g) {
  if (!g.policy_file.empty()) {
    return appraise::AppraisalPolicy::load(g.policy_file);
  }
  fs::path path = store_dir(g) / "policy.json";
  if (fs::exists(path)) return appraise::AppraisalPolicy::load(path);
  return appraise::default_policy("vasp-one");
}

risk::RiskWeights load_weights(const GlobalOptions& g) {
  if (!g.weights_file.empty()) return risk::RiskWeights::load(g.weights_file);
  fs::path path = store_dir(g) / "weights.json";
  if (fs::exists(path)) return risk::RiskWeights::load(path);
  return risk::RiskWeights::defaults();
}

// Key files: canonical {"public","secret"} with owner-only access.
void save_keypair(const fs::path& path, const KeyPair& kp) {
  Json j{{"public", b64url_encode(view(kp.public_key))},
         {"secret", b64url_encode(view(kp.secret_key))}};
  write_file(path, canonical_bytes(j));
  ::chmod(path.c_str(), 0600);
}

KeyPair load_keypair(const fs::path& path) {
  Json j = parse_json(read_file(path));
  KeyPair kp;
  kp.public_key = require_b64_fixed<kPublicKeySize>(j, "public");
  kp.secret_key = require_b64_fixed<kSecretKeySize>(j, "secret");
  return kp;
}

KeyPair load_or_create_keypair(const fs::path& path, Rng& rng) {
  if (fs::exists(path)) return load_keypair(path);
  KeyPair kp = KeyPair::generate(rng);
  save_keypair(path, kp);
  return kp;
}

fs::path device_path(const GlobalOptions& g) { return store_dir(g) / "device.json"; }

hw::Device load_device(const GlobalOptions& g) {
  fs::path path = device_path(g);
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kNotFound,
                "no provisioned device at " + path.string() +
                    " (run `wattest device provision` first)");
  }
  return hw::Device::load(path);
}

Digest32 parse_digest(const std::string& text) {
  Bytes raw = text.size() == 64 ? hex_decode(text) : b64url_decode(text);
  return fixed<32>(raw);
}

PublicKey parse_public_key(const std::string& text) {
  Bytes raw = text.size() == 64 ? hex_decode(text) : b64url_decode(text);
  return fixed<kPublicKeySize>(raw);
}

KeyHandle parse_handle(const hw::Device& device, const std::string& text) {
  if (text == "ek") return device.ek_handle();
  if (text == "ak") return device.ak_handle();
  if (text == "newest") {
    std::optional<KeyHandle> h = device.newest_app_key();
    if (!h) throw Error(ErrorCode::kNoSubjectKey, "device has no application key");
    return *h;
  }
  KeyHandle h;
  h.id = fixed<8>(b64url_decode(text));
  return h;
}

std::pair<std::string, std::uint16_t> parse_host_port(const std::string& text) {
  std::size_t colon = text.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kBadRequest, "expected host:port, got " + text);
  }
  return {text.substr(0, colon),
          static_cast<std::uint16_t>(std::stoul(text.substr(colon + 1)))};
}

std::vector<model::ComponentMeasurement> parse_components(
    const std::vector<std::string>& specs, const std::string& manifest_file) {
  std::vector<model::ComponentMeasurement> manifest;
  if (!manifest_file.empty()) {
    manifest = canonical_decode<std::vector<model::ComponentMeasurement>>(
        read_file(manifest_file));
  }
  for (const std::string& spec : specs) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kBadRequest,
                  "component must be name=hex-digest: " + spec);
    }
    manifest.push_back(
        {spec.substr(0, eq), parse_digest(spec.substr(eq + 1))});
  }
  return manifest;
}

volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }

// --- subcommand bodies; each returns the process exit code ---

int cmd_device_provision(const GlobalOptions& g, const std::string& manufacturer,
                         double lat, double lon, double alt,
                         const std::vector<std::string>& components,
                         const std::string& manifest_file) {
  auto rng = make_rng(g);
  hw::Device device = hw::Device::provision(
      manufacturer, {lat, lon, alt}, parse_components(components, manifest_file),
      *rng);
  device.save(device_path(g), *rng);
  save_canonical(store_dir(g) / "device.prov", device.provisioning_record());
  std::cout << "device_id: " << b64url_encode(view(device.device_id())) << "\n"
            << "state: " << device_path(g).string() << "\n"
            << "provisioning record: " << (store_dir(g) / "device.prov").string()
            << "\n";
  return 0;
}

int cmd_device_create_key(const GlobalOptions& g, bool fixed_to_device,
                          bool sign_only, const std::string& parent) {
  auto rng = make_rng(g);
  hw::Device device = load_device(g);
  std::optional<KeyHandle> parent_handle;
  if (!parent.empty()) parent_handle = parse_handle(device, parent);
  KeyHandle handle = device.create_key(
      {.fixed_to_device = fixed_to_device, .sign_only = sign_only,
       .created_inside = true},
      parent_handle, *rng);
  device.save(device_path(g), *rng);
  std::cout << "handle: " << b64url_encode(view(handle.id)) << "\n"
            << "public: " << b64url_encode(view(device.key(handle).public_part))
            << "\n";
  return 0;
}

int cmd_device_sign(const GlobalOptions& g, const std::string& key,
                    const std::string& payload,
                    const std::string& payload_file, const std::string& out) {
  auto rng = make_rng(g);
  hw::Device device = load_device(g);
  Bytes data = payload_file.empty() ? to_bytes(payload) : read_file(payload_file);
  KeyHandle handle = parse_handle(device, key);
  hw::SignOutcome outcome = device.sign_transaction(handle, data);
  device.save(device_path(g), *rng);

  ledger::LedgerTx tx{.tx_digest = outcome.entry.tx_digest,
                      .signer_public_key = device.key(handle).public_part,
                      .payload = data,
                      .signature = outcome.signature};
  if (!out.empty()) save_canonical(out, tx);
  std::cout << "signature: " << b64url_encode(view(outcome.signature)) << "\n"
            << "entry: " << canonical_dump(Json(outcome.entry)) << "\n";
  if (!out.empty()) std::cout << "tx written to " << out << "\n";
  return 0;
}

int cmd_device_quote(const GlobalOptions& g, const std::string& nonce_text,
                     const std::string& pcrs, const std::string& out) {
  hw::Device device = load_device(g);
  Bytes nonce = nonce_text.size() == 64 ? hex_decode(nonce_text)
                                        : b64url_decode(nonce_text);
  std::vector<unsigned> selection;
  std::stringstream ss(pcrs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    selection.push_back(static_cast<unsigned>(std::stoul(item)));
  }
  model::Quote q = device.quote(nonce, selection);
  std::string encoded = canonical_dump(Json(q));
  if (!out.empty()) write_file(out, to_bytes(encoded));
  std::cout << encoded << "\n";
  return 0;
}

std::vector<std::string> split_claims(const std::string& claims) {
  std::vector<std::string> kinds;
  std::stringstream ss(claims);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) kinds.push_back(item);
  }
  return kinds;
}

int cmd_device_evidence(const GlobalOptions& g, const std::string& nonce_text,
                        const std::string& claims, const std::string& subject,
                        std::int64_t produced_at, const std::string& out) {
  hw::Device device = load_device(g);
  Bytes nonce = nonce_text.size() == 64 ? hex_decode(nonce_text)
                                        : b64url_decode(nonce_text);
  std::optional<KeyHandle> subject_handle;
  if (!subject.empty()) subject_handle = parse_handle(device, subject);
  if (produced_at == 0) produced_at = SystemClock{}.now();
  model::Evidence evidence = model::build_evidence(
      device, nonce, split_claims(claims), produced_at, subject_handle);
  if (!out.empty()) save_canonical(out, evidence);
  std::cout << canonical_dump(Json(evidence)) << "\n";
  return 0;
}

int cmd_device_attest(const GlobalOptions& g, const std::string& connect,
                      const std::string& claims, const std::string& subject,
                      const std::string& out) {
  auto rng = make_rng(g);
  hw::Device device = load_device(g);
  std::optional<KeyHandle> subject_handle;
  if (!subject.empty()) subject_handle = parse_handle(device, subject);
  std::vector<model::ClaimKind> kinds;
  for (const std::string& name : split_claims(claims)) {
    kinds.push_back(model::claim_kind_from_name(name));
  }
  auto [host, port] = parse_host_port(connect.empty() ? g.bind : connect);
  proto::AttestationOutcome outcome =
      proto::run_attestation(host, port, device, kinds, *rng, subject_handle);
  if (!out.empty()) save_canonical(out, outcome.result);
  std::cout << "verdict: " << model::verdict_name(outcome.result.verdict) << "\n"
            << "verifier_public: " << b64url_encode(view(outcome.verifier_public))
            << "\n"
            << "correlation_id: " << b64url_encode(view(outcome.correlation_id))
            << "\n";
  return 0;
}

int cmd_endorse_issue(const GlobalOptions& g, const std::string& endorser_id,
                      const std::string& prov_file, const std::string& out) {
  auto rng = make_rng(g);
  fs::path key_path = store_dir(g) / ("endorser-" + endorser_id + ".key");
  KeyPair endorser_key = load_or_create_keypair(key_path, *rng);

  endorse::TrustAnchors anchors = load_anchors(g);
  anchors.add(endorser_id, endorser_key.public_key);
  anchors.save(anchors_path(g));

  fs::path prov = prov_file.empty() ? store_dir(g) / "device.prov"
                                    : fs::path(prov_file);
  auto record = load_canonical<hw::ProvisioningRecord>(prov);
  model::Endorsement endorsement = endorse::issue_endorsement(
      endorser_key, endorser_id, record, SystemClock{}.now());

  fs::path out_path = out.empty()
                          ? store_dir(g) / (b64url_encode(view(record.device_id)) + ".end")
                          : fs::path(out);
  save_canonical(out_path, endorsement);
  std::cout << "endorsement: " << out_path.string() << "\n"
            << "anchor '" << endorser_id << "' recorded in "
            << anchors_path(g).string() << "\n";
  return 0;
}

int cmd_endorse_publish(const GlobalOptions& g, const std::string& file,
                        const std::string& connect) {
  auto rng = make_rng(g);
  auto endorsement = load_canonical<model::Endorsement>(file);
  auto [host, port] = parse_host_port(connect.empty() ? g.bind : connect);
  proto::publish_endorsement(host, port, endorsement, *rng);
  std::cout << "published endorsement for device "
            << b64url_encode(view(endorsement.device_id)) << "\n";
  return 0;
}

int cmd_verify_serve(const GlobalOptions& g) {
  auto rng = make_rng(g);
  auto [host, port] = parse_host_port(g.bind);
  endorse::TrustAnchors anchors = load_anchors(g);
  static endorse::EndorsementStore store{anchors};
  fs::path log = store_dir(g) / "endorsements.log";
  if (fs::exists(log)) store.load_log(log);

  KeyPair verifier_key =
      load_or_create_keypair(store_dir(g) / "verifier.key", *rng);
  static SystemClock clock;
  proto::VerifierService service(host, port, store, load_policy(g),
                                 verifier_key, clock, *rng);
  std::uint16_t bound = service.start();
  std::cout << "verifier listening on " << host << ":" << bound << "\n"
            << "verifier_public: " << b64url_encode(view(verifier_key.public_key))
            << "\n";
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (g_stop == 0) {
    struct timespec ts{0, 100000000};  // 100 ms
    nanosleep(&ts, nullptr);
  }
  service.stop();
  return 0;
}

int cmd_verify_appraise(const GlobalOptions& g, const std::string& evidence_file,
                        const std::string& nonce_text, std::int64_t issued_at,
                        std::int64_t now, const std::string& out) {
  auto rng = make_rng(g);
  auto evidence = load_canonical<model::Evidence>(evidence_file);

  endorse::TrustAnchors anchors = load_anchors(g);
  endorse::EndorsementStore store{anchors};
  fs::path log = store_dir(g) / "endorsements.log";
  if (fs::exists(log)) store.load_log(log);

  appraise::AppraisalContext ctx;
  ctx.nonce = fixed<32>(nonce_text.size() == 64 ? hex_decode(nonce_text)
                                                : b64url_decode(nonce_text));
  ctx.nonce_issued_at = issued_at;
  ctx.now = now != 0 ? now : SystemClock{}.now();
  ctx.endorsements = store.lookup(evidence.quote.device_id);

  KeyPair verifier_key =
      load_or_create_keypair(store_dir(g) / "verifier.key", *rng);
  model::AttestationResult result =
      appraise::appraise(evidence, ctx, load_policy(g), verifier_key);
  if (!out.empty()) save_canonical(out, result);
  std::cout << "verdict: " << model::verdict_name(result.verdict) << "\n";
  for (const model::Finding& f : result.findings) {
    std::cout << "  [" << (f.passed ? "pass" : "FAIL") << "] " << f.rule_id
              << ": " << f.detail << "\n";
  }
  return 0;
}

fs::path accounts_path(const GlobalOptions& g) {
  return store_dir(g) / "accounts.json";
}

int cmd_vasp_register(const GlobalOptions& g, const vasp::TravelRuleParty& party,
                      const std::string& key, const std::string& device_id) {
  vasp::AccountStore accounts = vasp::AccountStore::load(accounts_path(g));
  DeviceId id = fixed<16>(b64url_decode(device_id));
  const vasp::CustomerAccount& account = accounts.register_account(
      party, parse_public_key(key), id, SystemClock{}.now());
  accounts.save(accounts_path(g));
  std::cout << "account: " << account.account_id << "\n";
  return 0;
}

int cmd_vasp_certify(const GlobalOptions& g, const std::string& account_id,
                     const std::string& key, std::int64_t not_before,
                     std::int64_t not_after, const std::string& vasp_name,
                     const std::string& out) {
  auto rng = make_rng(g);
  vasp::AccountStore accounts = vasp::AccountStore::load(accounts_path(g));
  const vasp::CustomerAccount* account = accounts.find_account(account_id);
  if (account == nullptr) {
    throw Error(ErrorCode::kNotFound, "account " + account_id);
  }
  KeyPair root = load_or_create_keypair(store_dir(g) / "vasp.key", *rng);
  std::int64_t now = SystemClock{}.now();
  vasp::VaspCa ca(root, vasp_name, now - 86400, now + 86400LL * 3650);
  if (not_before == 0) not_before = now;
  if (not_after == 0) not_after = now + 86400LL * 365;
  auto chain =
      ca.issue_key_certificate(*account, parse_public_key(key), not_before, not_after);
  fs::path out_path =
      out.empty() ? store_dir(g) / (account_id + ".cert") : fs::path(out);
  save_canonical(out_path, chain);
  std::cout << "certificate chain (leaf, root) written to " << out_path.string()
            << "\n";
  return 0;
}

int cmd_vasp_lookup(const GlobalOptions& g, const std::string& key) {
  vasp::AccountStore accounts = vasp::AccountStore::load(accounts_path(g));
  std::optional<vasp::TravelRuleParty> party =
      accounts.beneficiary_lookup(parse_public_key(key));
  if (!party) {
    std::cout << "not_found\n";
    return 1;
  }
  std::cout << canonical_dump(Json(*party)) << "\n";
  return 0;
}

int cmd_vasp_reconcile(const GlobalOptions& g, const std::string& evidence_file,
                       const std::string& key, const std::string& start_register,
                       const std::string& out) {
  auto evidence = load_canonical<model::Evidence>(evidence_file);
  const model::UsageExcerpt* excerpt = nullptr;
  for (const model::Claim& c : evidence.claims) {
    if (c.kind == model::ClaimKind::kKeyUsageSequence) excerpt = &c.usage();
  }
  if (excerpt == nullptr) {
    throw Error(ErrorCode::kBadRequest,
                "evidence carries no key_usage_sequence claim");
  }
  ledger::ConfirmedLedger chain =
      ledger::ConfirmedLedger::load(store_dir(g) / "ledger.log");
  Digest32 start{};
  if (!start_register.empty()) start = parse_digest(start_register);
  vasp::ReconciliationReport report =
      vasp::reconcile(evidence.quote.device_id, excerpt->entries,
                      excerpt->end_register, chain, parse_public_key(key), start);
  if (!out.empty()) save_canonical(out, report);
  std::cout << vasp::format_report(report);
  return 0;
}

int cmd_ledger_submit(const GlobalOptions& g, const std::string& tx_file,
                      const std::string& payload, const std::string& signer_key) {
  ledger::ConfirmedLedger chain =
      ledger::ConfirmedLedger::load(store_dir(g) / "ledger.log");
  ledger::LedgerTx tx;
  if (!tx_file.empty()) {
    tx = load_canonical<ledger::LedgerTx>(tx_file);
  } else if (!signer_key.empty()) {
    tx = ledger::make_tx(load_keypair(signer_key), to_bytes(payload));
  } else {
    throw Error(ErrorCode::kBadRequest, "need --tx or --payload with --signer-key");
  }
  std::size_t position = chain.submit(tx);
  ledger::ConfirmedLedger::append_log(store_dir(g) / "ledger.log", tx);
  std::cout << "position: " << position << "\n";
  return 0;
}

int cmd_ledger_query(const GlobalOptions& g, const std::string& key) {
  ledger::ConfirmedLedger chain =
      ledger::ConfirmedLedger::load(store_dir(g) / "ledger.log");
  for (const auto& [position, digest] : chain.query_by_key(parse_public_key(key))) {
    std::cout << position << " " << b64url_encode(view(digest)) << "\n";
  }
  return 0;
}

int cmd_risk_assess(const GlobalOptions& g, const std::string& result_file,
                    const std::string& verifier_pub, const risk::RiskInputs& inputs) {
  auto result = load_canonical<model::AttestationResult>(result_file);
  risk::RiskAssessment assessment = risk::assess_risk(
      result, parse_public_key(verifier_pub), inputs, load_weights(g));
  std::cout << canonical_dump(Json(assessment)) << "\n";
  return 0;
}

int cmd_scenario_run(const GlobalOptions& g, const std::string& name) {
  bool met = scenario::run_scenario(name, g.seeded ? g.seed : 1, std::cout);
  return met ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wallet attestation toolkit: emulated trusted-hardware wallet, "
               "endorser, neutral verifier, VASP compliance services and a "
               "deterministic ledger"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--store-dir", g.store_dir,
                 "state directory (default $WALLET_ATTEST_HOME or ./.wattest)");
  app.add_option("--policy", g.policy_file, "appraisal policy file");
  app.add_option("--anchors", g.anchors_file, "trust-anchor file");
  app.add_option("--weights", g.weights_file, "risk weight table file");
  app.add_option("--bind", g.bind, "service address as host:port");
  auto* seed_opt = app.add_option("--seed", g.seed, "deterministic RNG seed");

  // device
  auto* device = app.add_subcommand("device", "emulated wallet operations");
  device->require_subcommand(1);
  std::string manufacturer = "acme-wallets";
  double lat = 0, lon = 0, alt = 0;
  std::vector<std::string> components;
  std::string manifest_file;
  auto* provision = device->add_subcommand("provision", "provision a fresh device");
  provision->add_option("--manufacturer", manufacturer, "manufacturer id");
  provision->add_option("--lat", lat, "latitude")->required();
  provision->add_option("--lon", lon, "longitude")->required();
  provision->add_option("--alt", alt, "altitude meters");
  provision->add_option("--component", components,
                        "component as name=hex-digest (repeatable)");
  provision->add_option("--manifest", manifest_file,
                        "manifest file (canonical component list)");

  std::string key_parent, key_name = "newest";
  bool key_fixed = false, key_sign_only = false;
  auto* create_key = device->add_subcommand("create-key", "generate a key inside the device");
  create_key->add_flag("--fixed", key_fixed, "fix the key to the device");
  create_key->add_flag("--sign-only", key_sign_only, "restrict to signing");
  create_key->add_option("--parent", key_parent, "parent handle (ek|ak|base64url)");

  std::string sign_payload, sign_payload_file, sign_out;
  auto* sign = device->add_subcommand("sign", "sign a transaction payload");
  sign->add_option("--key", key_name, "key handle (newest|ak|ek|base64url)");
  sign->add_option("--payload", sign_payload, "payload text");
  sign->add_option("--payload-file", sign_payload_file, "payload file");
  sign->add_option("--out", sign_out, "write a ledger tx file");

  std::string nonce_text, pcrs = "0,16", quote_out;
  auto* quote = device->add_subcommand("quote", "produce a signed quote");
  quote->add_option("--nonce", nonce_text, "32-byte nonce (hex or base64url)")
      ->required();
  quote->add_option("--pcrs", pcrs, "comma-separated register indices");
  quote->add_option("--out", quote_out, "output file");

  std::string ev_nonce, ev_claims, ev_subject, ev_out;
  std::int64_t ev_produced_at = 0;
  auto* evidence_cmd = device->add_subcommand("evidence", "build signed evidence");
  evidence_cmd->add_option("--nonce", ev_nonce, "challenge nonce")->required();
  evidence_cmd->add_option("--claims", ev_claims,
                           "comma-separated claim kinds (key_provenance, "
                           "geolocation, key_usage_sequence, system_config)");
  evidence_cmd->add_option("--subject", ev_subject,
                           "key handle the provenance claim certifies");
  evidence_cmd->add_option("--produced-at", ev_produced_at, "epoch seconds");
  evidence_cmd->add_option("--out", ev_out, "write .evd file");

  std::string attest_connect, attest_claims, attest_subject, attest_out;
  auto* attest = device->add_subcommand(
      "attest", "run the nonce/evidence/result flow against a verifier");
  attest->add_option("--connect", attest_connect, "verifier host:port");
  attest->add_option("--claims", attest_claims, "comma-separated claim kinds");
  attest->add_option("--subject", attest_subject, "provenance subject handle");
  attest->add_option("--out", attest_out, "write .res file");

  // endorse
  auto* endorse_cmd = app.add_subcommand("endorse", "manufacturer endorsements");
  endorse_cmd->require_subcommand(1);
  std::string endorser_id = "acme-wallets", prov_file, endorsement_out;
  auto* issue = endorse_cmd->add_subcommand("issue", "issue an endorsement");
  issue->add_option("--endorser-id", endorser_id, "endorser identifier");
  issue->add_option("--prov", prov_file, "provisioning record file");
  issue->add_option("--out", endorsement_out, "output .end file");

  std::string publish_file, publish_connect;
  auto* publish = endorse_cmd->add_subcommand("publish", "push an endorsement to a verifier");
  publish->add_option("--endorsement", publish_file, ".end file")->required();
  publish->add_option("--connect", publish_connect, "verifier host:port");

  // verify
  auto* verify = app.add_subcommand("verify", "neutral verifier");
  verify->require_subcommand(1);
  verify->add_subcommand("serve", "run the verifier service");
  std::string evidence_file, appraise_nonce, appraise_out;
  std::int64_t nonce_issued_at = 0, appraise_now = 0;
  auto* appraise_cmd = verify->add_subcommand("appraise", "appraise an evidence file");
  appraise_cmd->add_option("--evidence", evidence_file, ".evd file")->required();
  appraise_cmd->add_option("--nonce", appraise_nonce, "challenge nonce")->required();
  appraise_cmd->add_option("--nonce-issued-at", nonce_issued_at,
                           "challenge issue time (epoch seconds)")->required();
  appraise_cmd->add_option("--now", appraise_now, "appraisal time (default: wall clock)");
  appraise_cmd->add_option("--out", appraise_out, "write .res file");

  // vasp
  auto* vasp_cmd = app.add_subcommand("vasp", "VASP compliance services");
  vasp_cmd->require_subcommand(1);
  vasp::TravelRuleParty party;
  std::string reg_key, reg_device;
  auto* vasp_register = vasp_cmd->add_subcommand("register", "register an account + key");
  vasp_register->add_option("--customer-name", party.name)->required();
  vasp_register->add_option("--customer-account", party.account)->required();
  vasp_register->add_option("--customer-address", party.address)->required();
  vasp_register->add_option("--institution-name", party.institution_name)->required();
  vasp_register->add_option("--institution-address", party.institution_address)->required();
  vasp_register->add_option("--institution-id", party.institution_id)->required();
  vasp_register->add_option("--key", reg_key, "public key")->required();
  vasp_register->add_option("--device", reg_device, "device id (base64url)")->required();

  std::string cert_account, cert_key, vasp_name = "vasp-one", cert_out;
  std::int64_t cert_from = 0, cert_to = 0;
  auto* certify = vasp_cmd->add_subcommand("certify", "issue a key certificate chain");
  certify->add_option("--account", cert_account)->required();
  certify->add_option("--key", cert_key)->required();
  certify->add_option("--from", cert_from, "validity start (epoch)");
  certify->add_option("--to", cert_to, "validity end (epoch)");
  certify->add_option("--vasp-name", vasp_name);
  certify->add_option("--out", cert_out);

  std::string lookup_key;
  auto* lookup = vasp_cmd->add_subcommand("lookup", "beneficiary lookup by key");
  lookup->add_option("--key", lookup_key)->required();

  std::string rec_evidence, rec_key, rec_start, rec_out;
  auto* reconcile_cmd = vasp_cmd->add_subcommand("reconcile", "usage log vs ledger");
  reconcile_cmd->add_option("--evidence", rec_evidence,
                            ".evd with a key_usage_sequence claim")->required();
  reconcile_cmd->add_option("--key", rec_key, "signer public key")->required();
  reconcile_cmd->add_option("--start-register", rec_start,
                            "usage register before the excerpt (default zero)");
  reconcile_cmd->add_option("--out", rec_out, "write .rpt file");

  // ledger
  auto* ledger_cmd = app.add_subcommand("ledger", "deterministic ledger");
  ledger_cmd->require_subcommand(1);
  std::string tx_file, submit_payload, signer_key_file;
  auto* submit = ledger_cmd->add_subcommand("submit", "confirm a transaction");
  submit->add_option("--tx", tx_file, "canonical LedgerTx file");
  submit->add_option("--payload", submit_payload, "payload text");
  submit->add_option("--signer-key", signer_key_file, "keypair file");

  std::string query_key;
  auto* query = ledger_cmd->add_subcommand("query", "confirmed txs for a key");
  query->add_option("--key", query_key)->required();

  // risk
  auto* risk_cmd = app.add_subcommand("risk", "relying-party risk assessment");
  risk_cmd->require_subcommand(1);
  std::string risk_result, risk_verifier_pub;
  risk::RiskInputs inputs;
  auto* assess = risk_cmd->add_subcommand("assess", "score a verified result");
  assess->add_option("--result", risk_result, ".res file")->required();
  assess->add_option("--verifier-pub", risk_verifier_pub)->required();
  assess->add_option("--hardware-type", inputs.hardware_type)->required();
  assess->add_option("--host-class", inputs.host_system_class)->required();
  assess->add_option("--asset-value", inputs.asset_value);
  assess->add_option("--weakness-count", inputs.weakness_history);

  // scenario
  auto* scenario_cmd = app.add_subcommand("scenario", "built-in demonstrations");
  scenario_cmd->require_subcommand(1);
  std::string scenario_name;
  auto* run = scenario_cmd->add_subcommand("run", "run a named scenario");
  run->add_option("name", scenario_name, "one of: happy-path, pop-insufficiency, "
                                         "tamper, reconcile-mismatch")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }
  g.seeded = seed_opt->count() > 0;

  try {
    if (provision->parsed()) {
      return cmd_device_provision(g, manufacturer, lat, lon, alt, components,
                                  manifest_file);
    }
    if (create_key->parsed()) {
      return cmd_device_create_key(g, key_fixed, key_sign_only, key_parent);
    }
    if (sign->parsed()) {
      return cmd_device_sign(g, key_name, sign_payload, sign_payload_file, sign_out);
    }
    if (quote->parsed()) return cmd_device_quote(g, nonce_text, pcrs, quote_out);
    if (evidence_cmd->parsed()) {
      return cmd_device_evidence(g, ev_nonce, ev_claims, ev_subject,
                                 ev_produced_at, ev_out);
    }
    if (attest->parsed()) {
      return cmd_device_attest(g, attest_connect, attest_claims, attest_subject,
                               attest_out);
    }
    if (issue->parsed()) return cmd_endorse_issue(g, endorser_id, prov_file, endorsement_out);
    if (publish->parsed()) return cmd_endorse_publish(g, publish_file, publish_connect);
    if (verify->get_subcommand("serve")->parsed()) return cmd_verify_serve(g);
    if (appraise_cmd->parsed()) {
      return cmd_verify_appraise(g, evidence_file, appraise_nonce, nonce_issued_at,
                                 appraise_now, appraise_out);
    }
    if (vasp_register->parsed()) return cmd_vasp_register(g, party, reg_key, reg_device);
    if (certify->parsed()) {
      return cmd_vasp_certify(g, cert_account, cert_key, cert_from, cert_to,
                              vasp_name, cert_out);
    }
    if (lookup->parsed()) return cmd_vasp_lookup(g, lookup_key);
    if (reconcile_cmd->parsed()) {
      return cmd_vasp_reconcile(g, rec_evidence, rec_key, rec_start, rec_out);
    }
    if (submit->parsed()) return cmd_ledger_submit(g, tx_file, submit_payload, signer_key_file);
    if (query->parsed()) return cmd_ledger_query(g, query_key);
    if (assess->parsed()) return cmd_risk_assess(g, risk_result, risk_verifier_pub, inputs);
    if (run->parsed()) return cmd_scenario_run(g, scenario_name);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "no subcommand\n";
  return 2;
}
