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

#ifndef WATTEST_VASP_HPP_
#define WATTEST_VASP_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wattest/device.hpp"
#include "wattest/ledger.hpp"
#include "wattest/model.hpp"

// VASP managed-compliance services: account registration with Travel Rule
// validation, key certificates chained to the VASP root, beneficiary
// lookup, and reconciliation of wallet usage logs against the ledger.
namespace wattest::vasp {

/// Customer-side Travel Rule fields, kept per account and returned by
/// beneficiary lookups.
struct TravelRuleParty {
  std::string name;
  std::string account;
  std::string address;
  std::string institution_name;
  std::string institution_address;
  std::string institution_id;

  friend bool operator==(const TravelRuleParty&, const TravelRuleParty&) = default;
};

void to_json(Json& j, const TravelRuleParty& p);
void from_json(const Json& j, TravelRuleParty& p);

struct Institution {
  std::string name;
  std::string address;
  std::string numerical_id;

  friend bool operator==(const Institution&, const Institution&) = default;
};

void to_json(Json& j, const Institution& i);
void from_json(const Json& j, Institution& i);

/// The seven FATF originator/beneficiary items, carried as ten record
/// fields. amount is "<positive decimal> <asset code>".
struct TravelRuleRecord {
  std::string originator_name;
  std::string originator_account;
  std::string originator_address;
  std::string amount;
  std::int64_t execution_date = 0;  // epoch seconds; <= 0 counts as missing
  std::string beneficiary_institution;
  std::string beneficiary_name;
  std::string beneficiary_address;
  std::string beneficiary_account;
  Institution originator_institution;
};

void to_json(Json& j, const TravelRuleRecord& r);
void from_json(const Json& j, TravelRuleRecord& r);

/// Field-by-field validation; each violation names the field and reason.
/// Violations are data, not errors.
std::vector<std::string> validate_record(const TravelRuleRecord& r);
std::vector<std::string> validate_party(const TravelRuleParty& p);

/// True iff the text parses as "<decimal> <asset>" with a positive value.
bool parse_amount(const std::string& amount, std::string* reason = nullptr);

enum class AccountStatus { kActive, kSuspended };

struct RegisteredKey {
  PublicKey public_key{};
  DeviceId device_id{};
  std::int64_t registered_at = 0;
};

void to_json(Json& j, const RegisteredKey& k);
void from_json(const Json& j, RegisteredKey& k);

struct CustomerAccount {
  std::string account_id;
  TravelRuleParty customer;
  std::vector<RegisteredKey> registered_keys;
  AccountStatus status = AccountStatus::kActive;
};

void to_json(Json& j, const CustomerAccount& a);
void from_json(const Json& j, CustomerAccount& a);

/// Account book: each public key binds to at most one account, ever.
/// Concurrent reads are safe; writes are serialized by the caller.
class AccountStore {
 public:
  /// kValidationFailed (with the violation list in the message) or
  /// kDuplicateKey if the key is already bound to another account.
  CustomerAccount& register_account(const TravelRuleParty& customer,
                                    const PublicKey& key,
                                    const DeviceId& device_id,
                                    std::int64_t now);

  /// Adds a key to an existing account; kDuplicateKey / kNotFound.
  void add_key(const std::string& account_id, const PublicKey& key,
               const DeviceId& device_id, std::int64_t now);

  void suspend(const std::string& account_id);  // kNotFound

  /// Validated party data for the key's account, or nullopt for unknown
  /// keys and suspended accounts (suspended parties are not confirmable
  /// legitimate entities).
  std::optional<TravelRuleParty> beneficiary_lookup(const PublicKey& key) const;

  const CustomerAccount* find_account(const std::string& account_id) const;
  const CustomerAccount* account_for_key(const PublicKey& key) const;
  bool key_registered(const PublicKey& key) const;
  std::size_t size() const { return accounts_.size(); }

  // accounts.json: canonical-encoded list of accounts.
  static AccountStore load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<CustomerAccount> accounts_;
  std::map<std::string, std::size_t> by_key_;  // b64url key -> account index
  std::uint64_t next_id_ = 1;
};

/// Certificate authority role of the VASP: issues [leaf, root] chains for
/// registered transaction-signing keys.
class VaspCa {
 public:
  VaspCa(KeyPair root_key, std::string vasp_name, std::int64_t root_not_before,
         std::int64_t root_not_after);

  /// kUnregisteredKey if the key is not on the account; kInvalidValidity
  /// if the requested window does not nest inside the root window.
  std::vector<model::SimpleCertificate> issue_key_certificate(
      const CustomerAccount& account, const PublicKey& key,
      std::int64_t not_before, std::int64_t not_after) const;

  const model::SimpleCertificate& root_certificate() const { return root_cert_; }
  const PublicKey& root_public() const { return root_key_.public_key; }
  const std::string& name() const { return name_; }

 private:
  KeyPair root_key_;
  std::string name_;
  model::SimpleCertificate root_cert_;
};

struct SeqRange {
  std::uint64_t seq_start = 0;
  std::uint64_t seq_end = 0;  // exclusive
};

void to_json(Json& j, const SeqRange& r);
void from_json(const Json& j, SeqRange& r);

struct OrderMismatch {
  std::uint64_t seq_a = 0;  // signed earlier
  std::uint64_t seq_b = 0;  // signed later, confirmed earlier

  friend bool operator==(const OrderMismatch&, const OrderMismatch&) = default;
};

void to_json(Json& j, const OrderMismatch& m);
void from_json(const Json& j, OrderMismatch& m);

struct ReconciliationReport {
  DeviceId device_id{};
  SeqRange checked_range;
  bool chain_ok = false;
  std::vector<std::pair<std::uint64_t, std::size_t>> matched;  // (seq, position)
  std::vector<std::uint64_t> missing_on_ledger;
  std::vector<std::size_t> unknown_on_ledger;
  std::vector<OrderMismatch> order_mismatches;
};

void to_json(Json& j, const ReconciliationReport& r);
void from_json(const Json& j, ReconciliationReport& r);

/// Compares the signed order in a wallet usage log with the confirmed
/// order on the ledger for one key. chain_ok replays the hash-extend chain
/// over the log's digests (from start_register, all-zero for a log that
/// begins at provisioning) against the quoted usage PCR. kGappedLog on
/// non-consecutive seq values.
ReconciliationReport reconcile(const DeviceId& device_id,
                               const std::vector<model::UsageLogEntry>& usage_log,
                               const Digest32& quoted_pcr16,
                               const ledger::ConfirmedLedger& ledger,
                               const PublicKey& public_key,
                               const Digest32& start_register = Digest32{});

/// Human-readable table of a reconciliation report for the CLI.
std::string format_report(const ReconciliationReport& r);

}  // namespace wattest::vasp

#endif  // WATTEST_VASP_HPP_
