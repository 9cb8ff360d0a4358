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

#include "wattest/vasp.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace wattest::vasp {

void to_json(Json& j, const TravelRuleParty& p) {
  j = Json{{"account", p.account},
           {"address", p.address},
           {"institution_address", p.institution_address},
           {"institution_id", p.institution_id},
           {"institution_name", p.institution_name},
           {"name", p.name}};
}

void from_json(const Json& j, TravelRuleParty& p) {
  p.account = require_string(j, "account");
  p.address = require_string(j, "address");
  p.institution_address = require_string(j, "institution_address");
  p.institution_id = require_string(j, "institution_id");
  p.institution_name = require_string(j, "institution_name");
  p.name = require_string(j, "name");
}

void to_json(Json& j, const Institution& i) {
  j = Json{{"address", i.address},
           {"name", i.name},
           {"numerical_id", i.numerical_id}};
}

void from_json(const Json& j, Institution& i) {
  i.address = require_string(j, "address");
  i.name = require_string(j, "name");
  i.numerical_id = require_string(j, "numerical_id");
}

void to_json(Json& j, const TravelRuleRecord& r) {
  j = Json{{"amount", r.amount},
           {"beneficiary_account", r.beneficiary_account},
           {"beneficiary_address", r.beneficiary_address},
           {"beneficiary_institution", r.beneficiary_institution},
           {"beneficiary_name", r.beneficiary_name},
           {"execution_date", r.execution_date},
           {"originator_account", r.originator_account},
           {"originator_address", r.originator_address},
           {"originator_institution", r.originator_institution},
           {"originator_name", r.originator_name}};
}

void from_json(const Json& j, TravelRuleRecord& r) {
  r.amount = require_string(j, "amount");
  r.beneficiary_account = require_string(j, "beneficiary_account");
  r.beneficiary_address = require_string(j, "beneficiary_address");
  r.beneficiary_institution = require_string(j, "beneficiary_institution");
  r.beneficiary_name = require_string(j, "beneficiary_name");
  r.execution_date = require_int(j, "execution_date");
  r.originator_account = require_string(j, "originator_account");
  r.originator_address = require_string(j, "originator_address");
  r.originator_institution =
      require_member(j, "originator_institution").get<Institution>();
  r.originator_name = require_string(j, "originator_name");
}

bool parse_amount(const std::string& amount, std::string* reason) {
  auto fail = [&](const char* why) {
    if (reason != nullptr) *reason = why;
    return false;
  };
  if (amount.empty()) return fail("empty");
  std::size_t space = amount.find(' ');
  std::string value = amount.substr(0, space);
  std::string asset =
      space == std::string::npos ? std::string() : amount.substr(space + 1);

  bool negative = false;
  std::size_t i = 0;
  if (i < value.size() && (value[i] == '-' || value[i] == '+')) {
    negative = value[i] == '-';
    ++i;
  }
  bool any_digit = false;
  bool nonzero = false;
  bool seen_dot = false;
  for (; i < value.size(); ++i) {
    char c = value[i];
    if (c == '.') {
      if (seen_dot) return fail("malformed decimal");
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return fail("malformed decimal");
    }
    any_digit = true;
    if (c != '0') nonzero = true;
  }
  if (!any_digit) return fail("malformed decimal");
  if (negative || !nonzero) return fail("not positive");
  if (asset.empty()) return fail("missing asset code");
  return true;
}

namespace {
void check(std::vector<std::string>& out, const std::string& field,
           const std::string& value) {
  if (value.empty()) out.push_back(field + ": empty");
}
}  // namespace

std::vector<std::string> validate_party(const TravelRuleParty& p) {
  std::vector<std::string> out;
  check(out, "name", p.name);
  check(out, "account", p.account);
  check(out, "address", p.address);
  check(out, "institution_name", p.institution_name);
  check(out, "institution_address", p.institution_address);
  check(out, "institution_id", p.institution_id);
  return out;
}

std::vector<std::string> validate_record(const TravelRuleRecord& r) {
  std::vector<std::string> out;
  check(out, "originator_name", r.originator_name);
  check(out, "originator_account", r.originator_account);
  check(out, "originator_address", r.originator_address);

  std::string reason;
  if (!parse_amount(r.amount, &reason)) {
    out.push_back("amount: " + reason);
  }
  if (r.execution_date <= 0) {
    out.push_back("execution_date: empty");
  }
  check(out, "beneficiary_institution", r.beneficiary_institution);
  check(out, "beneficiary_name", r.beneficiary_name);
  check(out, "beneficiary_address", r.beneficiary_address);
  check(out, "beneficiary_account", r.beneficiary_account);

  const Institution& inst = r.originator_institution;
  if (inst.name.empty() && inst.address.empty() && inst.numerical_id.empty()) {
    out.push_back("originator_institution: empty");
  } else if (inst.name.empty() || inst.address.empty() ||
             inst.numerical_id.empty()) {
    out.push_back("originator_institution: incomplete");
  }
  return out;
}

// --- AccountStore ---

void to_json(Json& j, const RegisteredKey& k) {
  j = Json{{"device_id", b64url_encode(view(k.device_id))},
           {"public_key", b64url_encode(view(k.public_key))},
           {"registered_at", k.registered_at}};
}

void from_json(const Json& j, RegisteredKey& k) {
  k.device_id = require_b64_fixed<16>(j, "device_id");
  k.public_key = require_b64_fixed<kPublicKeySize>(j, "public_key");
  k.registered_at = require_int(j, "registered_at");
}

void to_json(Json& j, const CustomerAccount& a) {
  j = Json{{"account_id", a.account_id},
           {"customer", a.customer},
           {"registered_keys", a.registered_keys},
           {"status", a.status == AccountStatus::kActive ? "active" : "suspended"}};
}

void from_json(const Json& j, CustomerAccount& a) {
  a.account_id = require_string(j, "account_id");
  a.customer = require_member(j, "customer").get<TravelRuleParty>();
  a.registered_keys =
      require_member(j, "registered_keys").get<std::vector<RegisteredKey>>();
  std::string status = require_string(j, "status");
  if (status == "active") {
    a.status = AccountStatus::kActive;
  } else if (status == "suspended") {
    a.status = AccountStatus::kSuspended;
  } else {
    throw Error(ErrorCode::kDecodeFailed, "unknown account status: " + status);
  }
}

CustomerAccount& AccountStore::register_account(const TravelRuleParty& customer,
                                                const PublicKey& key,
                                                const DeviceId& device_id,
                                                std::int64_t now) {
  std::vector<std::string> violations = validate_party(customer);
  if (!violations.empty()) {
    std::string joined = std::accumulate(
        std::next(violations.begin()), violations.end(), violations.front(),
        [](std::string acc, const std::string& v) { return acc + "; " + v; });
    throw Error(ErrorCode::kValidationFailed, joined);
  }
  std::string key_id = b64url_encode(view(key));
  if (by_key_.contains(key_id)) {
    throw Error(ErrorCode::kDuplicateKey,
                "public key already bound to an account");
  }
  CustomerAccount account;
  char buf[16];
  std::snprintf(buf, sizeof buf, "acct-%06llu",
                static_cast<unsigned long long>(next_id_++));
  account.account_id = buf;
  account.customer = customer;
  account.registered_keys.push_back(
      RegisteredKey{.public_key = key, .device_id = device_id, .registered_at = now});
  accounts_.push_back(std::move(account));
  by_key_.emplace(std::move(key_id), accounts_.size() - 1);
  return accounts_.back();
}

void AccountStore::add_key(const std::string& account_id, const PublicKey& key,
                           const DeviceId& device_id, std::int64_t now) {
  std::string key_id = b64url_encode(view(key));
  if (by_key_.contains(key_id)) {
    throw Error(ErrorCode::kDuplicateKey,
                "public key already bound to an account");
  }
  for (std::size_t i = 0; i < accounts_.size(); ++i) {
    if (accounts_[i].account_id == account_id) {
      accounts_[i].registered_keys.push_back(RegisteredKey{
          .public_key = key, .device_id = device_id, .registered_at = now});
      by_key_.emplace(std::move(key_id), i);
      return;
    }
  }
  throw Error(ErrorCode::kNotFound, "account " + account_id);
}

void AccountStore::suspend(const std::string& account_id) {
  for (CustomerAccount& a : accounts_) {
    if (a.account_id == account_id) {
      a.status = AccountStatus::kSuspended;
      return;
    }
  }
  throw Error(ErrorCode::kNotFound, "account " + account_id);
}

const CustomerAccount* AccountStore::find_account(
    const std::string& account_id) const {
  for (const CustomerAccount& a : accounts_) {
    if (a.account_id == account_id) return &a;
  }
  return nullptr;
}

const CustomerAccount* AccountStore::account_for_key(const PublicKey& key) const {
  auto it = by_key_.find(b64url_encode(view(key)));
  if (it == by_key_.end()) return nullptr;
  return &accounts_[it->second];
}

bool AccountStore::key_registered(const PublicKey& key) const {
  return by_key_.contains(b64url_encode(view(key)));
}

std::optional<TravelRuleParty> AccountStore::beneficiary_lookup(
    const PublicKey& key) const {
  const CustomerAccount* account = account_for_key(key);
  if (account == nullptr || account->status != AccountStatus::kActive) {
    return std::nullopt;
  }
  return account->customer;
}

AccountStore AccountStore::load(const std::filesystem::path& path) {
  AccountStore store;
  if (!std::filesystem::exists(path)) return store;
  store.accounts_ =
      canonical_decode<std::vector<CustomerAccount>>(read_file(path));
  for (std::size_t i = 0; i < store.accounts_.size(); ++i) {
    for (const RegisteredKey& k : store.accounts_[i].registered_keys) {
      store.by_key_.emplace(b64url_encode(view(k.public_key)), i);
    }
    // account ids are acct-<n>; keep the counter ahead of the largest
    const std::string& id = store.accounts_[i].account_id;
    if (id.starts_with("acct-")) {
      std::uint64_t n = std::strtoull(id.c_str() + 5, nullptr, 10);
      store.next_id_ = std::max(store.next_id_, n + 1);
    }
  }
  return store;
}

void AccountStore::save(const std::filesystem::path& path) const {
  save_canonical(path, accounts_);
}

// --- VaspCa ---

VaspCa::VaspCa(KeyPair root_key, std::string vasp_name,
               std::int64_t root_not_before, std::int64_t root_not_after)
    : root_key_(std::move(root_key)), name_(std::move(vasp_name)) {
  root_cert_ = model::make_certificate(root_key_, name_, root_key_.public_key,
                                       name_, root_not_before, root_not_after);
}

std::vector<model::SimpleCertificate> VaspCa::issue_key_certificate(
    const CustomerAccount& account, const PublicKey& key,
    std::int64_t not_before, std::int64_t not_after) const {
  bool registered = std::any_of(
      account.registered_keys.begin(), account.registered_keys.end(),
      [&key](const RegisteredKey& k) { return k.public_key == key; });
  if (!registered) {
    throw Error(ErrorCode::kUnregisteredKey,
                "key not registered to " + account.account_id);
  }
  if (not_before > not_after || not_before < root_cert_.not_before ||
      not_after > root_cert_.not_after) {
    throw Error(ErrorCode::kInvalidValidity,
                "requested window does not nest in the root window");
  }
  model::SimpleCertificate leaf = model::make_certificate(
      root_key_, name_, key, account.account_id, not_before, not_after);
  return {leaf, root_cert_};
}

// --- Reconciliation ---

void to_json(Json& j, const SeqRange& r) {
  j = Json{{"seq_end", r.seq_end}, {"seq_start", r.seq_start}};
}

void from_json(const Json& j, SeqRange& r) {
  r.seq_end = require_uint(j, "seq_end");
  r.seq_start = require_uint(j, "seq_start");
}

void to_json(Json& j, const OrderMismatch& m) {
  j = Json{{"seq_a", m.seq_a}, {"seq_b", m.seq_b}};
}

void from_json(const Json& j, OrderMismatch& m) {
  m.seq_a = require_uint(j, "seq_a");
  m.seq_b = require_uint(j, "seq_b");
}

void to_json(Json& j, const ReconciliationReport& r) {
  Json matched = Json::array();
  for (const auto& [seq, pos] : r.matched) {
    matched.push_back(Json{{"ledger_position", pos}, {"seq", seq}});
  }
  j = Json{{"chain_ok", r.chain_ok},
           {"checked_range", r.checked_range},
           {"device_id", b64url_encode(view(r.device_id))},
           {"matched", std::move(matched)},
           {"missing_on_ledger", r.missing_on_ledger},
           {"order_mismatches", r.order_mismatches},
           {"unknown_on_ledger", r.unknown_on_ledger}};
}

void from_json(const Json& j, ReconciliationReport& r) {
  r.chain_ok = require_bool(j, "chain_ok");
  r.checked_range = require_member(j, "checked_range").get<SeqRange>();
  r.device_id = require_b64_fixed<16>(j, "device_id");
  r.matched.clear();
  for (const Json& m : require_member(j, "matched")) {
    r.matched.emplace_back(require_uint(m, "seq"),
                           require_uint(m, "ledger_position"));
  }
  r.missing_on_ledger =
      require_member(j, "missing_on_ledger").get<std::vector<std::uint64_t>>();
  r.order_mismatches =
      require_member(j, "order_mismatches").get<std::vector<OrderMismatch>>();
  r.unknown_on_ledger =
      require_member(j, "unknown_on_ledger").get<std::vector<std::size_t>>();
}

ReconciliationReport reconcile(const DeviceId& device_id,
                               const std::vector<model::UsageLogEntry>& usage_log,
                               const Digest32& quoted_pcr16,
                               const ledger::ConfirmedLedger& ledger,
                               const PublicKey& public_key,
                               const Digest32& start_register) {
  for (std::size_t i = 1; i < usage_log.size(); ++i) {
    if (usage_log[i].seq != usage_log[i - 1].seq + 1) {
      throw Error(ErrorCode::kGappedLog,
                  "seq " + std::to_string(usage_log[i - 1].seq) + " -> " +
                      std::to_string(usage_log[i].seq));
    }
  }

  ReconciliationReport report;
  report.device_id = device_id;
  if (!usage_log.empty()) {
    report.checked_range = {usage_log.front().seq, usage_log.back().seq + 1};
  }

  std::vector<Digest32> digests;
  digests.reserve(usage_log.size());
  for (const model::UsageLogEntry& e : usage_log) digests.push_back(e.tx_digest);
  report.chain_ok =
      hw::replay_extend_chain(start_register, digests) == quoted_pcr16;

  // Confirmed positions for this key, consumed in signing order so each
  // ledger entry matches at most one log entry.
  auto confirmed = ledger.query_by_key(public_key);
  std::vector<bool> consumed(confirmed.size(), false);
  for (const model::UsageLogEntry& e : usage_log) {
    bool found = false;
    for (std::size_t i = 0; i < confirmed.size(); ++i) {
      if (!consumed[i] && confirmed[i].second == e.tx_digest) {
        consumed[i] = true;
        report.matched.emplace_back(e.seq, confirmed[i].first);
        found = true;
        break;
      }
    }
    if (!found) report.missing_on_ledger.push_back(e.seq);
  }
  for (std::size_t i = 0; i < confirmed.size(); ++i) {
    if (!consumed[i]) report.unknown_on_ledger.push_back(confirmed[i].first);
  }

  // Every inverted pair among matched entries: signed a before b but
  // confirmed in the opposite order.
  for (std::size_t i = 0; i < report.matched.size(); ++i) {
    for (std::size_t k = i + 1; k < report.matched.size(); ++k) {
      const auto& [seq_a, pos_a] = report.matched[i];
      const auto& [seq_b, pos_b] = report.matched[k];
      if (seq_a < seq_b && pos_a > pos_b) {
        report.order_mismatches.push_back(OrderMismatch{seq_a, seq_b});
      } else if (seq_b < seq_a && pos_b > pos_a) {
        report.order_mismatches.push_back(OrderMismatch{seq_b, seq_a});
      }
    }
  }
  return report;
}

std::string format_report(const ReconciliationReport& r) {
  std::ostringstream out;
  out << "device:       " << b64url_encode(view(r.device_id)) << '\n'
      << "range:        [" << r.checked_range.seq_start << ", "
      << r.checked_range.seq_end << ")\n"
      << "chain:        " << (r.chain_ok ? "ok" : "BROKEN") << '\n'
      << "matched:      " << r.matched.size() << '\n';
  for (const auto& [seq, pos] : r.matched) {
    out << "  seq " << seq << " -> ledger position " << pos << '\n';
  }
  out << "missing:      " << r.missing_on_ledger.size() << '\n';
  for (std::uint64_t seq : r.missing_on_ledger) {
    out << "  seq " << seq << " not confirmed\n";
  }
  out << "unknown:      " << r.unknown_on_ledger.size() << '\n';
  for (std::size_t pos : r.unknown_on_ledger) {
    out << "  ledger position " << pos << " not in log\n";
  }
  out << "inversions:   " << r.order_mismatches.size() << '\n';
  for (const OrderMismatch& m : r.order_mismatches) {
    out << "  signed " << m.seq_a << " before " << m.seq_b
        << ", confirmed after\n";
  }
  return out.str();
}

}  // namespace wattest::vasp
