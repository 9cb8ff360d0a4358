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

#include "wattest/canonical.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace wattest {

std::string canonical_dump(const Json& j) {
  return j.dump();
}

Bytes canonical_bytes(const Json& j) {
  return to_bytes(j.dump());
}

Json parse_json(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kDecodeFailed, "malformed JSON");
  }
  return j;
}

Json parse_json(ByteView bytes) {
  return parse_json(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                     bytes.size()));
}

namespace {
const Json& member(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw Error(ErrorCode::kDecodeFailed,
                std::string("missing field: ") + field);
  }
  return j.at(field);
}

[[noreturn]] void wrong_type(const char* field, const char* expected) {
  throw Error(ErrorCode::kDecodeFailed,
              std::string(field) + ": expected " + expected);
}
}  // namespace

const Json& require_member(const Json& j, const char* field) {
  return member(j, field);
}

std::string require_string(const Json& j, const char* field) {
  const Json& v = member(j, field);
  if (!v.is_string()) wrong_type(field, "string");
  return v.get<std::string>();
}

std::int64_t require_int(const Json& j, const char* field) {
  const Json& v = member(j, field);
  if (!v.is_number_integer()) wrong_type(field, "integer");
  return v.get<std::int64_t>();
}

std::uint64_t require_uint(const Json& j, const char* field) {
  const Json& v = member(j, field);
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    wrong_type(field, "unsigned integer");
  }
  return v.get<std::uint64_t>();
}

bool require_bool(const Json& j, const char* field) {
  const Json& v = member(j, field);
  if (!v.is_boolean()) wrong_type(field, "boolean");
  return v.get<bool>();
}

double require_double(const Json& j, const char* field) {
  const Json& v = member(j, field);
  if (!v.is_number()) wrong_type(field, "number");
  return v.get<double>();
}

Bytes require_b64(const Json& j, const char* field) {
  const Json& v = member(j, field);
  if (!v.is_string()) wrong_type(field, "base64url string");
  return b64url_decode(v.get<std::string>());
}

void write_file(const std::filesystem::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot open for write: " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
  }
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open for read: " + path.string());
  }
  Bytes data((std::istreambuf_iterator<char>(in)),
             std::istreambuf_iterator<char>());
  return data;
}

}  // namespace wattest
