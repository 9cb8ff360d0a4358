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

#ifndef WATTEST_CANONICAL_HPP_
#define WATTEST_CANONICAL_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "wattest/bytes.hpp"
#include "wattest/errors.hpp"

namespace wattest {

// Canonical encoding: JSON with object keys sorted ascending by code point,
// no insignificant whitespace, integers in plain decimal, binary fields as
// unpadded base64url strings. nlohmann::json with its default map-backed
// object type already sorts keys and dumps compactly, so canonicalization
// reduces to dump() plus the base64url convention at the field level.
using Json = nlohmann::json;

std::string canonical_dump(const Json& j);
Bytes canonical_bytes(const Json& j);

/// Parses a canonical-encoded document; throws Error(kDecodeFailed) on
/// malformed input.
Json parse_json(std::string_view text);
Json parse_json(ByteView bytes);

template <typename T>
Bytes canonical_encode(const T& value) {
  return canonical_bytes(Json(value));
}

template <typename T>
T canonical_decode(ByteView bytes) {
  return parse_json(bytes).template get<T>();
}

// Field helpers for to_json/from_json implementations. The getters throw
// Error(kDecodeFailed) naming the missing or ill-typed field.
std::string require_string(const Json& j, const char* field);
std::int64_t require_int(const Json& j, const char* field);
std::uint64_t require_uint(const Json& j, const char* field);
bool require_bool(const Json& j, const char* field);
double require_double(const Json& j, const char* field);
const Json& require_member(const Json& j, const char* field);
Bytes require_b64(const Json& j, const char* field);

template <std::size_t N>
std::array<std::uint8_t, N> require_b64_fixed(const Json& j, const char* field) {
  Bytes raw = require_b64(j, field);
  if (raw.size() != N) {
    throw Error(ErrorCode::kDecodeFailed,
                std::string(field) + ": expected " + std::to_string(N) +
                    " bytes, got " + std::to_string(raw.size()));
  }
  std::array<std::uint8_t, N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

// Single-value artifact files (.evd, .end, .res, .cert, ...): exactly one
// canonical-encoded value per file, no trailing newline.
void write_file(const std::filesystem::path& path, ByteView bytes);
Bytes read_file(const std::filesystem::path& path);

template <typename T>
void save_canonical(const std::filesystem::path& path, const T& value) {
  write_file(path, canonical_encode(value));
}

template <typename T>
T load_canonical(const std::filesystem::path& path) {
  return canonical_decode<T>(read_file(path));
}

}  // namespace wattest

#endif  // WATTEST_CANONICAL_HPP_
