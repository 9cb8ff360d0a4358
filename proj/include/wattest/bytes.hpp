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

#ifndef WATTEST_BYTES_HPP_
#define WATTEST_BYTES_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wattest {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

using Digest32 = std::array<std::uint8_t, 32>;
using Nonce32 = std::array<std::uint8_t, 32>;
using DeviceId = std::array<std::uint8_t, 16>;
using CorrelationId = std::array<std::uint8_t, 16>;

/// Opaque 8-byte key handle, usable as a map key.
struct KeyHandle {
  std::array<std::uint8_t, 8> id{};

  auto operator<=>(const KeyHandle&) const = default;
};

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_string(ByteView b) {
  return std::string(b.begin(), b.end());
}

template <std::size_t N>
ByteView view(const std::array<std::uint8_t, N>& a) {
  return ByteView(a.data(), a.size());
}

Bytes concat(ByteView a, ByteView b);

std::string hex_encode(ByteView data);
Bytes hex_decode(std::string_view hex);  // throws Error(MalformedKey) on bad input

// Unpadded base64url, the canonical-encoding representation of binary fields.
std::string b64url_encode(ByteView data);
Bytes b64url_decode(std::string_view text);  // throws Error(DecodeFailed) on bad input

/// Copies a view into a fixed-size array; throws Error(DecodeFailed) on length mismatch.
template <std::size_t N>
std::array<std::uint8_t, N> fixed(ByteView data);

extern template std::array<std::uint8_t, 8> fixed<8>(ByteView);
extern template std::array<std::uint8_t, 16> fixed<16>(ByteView);
extern template std::array<std::uint8_t, 32> fixed<32>(ByteView);
extern template std::array<std::uint8_t, 64> fixed<64>(ByteView);

}  // namespace wattest

#endif  // WATTEST_BYTES_HPP_
