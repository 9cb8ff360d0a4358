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

#include "wattest/bytes.hpp"

#include <sodium.h>

#include "wattest/errors.hpp"

namespace wattest {

Bytes concat(ByteView a, ByteView b) {
  Bytes out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string hex_encode(ByteView data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.resize(data.size() * 2);
  return out;
}

Bytes hex_decode(std::string_view hex) {
  Bytes out(hex.size() / 2 + 1);
  std::size_t written = 0;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr,
                     &written, nullptr) != 0) {
    throw Error(ErrorCode::kMalformedKey, "invalid hex input");
  }
  out.resize(written);
  return out;
}

std::string b64url_encode(ByteView data) {
  const int variant = sodium_base64_VARIANT_URLSAFE_NO_PADDING;
  std::string out(sodium_base64_encoded_len(data.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
  out.resize(out.find('\0'));
  return out;
}

Bytes b64url_decode(std::string_view text) {
  const int variant = sodium_base64_VARIANT_URLSAFE_NO_PADDING;
  Bytes out(text.size());  // decoded size never exceeds encoded size
  std::size_t written = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &written, nullptr, variant) != 0) {
    throw Error(ErrorCode::kDecodeFailed, "invalid base64url input");
  }
  out.resize(written);
  return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed(ByteView data) {
  if (data.size() != N) {
    throw Error(ErrorCode::kDecodeFailed,
                "expected " + std::to_string(N) + " bytes, got " +
                    std::to_string(data.size()));
  }
  std::array<std::uint8_t, N> out{};
  std::copy(data.begin(), data.end(), out.begin());
  return out;
}

template std::array<std::uint8_t, 8> fixed<8>(ByteView);
template std::array<std::uint8_t, 16> fixed<16>(ByteView);
template std::array<std::uint8_t, 32> fixed<32>(ByteView);
template std::array<std::uint8_t, 64> fixed<64>(ByteView);

}  // namespace wattest
