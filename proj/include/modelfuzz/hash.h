// Copyright 2026 The ModelFuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MODELFUZZ_HASH_H_
#define MODELFUZZ_HASH_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modelfuzz {

// 128-bit keyed digest (SipHash-2-4 with 128-bit output, fixed key).
struct Digest128 {
  uint64_t hi = 0;
  uint64_t lo = 0;

  friend bool operator==(const Digest128&, const Digest128&) = default;
  friend auto operator<=>(const Digest128&, const Digest128&) = default;

  std::string Hex() const;
};

Digest128 KeyedDigest(std::span<const uint8_t> bytes);

// Little-endian canonical byte sink used for everything that gets hashed.
class ByteWriter {
 public:
  void U8(uint8_t v) { bytes_.push_back(v); }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void I64(int64_t v) { U64(static_cast<uint64_t>(v)); }
  void Str(std::string_view s) {
    U64(s.size());
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void Clear() { bytes_.clear(); }

  std::span<const uint8_t> bytes() const { return bytes_; }
  Digest128 Digest() const { return KeyedDigest(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

// Stable 64-bit mixing of several values; used for seed derivation.
uint64_t DeriveSeed(uint64_t master, std::string_view label, uint64_t index);

}  // namespace modelfuzz

template <>
struct std::hash<modelfuzz::Digest128> {
  size_t operator()(const modelfuzz::Digest128& d) const noexcept {
    return static_cast<size_t>(d.lo ^ (d.hi * 0x9e3779b97f4a7c15ULL));
  }
};

#endif  // MODELFUZZ_HASH_H_
