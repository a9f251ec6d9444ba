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

#include "modelfuzz/hash.h"

#include <sodium.h>

#include <array>
#include <cstdio>

namespace modelfuzz {
namespace {

constexpr std::array<uint8_t, crypto_shorthash_siphashx24_KEYBYTES> kKey = {
    0x6d, 0x6f, 0x64, 0x65, 0x6c, 0x66, 0x75, 0x7a,
    0x7a, 0x2d, 0x66, 0x70, 0x2d, 0x6b, 0x65, 0x79};

uint64_t LoadLe(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::string Digest128::Hex() const {
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

Digest128 KeyedDigest(std::span<const uint8_t> bytes) {
  unsigned char out[crypto_shorthash_siphashx24_BYTES];
  crypto_shorthash_siphashx24(out, bytes.data(), bytes.size(), kKey.data());
  return Digest128{LoadLe(out), LoadLe(out + 8)};
}

uint64_t DeriveSeed(uint64_t master, std::string_view label, uint64_t index) {
  ByteWriter w;
  w.U64(master);
  w.Str(label);
  w.U64(index);
  return w.Digest().lo;
}

}  // namespace modelfuzz
