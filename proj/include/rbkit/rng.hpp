// Copyright 2026 The rbkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBKIT_RNG_HPP
#define RBKIT_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace rbkit {

using Rng = std::mt19937_64;

/// Deterministic seed derivation. Every random stream in the toolkit is
/// derived from one root seed plus a list of tags (study cell, sequence
/// length, replicate index, ...) so that results do not depend on
/// evaluation order or thread count.
class SeedSequence {
 public:
  explicit SeedSequence(std::uint64_t root) : state_(mix(root ^ kInit)) {}

  SeedSequence& with(std::uint64_t tag) {
    state_ = mix(state_ ^ mix(tag + kGamma));
    return *this;
  }

  SeedSequence& with(std::string_view tag) {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : tag) {
      h ^= c;
      h *= kFnvPrime;
    }
    return with(h);
  }

  std::uint64_t value() const { return state_; }

  Rng stream() const { return Rng(state_); }

 private:
  // splitmix64 finalizer; decorrelates nearby tag values.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kInit = 0x243f6a8885a308d3ULL;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

  std::uint64_t state_;
};

/// Shorthand for the common pattern: derive a stream from (root, tags...).
template <typename... Tags>
Rng derived_stream(std::uint64_t root, Tags... tags) {
  SeedSequence s(root);
  (s.with(tags), ...);
  return s.stream();
}

}  // namespace rbkit

#endif  // RBKIT_RNG_HPP
