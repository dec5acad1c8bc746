// SPDX-License-Identifier: Apache-2.0
//
// ucalos: line-of-sight MIMO link simulator for uniform circular arrays
// Copyright (C) 2026 The ucalos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace ucalos::rng {

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; a bijection on 64-bit words
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key of the substream addressed by a path of indices below a root seed, e.g.
// {snr_index, block_index, stream_id}. Distinct paths give unrelated keys.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t k = mix64(seed + golden_gamma);
  std::uint64_t depth = 1;
  for (std::uint64_t p : path)
    k = mix64(k ^ mix64(p + depth++ * golden_gamma));
  return k;
}

// Counter-based generator: the i-th output is a keyed hash of i, so any
// position of any substream can be reached without generating its prefix.
// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept : key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ ^ mix64(golden_gamma * ++counter_)); }

  constexpr void discard(std::uint64_t n) noexcept { counter_ += n; }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

} // namespace ucalos::rng
