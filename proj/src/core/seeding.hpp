// Copyright 2026 The HazardBench Authors
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

// Platform-stable seed derivation. std::hash is not stable across standard
// libraries, so item and trial seeds are built from FNV-1a and splitmix64.

#ifndef HAZARDBENCH_CORE_SEEDING_HPP_
#define HAZARDBENCH_CORE_SEEDING_HPP_

#include <cstdint>
#include <string_view>

namespace hb {

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// item seed = hash(run seed, item key)
constexpr std::uint64_t derive_item_seed(std::uint64_t run_seed,
                                         std::string_view item_key) {
  return mix_seed(run_seed, fnv1a64(item_key));
}

// trial seed = hash(item seed, step index, trial index)
constexpr std::uint64_t derive_trial_seed(std::uint64_t item_seed,
                                          std::uint64_t step_index,
                                          std::uint64_t trial_index) {
  return mix_seed(mix_seed(item_seed, step_index), trial_index);
}

// Uniform double in [0, 1) from a seed.
constexpr double unit_interval(std::uint64_t seed) {
  return static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53;
}

}  // namespace hb

#endif  // HAZARDBENCH_CORE_SEEDING_HPP_
