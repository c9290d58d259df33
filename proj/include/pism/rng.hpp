// Copyright 2026 The pism Authors
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

#ifndef PISM_RNG_HPP
#define PISM_RNG_HPP

#include <cstdint>

namespace pism {

// Counter-based uniform stream. Draw i of stream (seed, a, b) depends only
// on its indices, so serial and work-partitioned sampling produce identical
// values for any worker count.

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t keyed_mix(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b) {
  std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x9e3779b97f4a7c15ULL));
  return h;
}

// Uniform double in [0, 1) keyed by (seed, sample index, block index).
inline double uniform01(std::uint64_t seed, std::uint64_t sample_index,
                        std::uint64_t block_index) {
  return static_cast<double>(keyed_mix(seed, sample_index, block_index) >> 11) *
         0x1.0p-53;
}

// Derives an independent seed for a named sub-purpose of a root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t purpose) {
  return keyed_mix(root, purpose, 0x517cc1b727220a95ULL);
}

}  // namespace pism

#endif  // PISM_RNG_HPP
