// Copyright 2026 The Authors.
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

// Counter-based random streams. Every stochastic component draws from a
// generator keyed by (seed, stream, indices...), so results never depend on
// evaluation order or thread scheduling. Sampling helpers are written out
// explicitly instead of using <random> distributions, whose output is
// implementation-defined.

#ifndef MAMAB_RANDOM_H_
#define MAMAB_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace mamab {

// Stream identifiers used to derive independent seeds.
enum class Stream : std::uint64_t {
  kTopology = 1,
  kPreferences = 2,
  kRequests = 3,
  kPolicy = 4,
  kMobility = 5,
  kOracle = 6,
};

// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Hashes an ordered list of words into one seed.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

inline SplitMix64 make_stream(std::uint64_t seed, Stream stream,
                              std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = derive_seed({seed, static_cast<std::uint64_t>(stream)});
  for (std::uint64_t i : indices) h = derive_seed({h, i});
  return SplitMix64(h);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
int uniform_index(SplitMix64& rng, int n);

// k distinct values from [0, n) in draw order (partial Fisher-Yates).
std::vector<int> sample_without_replacement(SplitMix64& rng, int n, int k);

}  // namespace mamab

#endif  // MAMAB_RANDOM_H_
