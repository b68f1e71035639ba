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

#include "mamab/random.h"

#include <numeric>
#include <utility>

#include "mamab/cache_matrix.h"

namespace mamab {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) {
    SplitMix64 mix(h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    h = mix();
  }
  return h;
}

int uniform_index(SplitMix64& rng, int n) {
  if (n <= 0) throw Error("uniform_index: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = SplitMix64::max() - SplitMix64::max() % range;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<int>(x % range);
}

std::vector<int> sample_without_replacement(SplitMix64& rng, int n, int k) {
  if (k < 0 || k > n) throw Error("sample_without_replacement: k out of range");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    int j = i + uniform_index(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace mamab
