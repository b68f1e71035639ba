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

#include "mamab/optimizers.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace mamab {
namespace {

template <typename T>
std::vector<FileId> top_s_impl(std::span<const T> values, int s) {
  if (s < 0) throw Error("top_s_selection: negative S");
  const int n = static_cast<int>(values.size());
  const int k = std::min(s, n);
  std::vector<FileId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](FileId a, FileId b) {
                      if (values[a] > values[b]) return true;
                      if (values[b] > values[a]) return false;
                      return a < b;
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

Score ScoreFunction::marginal(const CacheMatrix& cache, SbsId m,
                              std::span<const FileId> row) const {
  CacheMatrix replaced = cache;
  replaced.set_row(m, row);
  return evaluate(replaced);
}

std::vector<FileId> top_s_selection(std::span<const double> values, int s) {
  return top_s_impl(values, s);
}

std::vector<FileId> top_s_selection(std::span<const Score> values, int s) {
  return top_s_impl(values, s);
}

std::vector<FileId> best_response(const ScoreFunction& score,
                                  const CacheMatrix& cache, SbsId m) {
  const int num_files = cache.num_files();
  std::vector<Score> gains(num_files);
  score.file_gains(cache, m, gains);
  std::vector<FileId> candidates;
  candidates.reserve(num_files);
  for (FileId f = 0; f < num_files; ++f) {
    if (score.eligible(f) && !gains[f].negative()) candidates.push_back(f);
  }
  const int k = std::min(cache.cache_size(), static_cast<int>(candidates.size()));
  std::partial_sort(candidates.begin(), candidates.begin() + k,
                    candidates.end(), [&](FileId a, FileId b) {
                      if (gains[a] > gains[b]) return true;
                      if (gains[b] > gains[a]) return false;
                      return a < b;
                    });
  candidates.resize(k);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

CoordinateAscentResult coordinate_ascent(const ScoreFunction& score,
                                         const CacheMatrix& initial,
                                         int max_rounds) {
  if (!initial.within_budget()) {
    throw Error("coordinate_ascent: initial placement violates the budget");
  }
  CoordinateAscentResult result{initial, 0, false};
  CacheMatrix& cache = result.cache;
  while (result.rounds < max_rounds) {
    ++result.rounds;
    bool changed = false;
    for (SbsId m = 0; m < cache.num_sbs(); ++m) {
      std::vector<FileId> row = best_response(score, cache, m);
      if (row != cache.row_files(m)) {
        cache.set_row(m, row);
        changed = true;
      }
    }
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

CacheMatrix random_placement(const ScoreFunction& score, int num_sbs,
                             int num_files, int cache_size, SplitMix64& rng) {
  std::vector<FileId> pool;
  for (FileId f = 0; f < num_files; ++f) {
    if (score.eligible(f)) pool.push_back(f);
  }
  CacheMatrix cache(num_sbs, num_files, cache_size);
  const int k = std::min(cache_size, static_cast<int>(pool.size()));
  for (SbsId m = 0; m < num_sbs; ++m) {
    for (int i : sample_without_replacement(rng, static_cast<int>(pool.size()), k)) {
      cache.set(m, pool[i], true);
    }
  }
  return cache;
}

CacheMatrix random_placement(int num_sbs, int num_files, int cache_size,
                             SplitMix64& rng) {
  CacheMatrix cache(num_sbs, num_files, cache_size);
  const int k = std::min(cache_size, num_files);
  for (SbsId m = 0; m < num_sbs; ++m) {
    for (int f : sample_without_replacement(rng, num_files, k)) {
      cache.set(m, f, true);
    }
  }
  return cache;
}

CacheMatrix oracle_coordinate_ascent(const ScoreFunction& score, int num_sbs,
                                     int num_files, int cache_size,
                                     int restarts, std::uint64_t seed,
                                     int max_rounds) {
  if (restarts < 1) throw Error("oracle: restarts must be >= 1");
  CacheMatrix best;
  Score best_score;
  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng =
        make_stream(seed, Stream::kOracle, {static_cast<std::uint64_t>(r)});
    CacheMatrix start =
        random_placement(score, num_sbs, num_files, cache_size, rng);
    CacheMatrix local = coordinate_ascent(score, start, max_rounds).cache;
    Score value = score.evaluate(local);
    if (r == 0 || value > best_score) {
      best = std::move(local);
      best_score = value;
    }
  }
  return best;
}

CacheMatrix greedy_placement(const ScoreFunction& score, int num_sbs,
                             int num_files, int cache_size) {
  CacheMatrix cache(num_sbs, num_files, cache_size);
  std::vector<std::vector<Score>> gains(num_sbs, std::vector<Score>(num_files));
  while (true) {
    bool found = false;
    SbsId best_m = 0;
    FileId best_f = 0;
    Score best_gain;
    for (SbsId m = 0; m < num_sbs; ++m) {
      if (cache.row_full(m)) continue;
      score.file_gains(cache, m, gains[m]);
      for (FileId f = 0; f < num_files; ++f) {
        if (cache.cached(m, f) || !score.eligible(f)) continue;
        if (!found || gains[m][f] > best_gain) {
          found = true;
          best_m = m;
          best_f = f;
          best_gain = gains[m][f];
        }
      }
    }
    if (!found) break;
    cache.set(best_m, best_f, true);
  }
  return cache;
}

std::uint64_t placement_count(int num_sbs, int num_files, int cache_size) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const int k = std::min(cache_size, num_files);
  // C(F, k) with saturation.
  std::uint64_t per_row = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(num_files - k + i);
    if (per_row > kMax / num) return kMax;
    per_row = per_row * num / static_cast<std::uint64_t>(i);
  }
  std::uint64_t total = 1;
  for (int m = 0; m < num_sbs; ++m) {
    if (per_row != 0 && total > kMax / per_row) return kMax;
    total *= per_row;
  }
  return total;
}

namespace {

// Advances `combo` (ascending indices into [0, n)) to the next combination in
// lexicographic order; returns false after the last one.
bool next_combination(std::vector<int>& combo, int n) {
  const int k = static_cast<int>(combo.size());
  int i = k - 1;
  while (i >= 0 && combo[i] == n - k + i) --i;
  if (i < 0) return false;
  ++combo[i];
  for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  return true;
}

}  // namespace

CacheMatrix brute_force_placement(const ScoreFunction& score, int num_sbs,
                                  int num_files, int cache_size,
                                  std::uint64_t cap) {
  const std::uint64_t count = placement_count(num_sbs, num_files, cache_size);
  if (count > cap) {
    throw Error("brute_force_placement: " + std::to_string(count) +
                " candidates exceed the cap of " + std::to_string(cap));
  }
  const int k = std::min(cache_size, num_files);
  std::vector<std::vector<int>> rows(num_sbs, std::vector<int>(k));
  for (auto& row : rows) std::iota(row.begin(), row.end(), 0);

  CacheMatrix current(num_sbs, num_files, cache_size);
  for (SbsId m = 0; m < num_sbs; ++m) current.set_row(m, rows[m]);
  CacheMatrix best = current;
  Score best_score = score.evaluate(current);

  // Odometer over rows; the last SBS varies fastest so candidates appear in
  // lexicographic order of (row 0, row 1, ...).
  while (true) {
    int m = num_sbs - 1;
    while (m >= 0) {
      if (next_combination(rows[m], num_files)) break;
      std::iota(rows[m].begin(), rows[m].end(), 0);
      current.set_row(m, rows[m]);
      --m;
    }
    if (m < 0) break;
    current.set_row(m, rows[m]);
    Score value = score.evaluate(current);
    if (value > best_score) {
      best = current;
      best_score = value;
    }
  }
  return best;
}

}  // namespace mamab
