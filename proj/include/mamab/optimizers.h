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

// Placement optimizers over objectives that are additive across files once
// the other SBSs' rows are fixed. Under that structure the exact best
// response of one SBS is the top-S files by per-file marginal gain, which is
// what coordinate ascent iterates.

#ifndef MAMAB_OPTIMIZERS_H_
#define MAMAB_OPTIMIZERS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mamab/cache_matrix.h"
#include "mamab/random.h"

namespace mamab {

class ScoreFunction {
 public:
  virtual ~ScoreFunction() = default;

  virtual Score evaluate(const CacheMatrix& cache) const = 0;

  // out[f] = score(row m with f cached) - score(row m without f), every
  // other entry of `cache` held fixed. out.size() == num_files.
  virtual void file_gains(const CacheMatrix& cache, SbsId m,
                          std::span<Score> out) const = 0;

  // Files that may be placed; ineligible files are never selected.
  virtual bool eligible(FileId) const { return true; }

  // Score with SBS m's row replaced by `row`, other rows fixed.
  Score marginal(const CacheMatrix& cache, SbsId m,
                 std::span<const FileId> row) const;
};

// The S largest values, ties to the lower file id; returned ascending.
std::vector<FileId> top_s_selection(std::span<const double> values, int s);
std::vector<FileId> top_s_selection(std::span<const Score> values, int s);

// Exact best response of SBS m: top-S eligible files by gain, skipping files
// whose gain is negative. Ascending file ids.
std::vector<FileId> best_response(const ScoreFunction& score,
                                  const CacheMatrix& cache, SbsId m);

struct CoordinateAscentResult {
  CacheMatrix cache;
  int rounds = 0;      // full passes executed
  bool converged = false;  // last pass changed nothing
};

inline constexpr int kDefaultMaxRounds = 20;

// Cycles SBSs in id order replacing each row by its best response until a
// full pass changes nothing or `max_rounds` passes ran. Throws if `initial`
// violates the budget.
CoordinateAscentResult coordinate_ascent(const ScoreFunction& score,
                                         const CacheMatrix& initial,
                                         int max_rounds = kDefaultMaxRounds);

// Uniformly random S-subset per SBS, drawn from eligible files.
CacheMatrix random_placement(const ScoreFunction& score, int num_sbs,
                             int num_files, int cache_size, SplitMix64& rng);
CacheMatrix random_placement(int num_sbs, int num_files, int cache_size,
                             SplitMix64& rng);

// Best of `restarts` coordinate-ascent runs from random placements.
CacheMatrix oracle_coordinate_ascent(const ScoreFunction& score, int num_sbs,
                                     int num_files, int cache_size,
                                     int restarts, std::uint64_t seed,
                                     int max_rounds = kDefaultMaxRounds);

// Adds the (m, f) pair with the largest marginal gain, ties by (m, f), until
// every cache is full.
CacheMatrix greedy_placement(const ScoreFunction& score, int num_sbs,
                             int num_files, int cache_size);

inline constexpr std::uint64_t kDefaultBruteForceCap = 1'000'000;

// Number of candidate matrices with full rows: C(F, S)^M, saturating.
std::uint64_t placement_count(int num_sbs, int num_files, int cache_size);

// Exhaustive maximum over matrices whose rows hold exactly min(S, F) files.
// Ties resolve to the lexicographically smallest row sequence. Throws when
// placement_count exceeds `cap`.
CacheMatrix brute_force_placement(const ScoreFunction& score, int num_sbs,
                                  int num_files, int cache_size,
                                  std::uint64_t cap = kDefaultBruteForceCap);

}  // namespace mamab

#endif  // MAMAB_OPTIMIZERS_H_
