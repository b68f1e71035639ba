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

// Bandit cache learners. Each one splits the total reward into local terms
// with their own keys, keeps a count and running mean per key, and places
// files by maximizing the sum of optimistic per-key estimates.
//
//   distributed  (m, f)                      reward of SBS m for f
//   agent_sbs    (m, f, cache bits of Γ(m))  reward of SBS m for f
//   agent_user   (m, V, f), V a closer set   reward from users whose
//                                            closer set is V, V uncached
//   edge         self (m, m, f) and directed edge rewards, see
//                (m -> n, f) = a_m 1, a_n 0  assign_edge_rewards
//
// Stationary learners first run forced-exploration slots until every key
// has been observed. Nonstationary ("modified") learners skip that phase:
// keys of requested files start at the optimistic sentinel and the
// confidence bound adapts to the largest running mean seen so far.

#ifndef MAMAB_LEARNERS_H_
#define MAMAB_LEARNERS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mamab/cache_matrix.h"
#include "mamab/demand.h"
#include "mamab/env.h"
#include "mamab/optimizers.h"
#include "mamab/policy.h"
#include "mamab/random.h"
#include "mamab/topology.h"

namespace mamab {

enum class Exploration { kUcbV1, kUcbV2, kEpsilonGreedy };
enum class LogBase { kNatural, kBase2 };

// v1: B * sqrt(3 log t / (2 count)).
// v2: sqrt(3 log(B^2 t) / (2 count)), 0 when B <= 0 or B^2 t < 1.
// Epsilon-greedy adds no term. Throws when count < 1 or t < 1.
double perturbed_term(Exploration variant, double bound, std::int64_t t,
                      std::int64_t count, LogBase base = LogBase::kNatural);

struct ArmStats {
  std::int64_t count = 0;
  double mean = 0.0;

  void add(double reward) {
    ++count;
    mean = (static_cast<double>(count - 1) * mean + reward) /
           static_cast<double>(count);
  }
};

struct LearnerOptions {
  Exploration exploration = Exploration::kUcbV1;
  double epsilon = 0.05;
  // Modified learners: no initial phase, sentinel start, adaptive bound.
  bool nonstationary = false;
  LogBase log_base = LogBase::kNatural;
  int ca_max_rounds = kDefaultMaxRounds;
  // Stream for epsilon draws and random coordinate-ascent starts.
  std::uint64_t seed = 0;
  // Files active before slot 1 (nonstationary only).
  std::vector<FileId> initial_active;
  // Throw when an observed reward exceeds its key's bound.
  bool check_bounds = true;
};

// ---------------------------------------------------------------------------
// Reward bounds

// Σ_{u ∈ U_m} (d0 - d_{m,u}).
double distributed_bound(const Network& net, SbsId m);

// Bits over gamma(m) in ascending order; bit i set = gamma(m)[i] caches.
// Users of m whose closer set has no set bit.
double agent_sbs_bound(const Network& net, SbsId m, std::uint32_t pattern);

// Users of m whose closer set is exactly `closer` (as a mask over gamma(m)).
double agent_user_bound(const Network& net, SbsId m, std::uint32_t closer);

// Users for which m is nearest.
double self_edge_bound(const Network& net, SbsId m);

// Σ over users of m with n in their closer set of (d0 - d_{m,u}) / (j - 1),
// m being the user's j-th nearest SBS.
double directed_edge_bound(const Network& net, SbsId m, SbsId n);

// Mask over gamma(m) of closer_set(u, m).
std::uint32_t closer_mask(const Network& net, UserId u, SbsId m);

// ---------------------------------------------------------------------------
// Learners

// A key that has not been observed: caching `file` at every SBS in
// `cache_at` while none of `avoid_at` caches it realizes the key.
struct CoverageRequirement {
  FileId file = 0;
  std::vector<SbsId> cache_at;
  std::vector<SbsId> avoid_at;
};

// Packs requirements in order into one placement; a requirement is taken
// when it agrees with the fixes made so far and fits the budget. Unfixed
// entries stay 0.
CacheMatrix pack_requirements(std::span<const CoverageRequirement> reqs,
                              int num_sbs, int num_files, int cache_size);

class BanditLearner : public Policy {
 public:
  BanditLearner(std::string name, int num_sbs, int num_files, int cache_size,
                LearnerOptions options);

  std::string name() const override { return name_; }
  CacheMatrix decide(const SlotContext& ctx) override;
  void observe(const SlotContext& ctx, const ServiceOutcome& outcome,
               const EdgeRewardTable& edges,
               std::span<const FileId> new_files) override;
  bool in_initial_phase() const override { return last_initial_; }

  const LearnerOptions& options() const { return options_; }
  const ActiveFileSet& active() const { return active_; }
  // Marks files as requested at least once.
  virtual void activate(std::span<const FileId> files);
  int initial_slots() const { return initial_slots_; }
  // Number of stored keys (a key exists once it is defined by the graph).
  virtual std::int64_t num_keys() const = 0;

 protected:
  struct EstimateMode {
    std::int64_t t = 1;
    bool greedy = false;  // averages only
  };

  // Unobserved keys for the current network.
  virtual std::vector<CoverageRequirement> uncovered(
      const Network& net) const = 0;
  // Placement maximizing the summed estimates.
  virtual CacheMatrix exploit(const SlotContext& ctx,
                              const EstimateMode& mode) = 0;
  // Folds one slot of feedback into the statistics.
  virtual void update(const SlotContext& ctx, const CacheMatrix& placed,
                      const ServiceOutcome& outcome,
                      const EdgeRewardTable& edges) = 0;
  // Recomputes static bounds after a geometry change.
  virtual void refresh(const Network& net) = 0;

  // Estimate of a key: sentinel when unseen, the running mean in greedy
  // mode, otherwise mean plus the perturbed term. `bound` is the static
  // bound or, in nonstationary mode, the adaptive one.
  Score estimate(const ArmStats& s, double bound,
                 const EstimateMode& mode) const;
  bool eligible(FileId f) const {
    return !options_.nonstationary || active_.contains(f);
  }
  void check_bound(double reward, double bound, const char* what) const;

  int num_sbs_;
  int num_files_;
  int cache_size_;
  LearnerOptions options_;
  SplitMix64 rng_;
  ActiveFileSet active_;

 private:
  void sync_network(const SlotContext& ctx);

  std::string name_;
  bool initial_done_ = false;
  bool last_initial_ = false;
  int initial_slots_ = 0;
  bool have_revision_ = false;
  std::uint64_t revision_ = 0;
  CacheMatrix placed_;
};

// Per-SBS independent learner.
class DistributedLearner : public BanditLearner {
 public:
  DistributedLearner(const Network& net, int num_files, int cache_size,
                     LearnerOptions options, std::string name = "distributed");

  std::int64_t num_keys() const override;
  const ArmStats& stats(SbsId m, FileId f) const {
    return stats_[static_cast<size_t>(m) * num_files_ + f];
  }
  double bound(SbsId m) const { return bounds_[m]; }

  // Top-S per SBS by estimate; shared with the edge learner's warm start.
  CacheMatrix select(std::int64_t t, bool greedy);
  void record(const CacheMatrix& placed, const ServiceOutcome& outcome);

 protected:
  std::vector<CoverageRequirement> uncovered(
      const Network& net) const override;
  CacheMatrix exploit(const SlotContext& ctx,
                      const EstimateMode& mode) override;
  void update(const SlotContext& ctx, const CacheMatrix& placed,
              const ServiceOutcome& outcome,
              const EdgeRewardTable& edges) override;
  void refresh(const Network& net) override;

 private:
  friend class EdgeLearner;
  double adaptive_bound(SbsId m) const;

  std::vector<ArmStats> stats_;
  std::vector<double> bounds_;
};

// Joint-action learner over the cache bits of {m} ∪ Γ(m). The coordination
// graph must stay fixed for the learner's lifetime.
class AgentSbsLearner : public BanditLearner {
 public:
  AgentSbsLearner(const Network& net, int num_files, int cache_size,
                  LearnerOptions options, std::string name = "agent_sbs");

  std::int64_t num_keys() const override;
  const ArmStats& stats(SbsId m, std::uint32_t pattern, FileId f) const {
    return stats_[m][static_cast<size_t>(pattern) * num_files_ + f];
  }
  double bound(SbsId m, std::uint32_t pattern) const {
    return bounds_[m][pattern];
  }
  std::uint32_t pattern_of(const CacheMatrix& cache, SbsId m, FileId f) const;

 protected:
  std::vector<CoverageRequirement> uncovered(
      const Network& net) const override;
  CacheMatrix exploit(const SlotContext& ctx,
                      const EstimateMode& mode) override;
  void update(const SlotContext& ctx, const CacheMatrix& placed,
              const ServiceOutcome& outcome,
              const EdgeRewardTable& edges) override;
  void refresh(const Network& net) override;

 private:
  class Objective;

  std::vector<std::vector<SbsId>> gamma_;
  // position_[n][m] = index of m in gamma_[n], or -1.
  std::vector<std::vector<int>> position_;
  std::vector<std::vector<ArmStats>> stats_;
  std::vector<std::vector<double>> bounds_;
};

// Joint-action learner over (m, V, f): m caches f and no SBS of V does,
// V ranging over the closer sets of m's users. Coordination graph and user
// positions must stay fixed.
class AgentUserLearner : public BanditLearner {
 public:
  AgentUserLearner(const Network& net, int num_files, int cache_size,
                   LearnerOptions options, std::string name = "agent_user");

  std::int64_t num_keys() const override;
  // Distinct closer-set masks of m, ascending.
  std::span<const std::uint32_t> closer_sets(SbsId m) const {
    return sets_[m];
  }
  const ArmStats& stats(SbsId m, int set_index, FileId f) const {
    return stats_[m][static_cast<size_t>(set_index) * num_files_ + f];
  }
  double bound(SbsId m, int set_index) const { return bounds_[m][set_index]; }

 protected:
  std::vector<CoverageRequirement> uncovered(
      const Network& net) const override;
  CacheMatrix exploit(const SlotContext& ctx,
                      const EstimateMode& mode) override;
  void update(const SlotContext& ctx, const CacheMatrix& placed,
              const ServiceOutcome& outcome,
              const EdgeRewardTable& edges) override;
  void refresh(const Network& net) override;

 private:
  class Objective;

  bool set_uncached(const CacheMatrix& cache, SbsId m, std::uint32_t mask,
                    FileId f) const;

  std::vector<std::vector<SbsId>> gamma_;
  std::vector<std::vector<int>> position_;
  std::vector<std::vector<std::uint32_t>> sets_;
  // set_of_user_[m][u] = index into sets_[m], or -1.
  std::vector<std::vector<int>> set_of_user_;
  std::vector<std::vector<ArmStats>> stats_;
  std::vector<std::vector<double>> bounds_;
};

// Edge-based learner: warm-starts coordinate ascent from the distributed
// learner's placement, then maximizes the summed edge estimates.
class EdgeLearner : public BanditLearner {
 public:
  EdgeLearner(const Network& net, int num_files, int cache_size,
              LearnerOptions options, std::string name = "edge");

  std::int64_t num_keys() const override;
  const ArmStats& self_stats(SbsId m, FileId f) const {
    return pair_stats_[index(m, m, f)];
  }
  const ArmStats& directed_stats(SbsId m, SbsId n, FileId f) const {
    return pair_stats_[index(m, n, f)];
  }
  double pair_bound(SbsId m, SbsId n) const {
    return bounds_[static_cast<size_t>(m) * num_sbs_ + n];
  }
  const DistributedLearner& warm_start() const { return warm_; }
  void activate(std::span<const FileId> files) override;

 protected:
  std::vector<CoverageRequirement> uncovered(
      const Network& net) const override;
  CacheMatrix exploit(const SlotContext& ctx,
                      const EstimateMode& mode) override;
  void update(const SlotContext& ctx, const CacheMatrix& placed,
              const ServiceOutcome& outcome,
              const EdgeRewardTable& edges) override;
  void refresh(const Network& net) override;

 private:
  class Objective;

  size_t index(SbsId m, SbsId n, FileId f) const {
    return (static_cast<size_t>(m) * num_sbs_ + n) * num_files_ + f;
  }
  double adaptive_bound(SbsId m, SbsId n) const;

  DistributedLearner warm_;
  std::int64_t key_count_ = 0;
  // Dense M x M x F; the diagonal holds self edges.
  std::vector<ArmStats> pair_stats_;
  std::vector<double> bounds_;
};

}  // namespace mamab

#endif  // MAMAB_LEARNERS_H_
