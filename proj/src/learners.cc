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

#include "mamab/learners.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace mamab {
namespace {

double log_of(double x, LogBase base) {
  return base == LogBase::kNatural ? std::log(x) : std::log2(x);
}

// Top-S of `scores` restricted to eligible files with non-negative score;
// ties to the lower id.
std::vector<FileId> top_eligible(const std::vector<Score>& scores,
                                 const std::vector<std::uint8_t>& eligible,
                                 int s) {
  std::vector<FileId> candidates;
  for (FileId f = 0; f < static_cast<int>(scores.size()); ++f) {
    if (eligible[f] && !scores[f].negative()) candidates.push_back(f);
  }
  const int k = std::min(s, static_cast<int>(candidates.size()));
  std::partial_sort(candidates.begin(), candidates.begin() + k,
                    candidates.end(), [&](FileId a, FileId b) {
                      if (scores[a] > scores[b]) return true;
                      if (scores[b] > scores[a]) return false;
                      return a < b;
                    });
  candidates.resize(k);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

int position_in(std::span<const SbsId> sorted, SbsId n) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), n);
  if (it == sorted.end() || *it != n) return -1;
  return static_cast<int>(it - sorted.begin());
}

void require_small_gamma(const Network& net, const char* who) {
  for (SbsId m = 0; m < net.num_sbs(); ++m) {
    if (net.graph.gamma(m).size() > 20) {
      throw Error(std::string(who) + ": SBS " + std::to_string(m) +
                  " has more than 20 graph neighbors");
    }
  }
}

}  // namespace

double perturbed_term(Exploration variant, double bound, std::int64_t t,
                      std::int64_t count, LogBase base) {
  if (count < 1) throw Error("perturbed_term: count must be >= 1");
  if (t < 1) throw Error("perturbed_term: slot must be >= 1");
  const double c = static_cast<double>(count);
  switch (variant) {
    case Exploration::kUcbV1:
      return bound *
             std::sqrt(3.0 * log_of(static_cast<double>(t), base) / (2.0 * c));
    case Exploration::kUcbV2: {
      if (bound <= 0.0) return 0.0;
      const double x = bound * bound * static_cast<double>(t);
      if (x < 1.0) return 0.0;
      return std::sqrt(3.0 * log_of(x, base) / (2.0 * c));
    }
    case Exploration::kEpsilonGreedy:
      return 0.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Bounds

std::uint32_t closer_mask(const Network& net, UserId u, SbsId m) {
  std::uint32_t mask = 0;
  auto gamma = net.graph.gamma(m);
  for (SbsId n : net.index.closer_set(u, m)) {
    const int i = position_in(gamma, n);
    if (i < 0) throw Error("closer_mask: closer SBS is not a graph neighbor");
    mask |= std::uint32_t{1} << i;
  }
  return mask;
}

namespace {

template <typename Pred>
double sum_savings(const Network& net, SbsId m, Pred take) {
  const double d0 = net.delays.core_delay();
  double sum = 0.0;
  for (UserId u : net.index.users_of_sbs(m)) {
    if (take(u)) sum += d0 - net.delays.linked_delay(m, u);
  }
  return sum;
}

}  // namespace

double distributed_bound(const Network& net, SbsId m) {
  return sum_savings(net, m, [](UserId) { return true; });
}

double agent_sbs_bound(const Network& net, SbsId m, std::uint32_t pattern) {
  return sum_savings(net, m, [&](UserId u) {
    return (closer_mask(net, u, m) & pattern) == 0;
  });
}

double agent_user_bound(const Network& net, SbsId m, std::uint32_t closer) {
  return sum_savings(
      net, m, [&](UserId u) { return closer_mask(net, u, m) == closer; });
}

double self_edge_bound(const Network& net, SbsId m) {
  return sum_savings(net, m,
                     [&](UserId u) { return net.index.rank(u, m) == 0; });
}

double directed_edge_bound(const Network& net, SbsId m, SbsId n) {
  if (m == n) return self_edge_bound(net, m);
  const double d0 = net.delays.core_delay();
  double sum = 0.0;
  for (UserId u : net.index.users_of_sbs(m)) {
    const int j = net.index.rank(u, m);
    const int k = net.index.rank(u, n);
    if (k >= 0 && k < j) {
      sum += (d0 - net.delays.linked_delay(m, u)) / static_cast<double>(j);
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Initial-phase packing

CacheMatrix pack_requirements(std::span<const CoverageRequirement> reqs,
                              int num_sbs, int num_files, int cache_size) {
  // -1 unset, 0 fixed off, 1 fixed on.
  std::vector<std::int8_t> state(static_cast<size_t>(num_sbs) * num_files, -1);
  std::vector<int> used(num_sbs, 0);
  auto at = [&](SbsId m, FileId f) -> std::int8_t& {
    return state[static_cast<size_t>(m) * num_files + f];
  };
  for (const CoverageRequirement& r : reqs) {
    bool ok = true;
    for (SbsId m : r.cache_at) {
      const std::int8_t s = at(m, r.file);
      if (s == 0 || (s == -1 && used[m] >= cache_size)) {
        ok = false;
        break;
      }
    }
    for (SbsId n : r.avoid_at) {
      if (!ok) break;
      if (at(n, r.file) == 1) ok = false;
    }
    if (!ok) continue;
    for (SbsId m : r.cache_at) {
      if (at(m, r.file) == -1) {
        at(m, r.file) = 1;
        ++used[m];
      }
    }
    for (SbsId n : r.avoid_at) at(n, r.file) = 0;
  }
  CacheMatrix cache(num_sbs, num_files, cache_size);
  for (SbsId m = 0; m < num_sbs; ++m) {
    for (FileId f = 0; f < num_files; ++f) {
      if (at(m, f) == 1) cache.set(m, f, true);
    }
  }
  return cache;
}

// ---------------------------------------------------------------------------
// BanditLearner

BanditLearner::BanditLearner(std::string name, int num_sbs, int num_files,
                             int cache_size, LearnerOptions options)
    : num_sbs_(num_sbs),
      num_files_(num_files),
      cache_size_(cache_size),
      options_(std::move(options)),
      rng_(make_stream(options_.seed, Stream::kPolicy, {})),
      name_(std::move(name)) {
  if (num_sbs < 1 || num_files < 1 || cache_size < 0) {
    throw Error(name_ + ": invalid dimensions");
  }
  if (!(options_.epsilon >= 0.0 && options_.epsilon <= 1.0)) {
    throw Error(name_ + ": epsilon must lie in [0, 1]");
  }
  if (options_.ca_max_rounds < 1) {
    throw Error(name_ + ": coordinate ascent needs at least one round");
  }
  for (FileId f : options_.initial_active) {
    if (f < 0 || f >= num_files) throw Error(name_ + ": bad initial file");
    active_.insert(f);
  }
}

void BanditLearner::activate(std::span<const FileId> files) {
  for (FileId f : files) active_.insert(f);
}

void BanditLearner::sync_network(const SlotContext& ctx) {
  if (ctx.net == nullptr) throw Error(name_ + ": slot context has no network");
  if (!have_revision_ || ctx.network_revision != revision_) {
    refresh(*ctx.net);
    have_revision_ = true;
    revision_ = ctx.network_revision;
  }
}

Score BanditLearner::estimate(const ArmStats& s, double bound,
                              const EstimateMode& mode) const {
  if (s.count == 0) return Score::unseen();
  if (mode.greedy) return Score::finite(s.mean);
  const Exploration variant =
      options_.nonstationary ? Exploration::kUcbV2 : options_.exploration;
  return Score::finite(s.mean + perturbed_term(variant, bound, mode.t, s.count,
                                               options_.log_base));
}

void BanditLearner::check_bound(double reward, double bound,
                                const char* what) const {
  if (!options_.check_bounds) return;
  if (reward > bound + 1e-9 * std::abs(bound) + 1e-15) {
    throw Error(name_ + ": observed " + what + " reward " +
                std::to_string(reward) + " exceeds its bound " +
                std::to_string(bound));
  }
}

CacheMatrix BanditLearner::decide(const SlotContext& ctx) {
  sync_network(ctx);
  last_initial_ = false;
  if (!options_.nonstationary && !initial_done_) {
    if (cache_size_ > 0) {
      std::vector<CoverageRequirement> reqs = uncovered(*ctx.net);
      if (!reqs.empty()) {
        placed_ = pack_requirements(reqs, num_sbs_, num_files_, cache_size_);
        last_initial_ = true;
        ++initial_slots_;
        return placed_;
      }
    }
    initial_done_ = true;
  }
  EstimateMode mode{ctx.slot, false};
  if (options_.exploration == Exploration::kEpsilonGreedy) {
    if (uniform01(rng_) < options_.epsilon) {
      std::vector<FileId> pool;
      for (FileId f = 0; f < num_files_; ++f) {
        if (eligible(f)) pool.push_back(f);
      }
      CacheMatrix cache(num_sbs_, num_files_, cache_size_);
      const int k = std::min(cache_size_, static_cast<int>(pool.size()));
      for (SbsId m = 0; m < num_sbs_; ++m) {
        for (int i : sample_without_replacement(
                 rng_, static_cast<int>(pool.size()), k)) {
          cache.set(m, pool[i], true);
        }
      }
      placed_ = std::move(cache);
      return placed_;
    }
    mode.greedy = true;
  }
  placed_ = exploit(ctx, mode);
  return placed_;
}

void BanditLearner::observe(const SlotContext& ctx,
                            const ServiceOutcome& outcome,
                            const EdgeRewardTable& edges,
                            std::span<const FileId> new_files) {
  sync_network(ctx);
  if (placed_.num_sbs() != num_sbs_) {
    throw Error(name_ + ": observe called before decide");
  }
  update(ctx, placed_, outcome, edges);
  activate(new_files);
}

// ---------------------------------------------------------------------------
// DistributedLearner

DistributedLearner::DistributedLearner(const Network& net, int num_files,
                                       int cache_size, LearnerOptions options,
                                       std::string name)
    : BanditLearner(std::move(name), net.num_sbs(), num_files, cache_size,
                    std::move(options)),
      stats_(static_cast<size_t>(net.num_sbs()) * num_files) {
  refresh(net);
}

std::int64_t DistributedLearner::num_keys() const {
  return static_cast<std::int64_t>(num_sbs_) * num_files_;
}

void DistributedLearner::refresh(const Network& net) {
  bounds_.assign(num_sbs_, 0.0);
  for (SbsId m = 0; m < num_sbs_; ++m) bounds_[m] = distributed_bound(net, m);
}

double DistributedLearner::adaptive_bound(SbsId m) const {
  double best = 0.0;
  for (FileId f = 0; f < num_files_; ++f) {
    const ArmStats& s = stats(m, f);
    if (s.count > 0 && active_.contains(f)) best = std::max(best, s.mean);
  }
  return best;
}

CacheMatrix DistributedLearner::select(std::int64_t t, bool greedy) {
  EstimateMode mode{t, greedy};
  CacheMatrix cache(num_sbs_, num_files_, cache_size_);
  std::vector<std::uint8_t> ok(num_files_);
  for (FileId f = 0; f < num_files_; ++f) ok[f] = eligible(f) ? 1 : 0;
  std::vector<Score> scores(num_files_);
  for (SbsId m = 0; m < num_sbs_; ++m) {
    const double b =
        options_.nonstationary ? adaptive_bound(m) : bounds_[m];
    for (FileId f = 0; f < num_files_; ++f) {
      scores[f] = ok[f] ? estimate(stats(m, f), b, mode) : Score{};
    }
    cache.set_row(m, top_eligible(scores, ok, cache_size_));
  }
  return cache;
}

void DistributedLearner::record(const CacheMatrix& placed,
                                const ServiceOutcome& outcome) {
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (FileId f : placed.row_files(m)) {
      const double r = outcome.sbs_reward(m, f);
      check_bound(r, bounds_[m], "per-SBS");
      stats_[static_cast<size_t>(m) * num_files_ + f].add(r);
    }
  }
}

std::vector<CoverageRequirement> DistributedLearner::uncovered(
    const Network&) const {
  std::vector<CoverageRequirement> reqs;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (FileId f = 0; f < num_files_; ++f) {
      if (stats(m, f).count == 0) reqs.push_back({f, {m}, {}});
    }
  }
  return reqs;
}

CacheMatrix DistributedLearner::exploit(const SlotContext&,
                                        const EstimateMode& mode) {
  return select(mode.t, mode.greedy);
}

void DistributedLearner::update(const SlotContext&, const CacheMatrix& placed,
                                const ServiceOutcome& outcome,
                                const EdgeRewardTable&) {
  record(placed, outcome);
}

// ---------------------------------------------------------------------------
// AgentSbsLearner

class AgentSbsLearner::Objective : public ScoreFunction {
 public:
  Objective(const AgentSbsLearner& owner, std::vector<std::vector<Score>> est)
      : owner_(owner), est_(std::move(est)) {}

  Score evaluate(const CacheMatrix& cache) const override {
    Score total;
    for (SbsId m = 0; m < owner_.num_sbs_; ++m) {
      for (FileId f : cache.row_files(m)) {
        total += at(m, owner_.pattern_of(cache, m, f), f);
      }
    }
    return total;
  }

  void file_gains(const CacheMatrix& cache, SbsId m,
                  std::span<Score> out) const override {
    for (FileId f = 0; f < owner_.num_files_; ++f) {
      Score gain = at(m, owner_.pattern_of(cache, m, f), f);
      for (SbsId n : owner_.gamma_[m]) {
        if (!cache.cached(n, f)) continue;
        const std::uint32_t bit = std::uint32_t{1}
                                  << owner_.position_[n][m];
        const std::uint32_t p = owner_.pattern_of(cache, n, f);
        gain += at(n, p | bit, f);
        gain -= at(n, p & ~bit, f);
      }
      out[f] = gain;
    }
  }

  bool eligible(FileId f) const override { return owner_.eligible(f); }

 private:
  const Score& at(SbsId m, std::uint32_t pattern, FileId f) const {
    return est_[m][static_cast<size_t>(pattern) * owner_.num_files_ + f];
  }

  const AgentSbsLearner& owner_;
  std::vector<std::vector<Score>> est_;
};

AgentSbsLearner::AgentSbsLearner(const Network& net, int num_files,
                                 int cache_size, LearnerOptions options,
                                 std::string name)
    : BanditLearner(std::move(name), net.num_sbs(), num_files, cache_size,
                    std::move(options)) {
  refresh(net);
}

std::int64_t AgentSbsLearner::num_keys() const {
  std::int64_t n = 0;
  for (const auto& s : stats_) n += static_cast<std::int64_t>(s.size());
  return n;
}

std::uint32_t AgentSbsLearner::pattern_of(const CacheMatrix& cache, SbsId m,
                                          FileId f) const {
  std::uint32_t p = 0;
  const auto& g = gamma_[m];
  for (size_t i = 0; i < g.size(); ++i) {
    if (cache.cached(g[i], f)) p |= std::uint32_t{1} << i;
  }
  return p;
}

void AgentSbsLearner::refresh(const Network& net) {
  require_small_gamma(net, "agent_sbs");
  std::vector<std::vector<SbsId>> gamma(num_sbs_);
  for (SbsId m = 0; m < num_sbs_; ++m) {
    auto g = net.graph.gamma(m);
    gamma[m].assign(g.begin(), g.end());
  }
  if (!gamma_.empty() && gamma != gamma_) {
    throw Error(name() + ": the coordination graph changed mid-run");
  }
  if (gamma_.empty()) {
    gamma_ = std::move(gamma);
    position_.assign(num_sbs_, std::vector<int>(num_sbs_, -1));
    stats_.resize(num_sbs_);
    for (SbsId m = 0; m < num_sbs_; ++m) {
      for (size_t i = 0; i < gamma_[m].size(); ++i) {
        position_[m][gamma_[m][i]] = static_cast<int>(i);
      }
      stats_[m].assign((size_t{1} << gamma_[m].size()) * num_files_,
                       ArmStats{});
    }
  }
  bounds_.assign(num_sbs_, {});
  for (SbsId m = 0; m < num_sbs_; ++m) {
    const std::uint32_t patterns = std::uint32_t{1} << gamma_[m].size();
    bounds_[m].resize(patterns);
    for (std::uint32_t p = 0; p < patterns; ++p) {
      bounds_[m][p] = agent_sbs_bound(net, m, p);
    }
  }
}

std::vector<CoverageRequirement> AgentSbsLearner::uncovered(
    const Network&) const {
  std::vector<CoverageRequirement> reqs;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    const auto& g = gamma_[m];
    const std::uint32_t patterns = std::uint32_t{1} << g.size();
    for (std::uint32_t p = 0; p < patterns; ++p) {
      for (FileId f = 0; f < num_files_; ++f) {
        if (stats(m, p, f).count != 0) continue;
        CoverageRequirement r{f, {m}, {}};
        for (size_t i = 0; i < g.size(); ++i) {
          if (p & (std::uint32_t{1} << i)) {
            r.cache_at.push_back(g[i]);
          } else {
            r.avoid_at.push_back(g[i]);
          }
        }
        reqs.push_back(std::move(r));
      }
    }
  }
  return reqs;
}

CacheMatrix AgentSbsLearner::exploit(const SlotContext&,
                                     const EstimateMode& mode) {
  std::vector<std::vector<Score>> est(num_sbs_);
  for (SbsId m = 0; m < num_sbs_; ++m) {
    const std::uint32_t patterns = std::uint32_t{1} << gamma_[m].size();
    est[m].resize(static_cast<size_t>(patterns) * num_files_);
    for (std::uint32_t p = 0; p < patterns; ++p) {
      for (FileId f = 0; f < num_files_; ++f) {
        est[m][static_cast<size_t>(p) * num_files_ + f] =
            estimate(stats(m, p, f), bounds_[m][p], mode);
      }
    }
  }
  Objective objective(*this, std::move(est));
  CacheMatrix start =
      random_placement(objective, num_sbs_, num_files_, cache_size_, rng_);
  return coordinate_ascent(objective, start, options_.ca_max_rounds).cache;
}

void AgentSbsLearner::update(const SlotContext&, const CacheMatrix& placed,
                             const ServiceOutcome& outcome,
                             const EdgeRewardTable&) {
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (FileId f : placed.row_files(m)) {
      const std::uint32_t p = pattern_of(placed, m, f);
      const double r = outcome.sbs_reward(m, f);
      check_bound(r, bounds_[m][p], "joint-action");
      stats_[m][static_cast<size_t>(p) * num_files_ + f].add(r);
    }
  }
}

// ---------------------------------------------------------------------------
// AgentUserLearner

class AgentUserLearner::Objective : public ScoreFunction {
 public:
  Objective(const AgentUserLearner& owner, std::vector<std::vector<Score>> est)
      : owner_(owner), est_(std::move(est)) {}

  Score evaluate(const CacheMatrix& cache) const override {
    Score total;
    for (SbsId m = 0; m < owner_.num_sbs_; ++m) {
      const auto& sets = owner_.sets_[m];
      for (FileId f : cache.row_files(m)) {
        for (size_t i = 0; i < sets.size(); ++i) {
          if (owner_.set_uncached(cache, m, sets[i], f)) total += at(m, i, f);
        }
      }
    }
    return total;
  }

  void file_gains(const CacheMatrix& cache, SbsId m,
                  std::span<Score> out) const override {
    const auto& sets = owner_.sets_[m];
    for (FileId f = 0; f < owner_.num_files_; ++f) {
      Score gain;
      for (size_t i = 0; i < sets.size(); ++i) {
        if (owner_.set_uncached(cache, m, sets[i], f)) gain += at(m, i, f);
      }
      for (SbsId k : owner_.gamma_[m]) {
        if (!cache.cached(k, f)) continue;
        const std::uint32_t bit = std::uint32_t{1}
                                  << owner_.position_[k][m];
        const auto& ksets = owner_.sets_[k];
        for (size_t i = 0; i < ksets.size(); ++i) {
          if ((ksets[i] & bit) &&
              owner_.set_uncached(cache, k, ksets[i] & ~bit, f)) {
            gain -= at(k, i, f);
          }
        }
      }
      out[f] = gain;
    }
  }

  bool eligible(FileId f) const override { return owner_.eligible(f); }

 private:
  const Score& at(SbsId m, size_t i, FileId f) const {
    return est_[m][i * owner_.num_files_ + f];
  }

  const AgentUserLearner& owner_;
  std::vector<std::vector<Score>> est_;
};

AgentUserLearner::AgentUserLearner(const Network& net, int num_files,
                                   int cache_size, LearnerOptions options,
                                   std::string name)
    : BanditLearner(std::move(name), net.num_sbs(), num_files, cache_size,
                    std::move(options)) {
  refresh(net);
}

std::int64_t AgentUserLearner::num_keys() const {
  std::int64_t n = 0;
  for (const auto& s : stats_) n += static_cast<std::int64_t>(s.size());
  return n;
}

bool AgentUserLearner::set_uncached(const CacheMatrix& cache, SbsId m,
                                    std::uint32_t mask, FileId f) const {
  const auto& g = gamma_[m];
  for (size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if ((mask & 1u) && cache.cached(g[i], f)) return false;
  }
  return true;
}

void AgentUserLearner::refresh(const Network& net) {
  require_small_gamma(net, "agent_user");
  std::vector<std::vector<SbsId>> gamma(num_sbs_);
  std::vector<std::vector<std::uint32_t>> sets(num_sbs_);
  std::vector<std::vector<int>> set_of_user(
      num_sbs_, std::vector<int>(net.num_users(), -1));
  for (SbsId m = 0; m < num_sbs_; ++m) {
    auto g = net.graph.gamma(m);
    gamma[m].assign(g.begin(), g.end());
    for (UserId u : net.index.users_of_sbs(m)) {
      sets[m].push_back(closer_mask(net, u, m));
    }
    std::sort(sets[m].begin(), sets[m].end());
    sets[m].erase(std::unique(sets[m].begin(), sets[m].end()), sets[m].end());
    for (UserId u : net.index.users_of_sbs(m)) {
      const std::uint32_t mask = closer_mask(net, u, m);
      set_of_user[m][u] = static_cast<int>(
          std::lower_bound(sets[m].begin(), sets[m].end(), mask) -
          sets[m].begin());
    }
  }
  if (!stats_.empty()) {
    if (gamma != gamma_ || sets != sets_) {
      throw Error(name() + ": the user geometry changed mid-run");
    }
    set_of_user_ = std::move(set_of_user);
    return;
  }
  gamma_ = std::move(gamma);
  sets_ = std::move(sets);
  set_of_user_ = std::move(set_of_user);
  position_.assign(num_sbs_, std::vector<int>(num_sbs_, -1));
  stats_.resize(num_sbs_);
  bounds_.resize(num_sbs_);
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (size_t i = 0; i < gamma_[m].size(); ++i) {
      position_[m][gamma_[m][i]] = static_cast<int>(i);
    }
    stats_[m].assign(sets_[m].size() * num_files_, ArmStats{});
    bounds_[m].resize(sets_[m].size());
    for (size_t i = 0; i < sets_[m].size(); ++i) {
      bounds_[m][i] = agent_user_bound(net, m, sets_[m][i]);
    }
  }
}

std::vector<CoverageRequirement> AgentUserLearner::uncovered(
    const Network&) const {
  std::vector<CoverageRequirement> reqs;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    const auto& g = gamma_[m];
    for (size_t i = 0; i < sets_[m].size(); ++i) {
      for (FileId f = 0; f < num_files_; ++f) {
        if (stats(m, static_cast<int>(i), f).count != 0) continue;
        CoverageRequirement r{f, {m}, {}};
        for (size_t b = 0; b < g.size(); ++b) {
          if (sets_[m][i] & (std::uint32_t{1} << b)) r.avoid_at.push_back(g[b]);
        }
        reqs.push_back(std::move(r));
      }
    }
  }
  return reqs;
}

CacheMatrix AgentUserLearner::exploit(const SlotContext&,
                                      const EstimateMode& mode) {
  std::vector<std::vector<Score>> est(num_sbs_);
  for (SbsId m = 0; m < num_sbs_; ++m) {
    est[m].resize(sets_[m].size() * num_files_);
    for (size_t i = 0; i < sets_[m].size(); ++i) {
      for (FileId f = 0; f < num_files_; ++f) {
        est[m][i * num_files_ + f] =
            estimate(stats(m, static_cast<int>(i), f), bounds_[m][i], mode);
      }
    }
  }
  Objective objective(*this, std::move(est));
  CacheMatrix start =
      random_placement(objective, num_sbs_, num_files_, cache_size_, rng_);
  return coordinate_ascent(objective, start, options_.ca_max_rounds).cache;
}

void AgentUserLearner::update(const SlotContext&, const CacheMatrix& placed,
                              const ServiceOutcome& outcome,
                              const EdgeRewardTable&) {
  // Rewards grouped by (server, closer set, file).
  std::map<std::tuple<SbsId, int, FileId>, double> grouped;
  for (const ServedRequest& r : outcome.requests) {
    if (r.server == kCoreServer) continue;
    const int i = set_of_user_[r.server][r.user];
    grouped[{r.server, i, r.file}] += r.reward;
  }
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (FileId f : placed.row_files(m)) {
      for (size_t i = 0; i < sets_[m].size(); ++i) {
        if (!set_uncached(placed, m, sets_[m][i], f)) continue;
        auto it = grouped.find({m, static_cast<int>(i), f});
        const double r = it == grouped.end() ? 0.0 : it->second;
        check_bound(r, bounds_[m][i], "closer-set");
        stats_[m][i * num_files_ + f].add(r);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// EdgeLearner

class EdgeLearner::Objective : public ScoreFunction {
 public:
  Objective(const EdgeLearner& owner, const CoordinationGraph& graph,
            std::vector<Score> est)
      : owner_(owner), graph_(graph), est_(std::move(est)) {}

  Score evaluate(const CacheMatrix& cache) const override {
    Score total;
    for (SbsId m = 0; m < owner_.num_sbs_; ++m) {
      for (FileId f : cache.row_files(m)) {
        total += est_[owner_.index(m, m, f)];
        for (SbsId n : graph_.gamma(m)) {
          if (!cache.cached(n, f)) total += est_[owner_.index(m, n, f)];
        }
      }
    }
    return total;
  }

  void file_gains(const CacheMatrix& cache, SbsId m,
                  std::span<Score> out) const override {
    for (FileId f = 0; f < owner_.num_files_; ++f) {
      Score gain = est_[owner_.index(m, m, f)];
      for (SbsId n : graph_.gamma(m)) {
        if (cache.cached(n, f)) {
          gain -= est_[owner_.index(n, m, f)];
        } else {
          gain += est_[owner_.index(m, n, f)];
        }
      }
      out[f] = gain;
    }
  }

  bool eligible(FileId f) const override { return owner_.eligible(f); }

 private:
  const EdgeLearner& owner_;
  const CoordinationGraph& graph_;
  std::vector<Score> est_;
};

EdgeLearner::EdgeLearner(const Network& net, int num_files, int cache_size,
                         LearnerOptions options, std::string name)
    : BanditLearner(std::move(name), net.num_sbs(), num_files, cache_size,
                    options),
      warm_(net, num_files, cache_size, options),
      pair_stats_(static_cast<size_t>(net.num_sbs()) * net.num_sbs() *
                  num_files) {
  refresh(net);
}

std::int64_t EdgeLearner::num_keys() const { return key_count_; }

void EdgeLearner::activate(std::span<const FileId> files) {
  BanditLearner::activate(files);
  warm_.activate(files);
}

void EdgeLearner::refresh(const Network& net) {
  warm_.refresh(net);
  bounds_.assign(static_cast<size_t>(num_sbs_) * num_sbs_, 0.0);
  key_count_ = 0;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    bounds_[static_cast<size_t>(m) * num_sbs_ + m] = self_edge_bound(net, m);
    for (SbsId n : net.graph.gamma(m)) {
      bounds_[static_cast<size_t>(m) * num_sbs_ + n] =
          directed_edge_bound(net, m, n);
    }
    key_count_ += static_cast<std::int64_t>(1 + net.graph.gamma(m).size()) *
                  num_files_;
  }
}

double EdgeLearner::adaptive_bound(SbsId m, SbsId n) const {
  double best = 0.0;
  for (FileId f = 0; f < num_files_; ++f) {
    const ArmStats& s = pair_stats_[index(m, n, f)];
    if (s.count > 0 && active_.contains(f)) best = std::max(best, s.mean);
  }
  return best;
}

std::vector<CoverageRequirement> EdgeLearner::uncovered(
    const Network& net) const {
  std::vector<CoverageRequirement> reqs;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (FileId f = 0; f < num_files_; ++f) {
      if (self_stats(m, f).count == 0) reqs.push_back({f, {m}, {}});
    }
    for (SbsId n : net.graph.gamma(m)) {
      for (FileId f = 0; f < num_files_; ++f) {
        if (directed_stats(m, n, f).count == 0) reqs.push_back({f, {m}, {n}});
      }
    }
  }
  return reqs;
}

CacheMatrix EdgeLearner::exploit(const SlotContext& ctx,
                                 const EstimateMode& mode) {
  const CoordinationGraph& graph = ctx.net->graph;
  CacheMatrix start = warm_.select(mode.t, mode.greedy);
  std::vector<Score> est(pair_stats_.size());
  auto fill = [&](SbsId m, SbsId n) {
    const double b = options_.nonstationary ? adaptive_bound(m, n)
                                            : pair_bound(m, n);
    for (FileId f = 0; f < num_files_; ++f) {
      if (eligible(f)) {
        est[index(m, n, f)] = estimate(pair_stats_[index(m, n, f)], b, mode);
      }
    }
  };
  for (SbsId m = 0; m < num_sbs_; ++m) {
    fill(m, m);
    for (SbsId n : graph.gamma(m)) fill(m, n);
  }
  Objective objective(*this, graph, std::move(est));
  return coordinate_ascent(objective, start, options_.ca_max_rounds).cache;
}

void EdgeLearner::update(const SlotContext& ctx, const CacheMatrix& placed,
                         const ServiceOutcome& outcome,
                         const EdgeRewardTable& edges) {
  warm_.record(placed, outcome);
  const CoordinationGraph& graph = ctx.net->graph;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    for (FileId f : placed.row_files(m)) {
      const double self = edges.reward(EdgeKey{m, m, f});
      check_bound(self, pair_bound(m, m), "self-edge");
      pair_stats_[index(m, m, f)].add(self);
      for (SbsId n : graph.gamma(m)) {
        if (placed.cached(n, f)) continue;
        const double r = edges.reward(EdgeKey{m, n, f});
        check_bound(r, pair_bound(m, n), "edge");
        pair_stats_[index(m, n, f)].add(r);
      }
    }
  }
}

}  // namespace mamab
