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

// Reference policies: replacement caches (LFU, LRU), a popularity-UCB
// predictor (CUCB), uniform random placement, and oracles that know the
// demand.

#ifndef MAMAB_BASELINES_H_
#define MAMAB_BASELINES_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mamab/cache_matrix.h"
#include "mamab/env.h"
#include "mamab/optimizers.h"
#include "mamab/policy.h"
#include "mamab/random.h"

namespace mamab {

// Shared machinery of LFU and LRU. Requests of a slot are replayed in
// ascending (user, file) order; each SBS sees the requests of its neighbor
// users. A hit updates the file's priority; a miss inserts the file,
// evicting the cached file of lowest priority (ties to the lower file id)
// when the cache is full.
class ReplacementPolicy : public Policy {
 public:
  ReplacementPolicy(int num_sbs, int num_files, int cache_size);

  CacheMatrix decide(const SlotContext& ctx) override;
  void observe(const SlotContext& ctx, const ServiceOutcome& outcome,
               const EdgeRewardTable& edges,
               std::span<const FileId> new_files) override;

  // Replays one request at SBS m; exposed for tests.
  void on_request(SbsId m, FileId f);
  // Seeds the cache contents (before any request).
  void preload(SbsId m, std::span<const FileId> files);
  const CacheMatrix& cache() const { return cache_; }

 protected:
  // Priority after a request to f at m; `stamp` is a global sequence number.
  virtual void touch(SbsId m, FileId f, std::int64_t stamp) = 0;
  virtual double priority(SbsId m, FileId f) const = 0;

  int num_files_;
  CacheMatrix cache_;

 private:
  std::int64_t sequence_ = 0;
};

// Least frequently used: lifetime request counts per (SBS, file), counted
// on every neighbor request.
class LfuPolicy : public ReplacementPolicy {
 public:
  LfuPolicy(int num_sbs, int num_files, int cache_size);
  std::string name() const override { return "lfu"; }
  std::int64_t count(SbsId m, FileId f) const {
    return counts_[static_cast<size_t>(m) * num_files_ + f];
  }

 protected:
  void touch(SbsId m, FileId f, std::int64_t stamp) override;
  double priority(SbsId m, FileId f) const override;

 private:
  std::vector<std::int64_t> counts_;
};

// Least recently used: last-request sequence number per (SBS, file).
class LruPolicy : public ReplacementPolicy {
 public:
  LruPolicy(int num_sbs, int num_files, int cache_size);
  std::string name() const override { return "lru"; }

 protected:
  void touch(SbsId m, FileId f, std::int64_t stamp) override;
  double priority(SbsId m, FileId f) const override;

 private:
  std::vector<std::int64_t> stamps_;
};

// Popularity UCB. Each SBS estimates the per-slot probability that one of
// its neighbor users requests f, p̂ = requests / (slots * |U_m|), and plays
// index p̂ + sqrt(3 ln t / (2 slots)). All neighbor demand of m is treated as
// one aggregate user with weight |U_m| * index, reachable from m and from
// every graph neighbor n at the mean delay over the users they share.
// Placement by coordinate ascent from a random start.
class CucbPolicy : public Policy {
 public:
  CucbPolicy(const Network& net, int num_files, int cache_size,
             std::uint64_t seed, int max_rounds = kDefaultMaxRounds);

  std::string name() const override { return "cucb"; }
  CacheMatrix decide(const SlotContext& ctx) override;
  void observe(const SlotContext& ctx, const ServiceOutcome& outcome,
               const EdgeRewardTable& edges,
               std::span<const FileId> new_files) override;

  double index(SbsId m, FileId f, std::int64_t t) const;
  std::int64_t requests(SbsId m, FileId f) const {
    return counts_[static_cast<size_t>(m) * num_files_ + f];
  }
  std::int64_t slots_observed() const { return slots_; }

 private:
  int num_sbs_;
  int num_files_;
  int cache_size_;
  int max_rounds_;
  SplitMix64 rng_;
  std::vector<std::int64_t> counts_;
  std::vector<int> users_;  // |U_m|
  std::int64_t slots_ = 0;
};

// Aggregate demand points used by CUCB: one per SBS with at least one user.
// Returns (points, owner SBS of each point).
std::vector<DeliveryScore::DemandPoint> aggregate_demand_points(
    const Network& net, std::vector<SbsId>* owners);

// Fresh uniform S-subset per SBS every slot.
class RandomPolicy : public Policy {
 public:
  RandomPolicy(int num_sbs, int num_files, int cache_size, std::uint64_t seed);
  std::string name() const override { return "random"; }
  CacheMatrix decide(const SlotContext& ctx) override;
  void observe(const SlotContext&, const ServiceOutcome&,
               const EdgeRewardTable&, std::span<const FileId>) override {}

 private:
  int num_sbs_;
  int num_files_;
  int cache_size_;
  SplitMix64 rng_;
};

// Plays one precomputed placement every slot.
class FixedPolicy : public Policy {
 public:
  FixedPolicy(std::string name, CacheMatrix placement)
      : name_(std::move(name)), placement_(std::move(placement)) {}
  std::string name() const override { return name_; }
  CacheMatrix decide(const SlotContext&) override { return placement_; }
  void observe(const SlotContext&, const ServiceOutcome&,
               const EdgeRewardTable&, std::span<const FileId>) override {}

 private:
  std::string name_;
  CacheMatrix placement_;
};

// Optimizes each slot's realized requests (clairvoyant), by coordinate
// ascent with restarts or by greedy. Used where no stationary preference
// matrix exists.
class ClairvoyantPolicy : public Policy {
 public:
  enum class Method { kCoordinateAscent, kGreedy };

  ClairvoyantPolicy(std::string name, Method method, int num_files,
                    int cache_size, int restarts, std::uint64_t seed,
                    int max_rounds = kDefaultMaxRounds);
  std::string name() const override { return name_; }
  CacheMatrix decide(const SlotContext& ctx) override;
  void observe(const SlotContext&, const ServiceOutcome&,
               const EdgeRewardTable&, std::span<const FileId>) override {}

 private:
  std::string name_;
  Method method_;
  int num_files_;
  int cache_size_;
  int restarts_;
  std::uint64_t seed_;
  int max_rounds_;
};

}  // namespace mamab

#endif  // MAMAB_BASELINES_H_
