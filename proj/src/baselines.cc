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

#include "mamab/baselines.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace mamab {

// ---------------------------------------------------------------------------
// Replacement caches

ReplacementPolicy::ReplacementPolicy(int num_sbs, int num_files,
                                     int cache_size)
    : num_files_(num_files), cache_(num_sbs, num_files, cache_size) {}

CacheMatrix ReplacementPolicy::decide(const SlotContext&) { return cache_; }

void ReplacementPolicy::preload(SbsId m, std::span<const FileId> files) {
  cache_.set_row(m, files);
}

void ReplacementPolicy::on_request(SbsId m, FileId f) {
  touch(m, f, sequence_++);
  if (cache_.cached(m, f) || cache_.cache_size() == 0) return;
  if (cache_.row_full(m)) {
    FileId victim = -1;
    double lowest = 0.0;
    for (FileId g : cache_.row_files(m)) {
      const double p = priority(m, g);
      if (victim < 0 || p < lowest) {
        victim = g;
        lowest = p;
      }
    }
    cache_.set(m, victim, false);
  }
  cache_.set(m, f, true);
}

void ReplacementPolicy::observe(const SlotContext& ctx,
                                const ServiceOutcome& outcome,
                                const EdgeRewardTable&,
                                std::span<const FileId>) {
  for (const ServedRequest& r : outcome.requests) {
    for (SbsId m : ctx.net->index.sbs_of_user(r.user)) on_request(m, r.file);
  }
}

LfuPolicy::LfuPolicy(int num_sbs, int num_files, int cache_size)
    : ReplacementPolicy(num_sbs, num_files, cache_size),
      counts_(static_cast<size_t>(num_sbs) * num_files, 0) {}

void LfuPolicy::touch(SbsId m, FileId f, std::int64_t) {
  ++counts_[static_cast<size_t>(m) * num_files_ + f];
}

double LfuPolicy::priority(SbsId m, FileId f) const {
  return static_cast<double>(count(m, f));
}

LruPolicy::LruPolicy(int num_sbs, int num_files, int cache_size)
    : ReplacementPolicy(num_sbs, num_files, cache_size),
      stamps_(static_cast<size_t>(num_sbs) * num_files, -1) {}

void LruPolicy::touch(SbsId m, FileId f, std::int64_t stamp) {
  stamps_[static_cast<size_t>(m) * num_files_ + f] = stamp;
}

double LruPolicy::priority(SbsId m, FileId f) const {
  return static_cast<double>(stamps_[static_cast<size_t>(m) * num_files_ + f]);
}

// ---------------------------------------------------------------------------
// CUCB

std::vector<DeliveryScore::DemandPoint> aggregate_demand_points(
    const Network& net, std::vector<SbsId>* owners) {
  std::vector<DeliveryScore::DemandPoint> points;
  owners->clear();
  const double d0 = net.delays.core_delay();
  for (SbsId m = 0; m < net.num_sbs(); ++m) {
    auto users = net.index.users_of_sbs(m);
    if (users.empty()) continue;
    DeliveryScore::DemandPoint p;
    double own = 0.0;
    for (UserId u : users) own += net.delays.linked_delay(m, u);
    p.servers.push_back(m);
    p.savings.push_back(d0 - own / static_cast<double>(users.size()));
    // Graph neighbors in order of mean delay over the shared users.
    std::vector<std::pair<double, SbsId>> others;
    for (SbsId n : net.graph.gamma(m)) {
      double sum = 0.0;
      int shared = 0;
      for (UserId u : users) {
        if (net.index.linked(u, n)) {
          sum += net.delays.linked_delay(n, u);
          ++shared;
        }
      }
      if (shared > 0) others.emplace_back(sum / shared, n);
    }
    std::sort(others.begin(), others.end());
    for (const auto& [delay, n] : others) {
      p.servers.push_back(n);
      p.savings.push_back(d0 - delay);
    }
    points.push_back(std::move(p));
    owners->push_back(m);
  }
  return points;
}

CucbPolicy::CucbPolicy(const Network& net, int num_files, int cache_size,
                       std::uint64_t seed, int max_rounds)
    : num_sbs_(net.num_sbs()),
      num_files_(num_files),
      cache_size_(cache_size),
      max_rounds_(max_rounds),
      rng_(make_stream(seed, Stream::kPolicy, {})),
      counts_(static_cast<size_t>(net.num_sbs()) * num_files, 0),
      users_(net.num_sbs(), 0) {
  for (SbsId m = 0; m < num_sbs_; ++m) {
    users_[m] = static_cast<int>(net.index.users_of_sbs(m).size());
  }
}

double CucbPolicy::index(SbsId m, FileId f, std::int64_t t) const {
  if (slots_ == 0) return 1.0;
  const double users = static_cast<double>(users_[m]);
  const double p_hat =
      users > 0 ? static_cast<double>(requests(m, f)) /
                      (static_cast<double>(slots_) * users)
                : 0.0;
  return p_hat + std::sqrt(3.0 * std::log(static_cast<double>(t)) /
                           (2.0 * static_cast<double>(slots_)));
}

CacheMatrix CucbPolicy::decide(const SlotContext& ctx) {
  const Network& net = *ctx.net;
  for (SbsId m = 0; m < num_sbs_; ++m) {
    users_[m] = static_cast<int>(net.index.users_of_sbs(m).size());
  }
  std::vector<SbsId> owners;
  auto points = aggregate_demand_points(net, &owners);
  DeliveryScore score(num_sbs_, num_files_, std::move(points));
  for (size_t p = 0; p < owners.size(); ++p) {
    const SbsId m = owners[p];
    for (FileId f = 0; f < num_files_; ++f) {
      score.add_weight(static_cast<int>(p), f,
                       users_[m] * index(m, f, ctx.slot));
    }
  }
  CacheMatrix start =
      random_placement(num_sbs_, num_files_, cache_size_, rng_);
  return coordinate_ascent(score, start, max_rounds_).cache;
}

void CucbPolicy::observe(const SlotContext& ctx, const ServiceOutcome& outcome,
                         const EdgeRewardTable&, std::span<const FileId>) {
  for (const ServedRequest& r : outcome.requests) {
    for (SbsId m : ctx.net->index.sbs_of_user(r.user)) {
      ++counts_[static_cast<size_t>(m) * num_files_ + r.file];
    }
  }
  ++slots_;
}

// ---------------------------------------------------------------------------
// Random and oracle policies

RandomPolicy::RandomPolicy(int num_sbs, int num_files, int cache_size,
                           std::uint64_t seed)
    : num_sbs_(num_sbs),
      num_files_(num_files),
      cache_size_(cache_size),
      rng_(make_stream(seed, Stream::kPolicy, {})) {}

CacheMatrix RandomPolicy::decide(const SlotContext&) {
  return random_placement(num_sbs_, num_files_, cache_size_, rng_);
}

ClairvoyantPolicy::ClairvoyantPolicy(std::string name, Method method,
                                     int num_files, int cache_size,
                                     int restarts, std::uint64_t seed,
                                     int max_rounds)
    : name_(std::move(name)),
      method_(method),
      num_files_(num_files),
      cache_size_(cache_size),
      restarts_(restarts),
      seed_(seed),
      max_rounds_(max_rounds) {}

CacheMatrix ClairvoyantPolicy::decide(const SlotContext& ctx) {
  if (ctx.clairvoyant == nullptr) {
    throw Error(name_ + ": needs the slot's requests in advance");
  }
  const Network& net = *ctx.net;
  DeliveryScore score = realized_reward_score(*ctx.clairvoyant, num_files_,
                                              net.index, net.delays);
  if (method_ == Method::kGreedy) {
    return greedy_placement(score, net.num_sbs(), num_files_, cache_size_);
  }
  const std::uint64_t slot_seed =
      derive_seed({seed_, static_cast<std::uint64_t>(ctx.slot)});
  return oracle_coordinate_ascent(score, net.num_sbs(), num_files_,
                                  cache_size_, restarts_, slot_seed,
                                  max_rounds_);
}

}  // namespace mamab
