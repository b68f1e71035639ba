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

#include "mamab/env.h"

#include <string>

namespace mamab {

ServiceOutcome serve_requests(const CacheMatrix& cache,
                              const RequestBatch& batch,
                              const NeighborIndex& index,
                              const DelayModel& delays) {
  if (static_cast<int>(batch.requests.size()) != index.num_users()) {
    throw Error("serve_requests: batch has " +
                std::to_string(batch.requests.size()) + " users, network has " +
                std::to_string(index.num_users()));
  }
  ServiceOutcome out;
  out.num_sbs = cache.num_sbs();
  out.num_files = cache.num_files();
  out.sbs_file_reward.assign(
      static_cast<size_t>(out.num_sbs) * out.num_files, 0.0);
  const double d0 = delays.core_delay();
  for (UserId u = 0; u < index.num_users(); ++u) {
    for (FileId f : batch.requests[u]) {
      if (f < 0 || f >= cache.num_files()) {
        throw Error("serve_requests: file " + std::to_string(f) +
                    " outside the catalog");
      }
      ServedRequest r{u, f, kCoreServer, d0, 0.0};
      for (SbsId m : index.sbs_of_user(u)) {
        if (cache.cached(m, f)) {
          r.server = m;
          r.delay = delays.linked_delay(m, u);
          r.reward = d0 - r.delay;
          out.sbs_file_reward[static_cast<size_t>(m) * out.num_files + f] +=
              r.reward;
          break;
        }
      }
      out.slot_delay += r.delay;
      out.total_reward += r.reward;
      out.requests.push_back(r);
    }
  }
  return out;
}

double EdgeRewardTable::reward(const EdgeKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

double EdgeRewardTable::reward(SbsId m, SbsId n, bool a_m, bool a_n,
                               FileId f) const {
  if (m == n) return (a_m && a_n) ? reward(EdgeKey{m, m, f}) : 0.0;
  if (a_m && !a_n) return reward(EdgeKey{m, n, f});
  if (!a_m && a_n) return reward(EdgeKey{n, m, f});
  return 0.0;
}

double EdgeRewardTable::total() const {
  double sum = 0.0;
  for (const auto& [key, r] : entries_) sum += r;
  return sum;
}

EdgeRewardTable assign_edge_rewards(const ServiceOutcome& outcome,
                                    const NeighborIndex& index) {
  EdgeRewardTable table;
  for (const ServedRequest& r : outcome.requests) {
    if (r.server == kCoreServer) continue;
    auto closer = index.closer_set(r.user, r.server);
    if (closer.empty()) {
      table.add(EdgeKey{r.server, r.server, r.file}, r.reward);
      continue;
    }
    const double share = r.reward / static_cast<double>(closer.size());
    for (SbsId n : closer) table.add(EdgeKey{r.server, n, r.file}, share);
  }
  return table;
}

// ---------------------------------------------------------------------------
// DeliveryScore

DeliveryScore::DeliveryScore(int num_sbs, int num_files,
                             std::vector<DemandPoint> points)
    : num_sbs_(num_sbs),
      num_files_(num_files),
      points_(std::move(points)),
      rank_(points_.size() * static_cast<size_t>(num_sbs), -1),
      by_file_(num_files) {
  for (size_t p = 0; p < points_.size(); ++p) {
    const auto& pt = points_[p];
    if (pt.servers.size() != pt.savings.size()) {
      throw Error("DeliveryScore: servers and savings differ in length");
    }
    for (size_t i = 0; i < pt.servers.size(); ++i) {
      rank_[p * num_sbs_ + pt.servers[i]] = static_cast<int>(i);
    }
  }
}

void DeliveryScore::set_weights(
    const std::vector<std::vector<double>>& weights) {
  if (weights.size() != points_.size()) {
    throw Error("DeliveryScore: weight rows must match demand points");
  }
  for (auto& list : by_file_) list.clear();
  for (size_t p = 0; p < weights.size(); ++p) {
    for (FileId f = 0; f < num_files_; ++f) {
      if (weights[p][f] != 0.0) {
        by_file_[f].push_back(Demand{static_cast<int>(p), weights[p][f]});
      }
    }
  }
}

void DeliveryScore::add_weight(int point, FileId f, double w) {
  by_file_[f].push_back(Demand{point, w});
}

Score DeliveryScore::evaluate(const CacheMatrix& cache) const {
  double total = 0.0;
  for (FileId f = 0; f < num_files_; ++f) {
    for (const Demand& d : by_file_[f]) {
      const auto& pt = points_[d.point];
      for (size_t i = 0; i < pt.servers.size(); ++i) {
        if (cache.cached(pt.servers[i], f)) {
          total += d.weight * pt.savings[i];
          break;
        }
      }
    }
  }
  return Score::finite(total);
}

std::vector<double> DeliveryScore::per_sbs_file(const CacheMatrix& cache) const {
  std::vector<double> out(static_cast<size_t>(num_sbs_) * num_files_, 0.0);
  for (FileId f = 0; f < num_files_; ++f) {
    for (const Demand& d : by_file_[f]) {
      const auto& pt = points_[d.point];
      for (size_t i = 0; i < pt.servers.size(); ++i) {
        if (cache.cached(pt.servers[i], f)) {
          out[static_cast<size_t>(pt.servers[i]) * num_files_ + f] +=
              d.weight * pt.savings[i];
          break;
        }
      }
    }
  }
  return out;
}

void DeliveryScore::file_gains(const CacheMatrix& cache, SbsId m,
                               std::span<Score> out) const {
  for (FileId f = 0; f < num_files_; ++f) {
    double gain = 0.0;
    for (const Demand& d : by_file_[f]) {
      const int pos = rank_[static_cast<size_t>(d.point) * num_sbs_ + m];
      if (pos < 0) continue;
      const auto& pt = points_[d.point];
      bool shadowed = false;
      for (int i = 0; i < pos; ++i) {
        if (cache.cached(pt.servers[i], f)) {
          shadowed = true;
          break;
        }
      }
      if (shadowed) continue;
      double fallback = 0.0;
      for (size_t i = pos + 1; i < pt.servers.size(); ++i) {
        if (cache.cached(pt.servers[i], f)) {
          fallback = pt.savings[i];
          break;
        }
      }
      gain += d.weight * (pt.savings[pos] - fallback);
    }
    out[f] = Score::finite(gain);
  }
}

std::vector<DeliveryScore::DemandPoint> user_demand_points(
    const NeighborIndex& index, const DelayModel& delays) {
  std::vector<DeliveryScore::DemandPoint> points(index.num_users());
  const double d0 = delays.core_delay();
  for (UserId u = 0; u < index.num_users(); ++u) {
    for (SbsId m : index.sbs_of_user(u)) {
      points[u].servers.push_back(m);
      points[u].savings.push_back(d0 - delays.linked_delay(m, u));
    }
  }
  return points;
}

DeliveryScore expected_reward_score(const PreferenceMatrix& prefs,
                                    const NeighborIndex& index,
                                    const DelayModel& delays) {
  DeliveryScore score(index.num_sbs(), prefs.num_files(),
                      user_demand_points(index, delays));
  for (UserId u = 0; u < prefs.num_users(); ++u) {
    if (index.sbs_of_user(u).empty()) continue;
    for (FileId f = 0; f < prefs.num_files(); ++f) {
      const double p = prefs.prob(u, f);
      if (p != 0.0) score.add_weight(u, f, p);
    }
  }
  return score;
}

DeliveryScore realized_reward_score(const RequestBatch& batch, int num_files,
                                    const NeighborIndex& index,
                                    const DelayModel& delays) {
  DeliveryScore score(index.num_sbs(), num_files,
                      user_demand_points(index, delays));
  for (UserId u = 0; u < static_cast<int>(batch.requests.size()); ++u) {
    if (index.sbs_of_user(u).empty()) continue;
    for (FileId f : batch.requests[u]) score.add_weight(u, f, 1.0);
  }
  return score;
}

ExpectedReward expected_reward(const CacheMatrix& cache,
                               const PreferenceMatrix& prefs,
                               const NeighborIndex& index,
                               const DelayModel& delays) {
  DeliveryScore score = expected_reward_score(prefs, index, delays);
  ExpectedReward out;
  out.per_sbs_file = score.per_sbs_file(cache);
  for (double r : out.per_sbs_file) out.total += r;
  return out;
}

}  // namespace mamab
