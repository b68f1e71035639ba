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

// One slot of the environment. Each request is served by the nearest
// neighbor SBS caching the file, or by the core network at delay d0. The
// serving SBS earns reward d0 - d (delay saved versus the core), so for any
// slot the total delay plus the total reward equals requests * d0.

#ifndef MAMAB_ENV_H_
#define MAMAB_ENV_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mamab/cache_matrix.h"
#include "mamab/demand.h"
#include "mamab/optimizers.h"
#include "mamab/topology.h"

namespace mamab {

inline constexpr SbsId kCoreServer = -1;

struct ServedRequest {
  UserId user = 0;
  FileId file = 0;
  SbsId server = kCoreServer;
  double delay = 0.0;
  double reward = 0.0;  // d0 - delay, 0 when served by the core
};

struct ServiceOutcome {
  int num_sbs = 0;
  int num_files = 0;
  // Ascending (user, file).
  std::vector<ServedRequest> requests;
  double slot_delay = 0.0;
  double total_reward = 0.0;
  // r_{m,f}: dense M x F.
  std::vector<double> sbs_file_reward;

  double sbs_reward(SbsId m, FileId f) const {
    return sbs_file_reward[static_cast<size_t>(m) * num_files + f];
  }
  std::int64_t num_requests() const {
    return static_cast<std::int64_t>(requests.size());
  }
};

ServiceOutcome serve_requests(const CacheMatrix& cache,
                              const RequestBatch& batch,
                              const NeighborIndex& index,
                              const DelayModel& delays);

// Key of an edge reward. owner == other: self edge (m, m) with action (1, 1).
// owner != other: edge {owner, other} with owner caching and other not,
// i.e. joint action (1, 0) seen from the owner. These are the only joint
// actions that ever receive reward.
struct EdgeKey {
  SbsId owner = 0;
  SbsId other = 0;
  FileId file = 0;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

class EdgeRewardTable {
 public:
  void add(const EdgeKey& key, double reward) { entries_[key] += reward; }
  double reward(const EdgeKey& key) const;
  // Reward of edge (m, n) under joint action (a_m, a_n) for file f.
  double reward(SbsId m, SbsId n, bool a_m, bool a_n, FileId f) const;
  double total() const;
  const std::map<EdgeKey, double>& entries() const { return entries_; }

 private:
  std::map<EdgeKey, double> entries_;
};

// Full reward to the self edge when the server is the user's nearest SBS;
// otherwise reward / (j - 1) to each edge between the j-th nearest server and
// the j - 1 SBSs ahead of it.
EdgeRewardTable assign_edge_rewards(const ServiceOutcome& outcome,
                                    const NeighborIndex& index);

// Expected-delay objective over a set of demand points. A demand point is
// served by its candidate SBSs in order; the first one caching the file
// earns weight * (d0 - delay). With one point per user and preference
// weights this is the expected total reward; with request indicators it is
// the realized reward of a known batch.
class DeliveryScore : public ScoreFunction {
 public:
  struct DemandPoint {
    std::vector<SbsId> servers;   // serving order
    std::vector<double> savings;  // d0 - delay, aligned with servers
  };

  DeliveryScore(int num_sbs, int num_files, std::vector<DemandPoint> points);

  // weights[p][f] for each demand point.
  void set_weights(const std::vector<std::vector<double>>& weights);
  void add_weight(int point, FileId f, double w);

  Score evaluate(const CacheMatrix& cache) const override;
  void file_gains(const CacheMatrix& cache, SbsId m,
                  std::span<Score> out) const override;

  double total(const CacheMatrix& cache) const {
    return evaluate(cache).value;
  }
  // Reward credited to each (m, f), dense M x F.
  std::vector<double> per_sbs_file(const CacheMatrix& cache) const;

  int num_sbs() const { return num_sbs_; }
  int num_files() const { return num_files_; }

 private:
  struct Demand {
    int point;
    double weight;
  };

  int num_sbs_;
  int num_files_;
  std::vector<DemandPoint> points_;
  // rank_[p * M + m] = position of m in points_[p].servers, or -1.
  std::vector<int> rank_;
  std::vector<std::vector<Demand>> by_file_;
};

// One demand point per user with its neighbor list and link savings.
std::vector<DeliveryScore::DemandPoint> user_demand_points(
    const NeighborIndex& index, const DelayModel& delays);

// Expected reward under user preferences.
DeliveryScore expected_reward_score(const PreferenceMatrix& prefs,
                                    const NeighborIndex& index,
                                    const DelayModel& delays);

// Realized reward of a known batch (clairvoyant objective).
DeliveryScore realized_reward_score(const RequestBatch& batch, int num_files,
                                    const NeighborIndex& index,
                                    const DelayModel& delays);

struct ExpectedReward {
  double total = 0.0;
  std::vector<double> per_sbs_file;  // dense M x F
};

ExpectedReward expected_reward(const CacheMatrix& cache,
                               const PreferenceMatrix& prefs,
                               const NeighborIndex& index,
                               const DelayModel& delays);

}  // namespace mamab

#endif  // MAMAB_ENV_H_
