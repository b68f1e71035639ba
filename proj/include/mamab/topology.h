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

// Geometric network model: SBS/user placement, neighbor relations ordered by
// distance, the coordination graph between SBSs with overlapping coverage,
// and the noise-limited transmission delay of every SBS-user link.

#ifndef MAMAB_TOPOLOGY_H_
#define MAMAB_TOPOLOGY_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "mamab/cache_matrix.h"

namespace mamab {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct Topology {
  std::vector<Point> sbs_positions;
  std::vector<Point> user_positions;
  double comm_radius = 50.0;  // l_c, meters
  double region_size = 100.0;

  int num_sbs() const { return static_cast<int>(sbs_positions.size()); }
  int num_users() const { return static_cast<int>(user_positions.size()); }

  // Throws unless M >= 1, U >= 1, comm_radius > 0 and every point is finite
  // and inside [0, region_size]^2.
  void validate() const;
};

// Uniform placement of `num_sbs` SBSs and `num_users` users in the square.
Topology random_topology(int num_sbs, int num_users, double comm_radius,
                         double region_size, std::uint64_t seed);

// Redraws user positions only; SBS positions and radius are kept.
Topology redraw_users(const Topology& base, std::uint64_t seed);

class NeighborIndex {
 public:
  NeighborIndex() = default;
  NeighborIndex(int num_sbs, int num_users);

  int num_sbs() const { return num_sbs_; }
  int num_users() const { return num_users_; }

  // SBSs within range of u, nearest first; equal distances by ascending id.
  std::span<const SbsId> sbs_of_user(UserId u) const {
    return neighbors_of_user_[u];
  }
  // Users within range of m, ascending id.
  std::span<const UserId> users_of_sbs(SbsId m) const {
    return neighbors_of_sbs_[m];
  }
  // 0-based position of m in sbs_of_user(u), or -1 when not a neighbor.
  int rank(UserId u, SbsId m) const {
    return rank_[static_cast<size_t>(u) * num_sbs_ + m];
  }
  bool linked(UserId u, SbsId m) const { return rank(u, m) >= 0; }
  // SBSs serving u ahead of m (the prefix before m); empty if m is nearest
  // or not a neighbor.
  std::span<const SbsId> closer_set(UserId u, SbsId m) const;

 private:
  friend NeighborIndex build_neighbor_index(const Topology& topology);

  int num_sbs_ = 0;
  int num_users_ = 0;
  std::vector<std::vector<SbsId>> neighbors_of_user_;
  std::vector<std::vector<UserId>> neighbors_of_sbs_;
  std::vector<int> rank_;
};

NeighborIndex build_neighbor_index(const Topology& topology);

struct RadioParams {
  double bandwidth_hz = 10e6;
  double power_watts = 1.0;
  double noise_watts = 1.0;
  double path_loss_exponent = 4.0;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

// Delay in seconds to deliver one unit-size file over a link of the given
// length: 1 / (W log2(1 + P l^-alpha / sigma^2)).
double link_delay(const RadioParams& radio, double distance_m);

class DelayModel {
 public:
  DelayModel() = default;

  // Link delay, or nullopt for pairs without a link.
  std::optional<double> delay(SbsId m, UserId u) const {
    return delay_[static_cast<size_t>(m) * num_users_ + u];
  }
  // Caller must know the pair is linked.
  double linked_delay(SbsId m, UserId u) const {
    return *delay_[static_cast<size_t>(m) * num_users_ + u];
  }
  double core_delay() const { return core_delay_; }
  double max_link_delay() const { return max_link_delay_; }
  const RadioParams& radio() const { return radio_; }

 private:
  friend DelayModel compute_delay_model(const Topology&, const NeighborIndex&,
                                        const RadioParams&,
                                        std::optional<double>);

  int num_users_ = 0;
  std::vector<std::optional<double>> delay_;
  double core_delay_ = 0.0;
  double max_link_delay_ = 0.0;
  RadioParams radio_;
};

inline constexpr double kCoreDelayFactor = 3.0;

// Core delay defaults to kCoreDelayFactor times the largest link delay in
// the network. Throws when no link exists and no override is given.
DelayModel compute_delay_model(const Topology& topology,
                               const NeighborIndex& index,
                               const RadioParams& radio,
                               std::optional<double> core_delay = std::nullopt);

class CoordinationGraph {
 public:
  CoordinationGraph() = default;

  int num_sbs() const { return static_cast<int>(gamma_.size()); }
  // Graph neighbors of m, ascending id, excluding m itself.
  std::span<const SbsId> gamma(SbsId m) const { return gamma_[m]; }
  bool adjacent(SbsId m, SbsId n) const;
  // Unordered edges (m <= n), self edges included, lexicographic order.
  std::vector<std::pair<SbsId, SbsId>> edges() const;
  int num_edges() const;

 private:
  friend CoordinationGraph build_coordination_graph(const NeighborIndex&);
  std::vector<std::vector<SbsId>> gamma_;
  std::vector<std::uint8_t> adjacency_;
};

CoordinationGraph build_coordination_graph(const NeighborIndex& index);

// Everything derived from a placement; immutable once built.
struct Network {
  Topology topology;
  NeighborIndex index;
  DelayModel delays;
  CoordinationGraph graph;

  int num_sbs() const { return topology.num_sbs(); }
  int num_users() const { return topology.num_users(); }
};

Network build_network(Topology topology, const RadioParams& radio,
                      std::optional<double> core_delay = std::nullopt);

// CSV export for plotting: "sbs_id,x,y" and "user_id,x,y".
void write_sbs_csv(std::ostream& out, const Topology& topology);
void write_users_csv(std::ostream& out, const Topology& topology);

}  // namespace mamab

#endif  // MAMAB_TOPOLOGY_H_
