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

#include "mamab/topology.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mamab/format.h"
#include "mamab/random.h"

namespace mamab {
namespace {

// Co-located endpoints would give an infinite SNR and zero delay.
constexpr double kMinLinkDistance = 1e-6;

Point random_point(SplitMix64& rng, double region) {
  const double x = uniform01(rng) * region;
  const double y = uniform01(rng) * region;
  return Point{x, y};
}

void check_point(const Point& p, double region, const char* what, int id) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 ||
      p.y < 0.0 || p.x > region || p.y > region) {
    throw Error(std::string("topology: ") + what + " " + std::to_string(id) +
                " lies outside the " + std::to_string(region) +
                " m square region");
  }
}

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Topology::validate() const {
  if (sbs_positions.empty()) throw Error("topology: M must be >= 1");
  if (user_positions.empty()) throw Error("topology: U must be >= 1");
  if (!(comm_radius > 0.0) || !std::isfinite(comm_radius)) {
    throw Error("topology: comm_radius must be > 0");
  }
  if (!(region_size > 0.0) || !std::isfinite(region_size)) {
    throw Error("topology: region_size must be > 0");
  }
  for (int m = 0; m < num_sbs(); ++m) {
    check_point(sbs_positions[m], region_size, "SBS", m);
  }
  for (int u = 0; u < num_users(); ++u) {
    check_point(user_positions[u], region_size, "user", u);
  }
}

Topology random_topology(int num_sbs, int num_users, double comm_radius,
                         double region_size, std::uint64_t seed) {
  Topology t;
  t.comm_radius = comm_radius;
  t.region_size = region_size;
  SplitMix64 sbs_rng = make_stream(seed, Stream::kTopology, {0});
  SplitMix64 user_rng = make_stream(seed, Stream::kTopology, {1});
  t.sbs_positions.reserve(num_sbs);
  for (int m = 0; m < num_sbs; ++m) {
    t.sbs_positions.push_back(random_point(sbs_rng, region_size));
  }
  t.user_positions.reserve(num_users);
  for (int u = 0; u < num_users; ++u) {
    t.user_positions.push_back(random_point(user_rng, region_size));
  }
  t.validate();
  return t;
}

Topology redraw_users(const Topology& base, std::uint64_t seed) {
  Topology t = base;
  SplitMix64 rng = make_stream(seed, Stream::kMobility, {});
  for (Point& p : t.user_positions) p = random_point(rng, t.region_size);
  return t;
}

NeighborIndex::NeighborIndex(int num_sbs, int num_users)
    : num_sbs_(num_sbs),
      num_users_(num_users),
      neighbors_of_user_(num_users),
      neighbors_of_sbs_(num_sbs),
      rank_(static_cast<size_t>(num_sbs) * num_users, -1) {}

std::span<const SbsId> NeighborIndex::closer_set(UserId u, SbsId m) const {
  const int r = rank(u, m);
  if (r <= 0) return {};
  return std::span<const SbsId>(neighbors_of_user_[u]).first(r);
}

NeighborIndex build_neighbor_index(const Topology& topology) {
  topology.validate();
  const int num_sbs = topology.num_sbs();
  const int num_users = topology.num_users();
  NeighborIndex index(num_sbs, num_users);
  std::vector<std::pair<double, SbsId>> in_range;
  for (UserId u = 0; u < num_users; ++u) {
    in_range.clear();
    for (SbsId m = 0; m < num_sbs; ++m) {
      const double l =
          distance(topology.sbs_positions[m], topology.user_positions[u]);
      if (l <= topology.comm_radius) in_range.emplace_back(l, m);
    }
    // Pair ordering sorts by distance, then by SBS id.
    std::sort(in_range.begin(), in_range.end());
    auto& sorted = index.neighbors_of_user_[u];
    for (const auto& [l, m] : in_range) {
      index.rank_[static_cast<size_t>(u) * num_sbs + m] =
          static_cast<int>(sorted.size());
      sorted.push_back(m);
      index.neighbors_of_sbs_[m].push_back(u);
    }
  }
  return index;
}

double link_delay(const RadioParams& radio, double distance_m) {
  const double l = std::max(distance_m, kMinLinkDistance);
  const double snr =
      radio.power_watts * std::pow(l, -radio.path_loss_exponent) /
      radio.noise_watts;
  return 1.0 / (radio.bandwidth_hz * std::log2(1.0 + snr));
}

DelayModel compute_delay_model(const Topology& topology,
                               const NeighborIndex& index,
                               const RadioParams& radio,
                               std::optional<double> core_delay) {
  if (!(radio.bandwidth_hz > 0.0) || !(radio.power_watts > 0.0) ||
      !(radio.noise_watts > 0.0) || !(radio.path_loss_exponent > 2.0)) {
    throw Error(
        "delay model: requires W > 0, P > 0, noise > 0 and alpha > 2");
  }
  DelayModel model;
  model.radio_ = radio;
  model.num_users_ = topology.num_users();
  model.delay_.assign(
      static_cast<size_t>(topology.num_sbs()) * topology.num_users(),
      std::nullopt);
  bool any_link = false;
  for (UserId u = 0; u < topology.num_users(); ++u) {
    for (SbsId m : index.sbs_of_user(u)) {
      const double d = link_delay(
          radio, distance(topology.sbs_positions[m], topology.user_positions[u]));
      model.delay_[static_cast<size_t>(m) * model.num_users_ + u] = d;
      model.max_link_delay_ = std::max(model.max_link_delay_, d);
      any_link = true;
    }
  }
  if (core_delay.has_value()) {
    if (!(*core_delay > 0.0)) throw Error("delay model: core delay must be > 0");
    model.core_delay_ = *core_delay;
  } else {
    if (!any_link) {
      throw Error(
          "delay model: no SBS-user link exists, so the default core delay "
          "(3 x max link delay) is undefined; set core_delay explicitly");
    }
    model.core_delay_ = kCoreDelayFactor * model.max_link_delay_;
  }
  return model;
}

bool CoordinationGraph::adjacent(SbsId m, SbsId n) const {
  return adjacency_[static_cast<size_t>(m) * gamma_.size() + n] != 0;
}

std::vector<std::pair<SbsId, SbsId>> CoordinationGraph::edges() const {
  std::vector<std::pair<SbsId, SbsId>> out;
  const int n_sbs = num_sbs();
  for (SbsId m = 0; m < n_sbs; ++m) {
    for (SbsId n = m; n < n_sbs; ++n) {
      if (adjacent(m, n)) out.emplace_back(m, n);
    }
  }
  return out;
}

int CoordinationGraph::num_edges() const {
  int directed = 0;
  for (const auto& g : gamma_) directed += static_cast<int>(g.size());
  return num_sbs() + directed / 2;
}

CoordinationGraph build_coordination_graph(const NeighborIndex& index) {
  const int num_sbs = index.num_sbs();
  CoordinationGraph graph;
  graph.gamma_.resize(num_sbs);
  graph.adjacency_.assign(static_cast<size_t>(num_sbs) * num_sbs, 0);
  for (SbsId m = 0; m < num_sbs; ++m) {
    graph.adjacency_[static_cast<size_t>(m) * num_sbs + m] = 1;
  }
  for (UserId u = 0; u < index.num_users(); ++u) {
    auto sbs = index.sbs_of_user(u);
    for (size_t i = 0; i < sbs.size(); ++i) {
      for (size_t j = i + 1; j < sbs.size(); ++j) {
        graph.adjacency_[static_cast<size_t>(sbs[i]) * num_sbs + sbs[j]] = 1;
        graph.adjacency_[static_cast<size_t>(sbs[j]) * num_sbs + sbs[i]] = 1;
      }
    }
  }
  for (SbsId m = 0; m < num_sbs; ++m) {
    for (SbsId n = 0; n < num_sbs; ++n) {
      if (n != m && graph.adjacent(m, n)) graph.gamma_[m].push_back(n);
    }
  }
  return graph;
}

Network build_network(Topology topology, const RadioParams& radio,
                      std::optional<double> core_delay) {
  Network net;
  net.index = build_neighbor_index(topology);
  net.delays = compute_delay_model(topology, net.index, radio, core_delay);
  net.graph = build_coordination_graph(net.index);
  net.topology = std::move(topology);
  return net;
}

void write_sbs_csv(std::ostream& out, const Topology& topology) {
  out << "sbs_id,x,y\n";
  for (int m = 0; m < topology.num_sbs(); ++m) {
    out << m << ',' << format_double(topology.sbs_positions[m].x) << ','
        << format_double(topology.sbs_positions[m].y) << '\n';
  }
}

void write_users_csv(std::ostream& out, const Topology& topology) {
  out << "user_id,x,y\n";
  for (int u = 0; u < topology.num_users(); ++u) {
    out << u << ',' << format_double(topology.user_positions[u].x) << ','
        << format_double(topology.user_positions[u].y) << '\n';
  }
}

}  // namespace mamab
