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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mamab/demand.h"
#include "mamab/env.h"
#include "mamab/harness.h"
#include "mamab/metrics_io.h"
#include "mamab/optimizers.h"
#include "mamab/random.h"
#include "mamab/topology.h"

namespace mamab {
namespace {

constexpr double kConservationRelTol = 1e-9;
constexpr double kHalf = 0.5;
constexpr double kHalfAbsTol = 1e-12;
constexpr double kTailTolerance = 0.10;
constexpr double kFidelitySigmas = 3.0;
constexpr double kFidelityFraction = 0.95;
constexpr int kSeeds = 30;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, double limit_s,
            const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  if (limit_s > 0 && secs > limit_s) {
    v.pass = false;
    v.detail += " [over time limit]";
  }
  char timing[64];
  std::snprintf(timing, sizeof(timing), " (%.1f s, limit %.0f s)", secs, limit_s);
  std::printf("%s %s: %s%s\n", v.pass ? "PASS" : "FAIL", name.c_str(),
              v.detail.c_str(), limit_s > 0 ? timing : "");
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Random topology with at least one SBS-user link, so d0 is defined.
Network linked_network(SplitMix64& rng, int M, int U) {
  for (;;) {
    Topology t = random_topology(M, U, 50.0, 100.0, rng());
    for (const Point& u : t.user_positions) {
      for (const Point& m : t.sbs_positions) {
        if (distance(u, m) <= t.comm_radius) {
          return build_network(std::move(t), RadioParams{});
        }
      }
    }
  }
}

bool close_rel(double a, double b) {
  return std::abs(a - b) <= kConservationRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

Verdict conservation() {
  SplitMix64 rng(derive_seed({2026, 1}));
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int M = 1 + uniform_index(rng, 5);
    const int U = 1 + uniform_index(rng, 20);
    const int F = 1 + uniform_index(rng, 30);
    const int S = uniform_index(rng, F + 1);
    const Network net = linked_network(rng, M, U);
    CacheMatrix cache(M, F, S);
    for (SbsId m = 0; m < M; ++m) {
      for (FileId f : sample_without_replacement(rng, F, uniform_index(rng, S + 1))) {
        cache.set(m, f, true);
      }
    }
    RequestBatch batch;
    batch.requests.resize(U);
    for (auto& q : batch.requests) {
      q = sample_without_replacement(rng, F, uniform_index(rng, F + 1));
      std::sort(q.begin(), q.end());
    }
    const ServiceOutcome out = serve_requests(cache, batch, net.index, net.delays);
    const double lhs = out.slot_delay + out.total_reward;
    const double rhs = out.num_requests() * net.delays.core_delay();
    double sbs_sum = 0.0;
    for (double r : out.sbs_file_reward) sbs_sum += r;
    const double edge_sum = assign_edge_rewards(out, net.index).total();
    worst = std::max({worst, std::abs(lhs - rhs) / std::max(1.0, rhs),
                      std::abs(edge_sum - sbs_sum) / std::max(1.0, sbs_sum)});
    if (!close_rel(lhs, rhs) || !close_rel(edge_sum, sbs_sum) ||
        !close_rel(sbs_sum, out.total_reward)) {
      ++bad;
    }
  }
  return {bad == 0, fmt("1000 triples, %d violations, worst rel err %.2e", bad, worst)};
}

struct SmallInstance {
  int M, F, S;
  DeliveryScore score;
};

SmallInstance small_instance(SplitMix64& rng) {
  const int M = 1 + uniform_index(rng, 3);
  const int U = 1 + uniform_index(rng, 8);
  const int F = 1 + uniform_index(rng, 6);
  const int S = 1 + uniform_index(rng, 2);
  const Network net = linked_network(rng, M, U);
  const PreferenceMatrix prefs = zipf_preferences(U, F, ZipfSpec{}, rng());
  return {M, F, S, expected_reward_score(prefs, net.index, net.delays)};
}

Verdict half_optimality(bool greedy) {
  SplitMix64 rng(derive_seed({2026, greedy ? 3u : 2u}));
  int bad = 0;
  double worst = 1.0;
  for (int i = 0; i < 1000; ++i) {
    const SmallInstance in = small_instance(rng);
    const double best = in.score.total(
        brute_force_placement(in.score, in.M, in.F, in.S));
    double got;
    if (greedy) {
      got = in.score.total(greedy_placement(in.score, in.M, in.F, in.S));
    } else {
      const CacheMatrix start = random_placement(in.score, in.M, in.F, in.S, rng);
      got = in.score.total(coordinate_ascent(in.score, start).cache);
    }
    if (best > 0) worst = std::min(worst, got / best);
    if (got < kHalf * best - kHalfAbsTol) ++bad;
  }
  return {bad == 0, fmt("1000 instances, %d below half, worst ratio %.4f", bad, worst)};
}

ExperimentConfig desk(const std::string& learner) {
  ExperimentConfig c;
  c.learner = learner;
  c.M = 3;
  c.U = 12;
  c.F = 20;
  c.S = 3;
  c.T_total = 5000;
  c.replications = kSeeds;
  c.threads = 0;
  return c;
}

// Per learner: mean over seeds of final avg delay, last-1000-slot delay and
// final regret.
struct DeskStats {
  double avg_delay = 0, tail_delay = 0, regret = 0;
};

std::map<std::string, DeskStats>& desk_cache() {
  static std::map<std::string, DeskStats> cache;
  return cache;
}

const DeskStats& desk_stats(const std::string& learner) {
  auto& cache = desk_cache();
  if (auto it = cache.find(learner); it != cache.end()) return it->second;
  const ExperimentResult r = run_experiment(desk(learner));
  DeskStats s;
  for (const ReplicationResult& rep : r.replications) {
    s.avg_delay += rep.slots.back().avg_delay;
    s.regret += rep.slots.back().regret;
    double tail = 0.0;
    for (size_t t = rep.slots.size() - 1000; t < rep.slots.size(); ++t) {
      tail += rep.slots[t].delay;
    }
    s.tail_delay += tail / 1000.0;
  }
  const double n = static_cast<double>(r.replications.size());
  s.avg_delay /= n;
  s.regret /= n;
  s.tail_delay /= n;
  return cache.emplace(learner, s).first->second;
}

Verdict lemma2() {
  std::string detail;
  bool pass = true;
  for (const char* learner : {"agent_sbs", "agent_user"}) {
    ExperimentConfig c;
    c.learner = learner;
    c.M = 2;
    c.U = 6;
    c.F = 8;
    c.S = 2;
    c.T_total = 10000;
    c.replications = kSeeds;
    c.threads = 0;
    const ExperimentResult r = run_experiment(c);
    double w[3] = {0, 0, 0};
    const int Ts[3] = {1250, 2500, 5000};
    for (const ReplicationResult& rep : r.replications) {
      for (int i = 0; i < 3; ++i) {
        w[i] += rep.slots[2 * Ts[i] - 1].regret - rep.slots[Ts[i] - 1].regret;
      }
    }
    for (double& x : w) x /= kSeeds;
    const bool ok = w[1] <= w[0] && w[2] <= w[1];
    pass = pass && ok;
    detail += fmt("%s windows %.2f, %.2f, %.2f%s; ", learner, w[0], w[1], w[2],
                  ok ? "" : " (increasing)");
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

Verdict fig4_ordering() {
  const DeskStats& oracle = desk_stats("oracle_ca");
  const DeskStats& edge = desk_stats("edge_v2");
  const DeskStats& dist = desk_stats("distributed_v2");
  const DeskStats& lfu = desk_stats("lfu");
  const DeskStats& lru = desk_stats("lru");
  const bool order = oracle.avg_delay <= edge.avg_delay &&
                     edge.avg_delay <= dist.avg_delay &&
                     dist.avg_delay <= lfu.avg_delay &&
                     dist.avg_delay <= lru.avg_delay;
  const double tail_ratio = edge.tail_delay / oracle.tail_delay;
  const bool tail = tail_ratio <= 1.0 + kTailTolerance;
  std::string detail = fmt(
      "avg delay oracle_ca %.4f, edge_v2 %.4f, distributed_v2 %.4f, lfu %.4f, "
      "lru %.4f; edge_v2 last-1000 / oracle = %.4f",
      oracle.avg_delay, edge.avg_delay, dist.avg_delay, lfu.avg_delay,
      lru.avg_delay, tail_ratio);
  if (!order) detail += " [ordering violated]";
  if (!tail) detail += " [tail gap over 10%]";
  return {order && tail, detail};
}

Verdict v2_improvement() {
  bool pass = true;
  std::string detail;
  for (const char* base : {"distributed", "agent_sbs", "agent_user", "edge"}) {
    const double v1 = desk_stats(base).regret;
    const double v2 = desk_stats(std::string(base) + "_v2").regret;
    pass = pass && v2 <= v1;
    detail += fmt("%s %.1f -> %.1f; ", base, v1, v2);
  }
  detail.resize(detail.size() - 2);
  return {pass, "final regret v1 -> v2: " + detail};
}

Verdict workload_fidelity() {
  const int U = 10, F = 50, N = 100000;
  const PreferenceMatrix prefs =
      zipf_preferences(U, F, ZipfSpec{}, derive_seed({2026, 4}));
  const std::uint64_t stream = derive_seed({2026, 5});
  std::vector<double> count(F, 0.0);
  for (int t = 1; t <= N; ++t) {
    const RequestBatch b = sample_stationary_requests(prefs, t, stream);
    for (const auto& q : b.requests) {
      for (FileId f : q) count[f] += 1.0;
    }
  }
  int within = 0;
  for (FileId f = 0; f < F; ++f) {
    double mean = 0.0, var = 0.0;
    for (UserId u = 0; u < U; ++u) {
      const double p = prefs.prob(u, f);
      mean += N * p;
      var += N * p * (1.0 - p);
    }
    if (std::abs(count[f] - mean) <= kFidelitySigmas * std::sqrt(var)) ++within;
  }
  const double frac = static_cast<double>(within) / F;
  return {frac >= kFidelityFraction,
          fmt("%d of %d files within 3 sd over 1e5 slots (%d users)", within, F, U)};
}

std::string movielens_path() {
  if (const char* env = std::getenv("MOVIELENS_1M_RATINGS")) return env;
  return std::string(MAMAB_SOURCE_DIR) + "/data/ml-1m/ratings.dat";
}

Verdict trace_ingestion() {
  const std::string path = movielens_path();
  if (!std::filesystem::exists(path)) {
    return {false, "MovieLens-1M ratings not found at " + path +
                       " (set MOVIELENS_1M_RATINGS)"};
  }
  const TraceWorkload a = ingest_trace(path, TraceOptions{});
  const TraceWorkload b = ingest_trace(path, TraceOptions{});
  std::ostringstream sa, sb;
  write_slotted_trace(sa, a);
  write_slotted_trace(sb, b);
  const bool same = sa.str() == sb.str();
  const bool ok = a.num_users == 6040 && a.num_files == 3952 &&
                  a.num_slots() == 1039 && same;
  return {ok, fmt("users %d, files %d, slots %d, repeat %s", a.num_users,
                  a.num_files, a.num_slots(), same ? "identical" : "differs")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const auto base = std::filesystem::temp_directory_path() / "mamab_acceptance_det";
  std::filesystem::remove_all(base);
  std::vector<ExperimentConfig> configs;
  for (const std::string& learner : known_learners()) {
    ExperimentConfig c;
    c.learner = learner;
    c.M = 3;
    c.U = 10;
    c.F = 12;
    c.S = 2;
    c.T_total = 200;
    c.replications = 3;
    c.threads = 0;
    c.oracle_restarts = 20;
    if (learner.starts_with("modified_")) {
      const char* data = std::getenv("MAMAB_TEST_DATA");
      c.workload.mode = WorkloadMode::kTrace;
      c.workload.trace_path =
          std::string(data ? data : MAMAB_SOURCE_DIR "/tests/data") +
          "/tiny_ratings.dat";
      c.T_total = 0;
    }
    configs.push_back(c);
  }
  int differing = 0;
  for (size_t i = 0; i < configs.size(); ++i) {
    const auto a = emit_results(run_experiment(configs[i]),
                                (base / std::to_string(i) / "a").string());
    const auto b = emit_results(run_experiment(configs[i]),
                                (base / std::to_string(i) / "b").string());
    for (size_t k = 0; k < a.size(); ++k) {
      if (slurp(a[k]) != slurp(b[k])) ++differing;
    }
  }
  std::filesystem::remove_all(base);
  return {differing == 0, fmt("%zu learners x 3 files, %d differ",
                              configs.size(), differing)};
}

}  // namespace
}  // namespace mamab

int main() {
  using mamab::report;
  report("conservation", 10, mamab::conservation);
  report("ca_half_optimal", 60, [] { return mamab::half_optimality(false); });
  report("greedy_half_optimal", 60, [] { return mamab::half_optimality(true); });
  report("log_regret_windows", 300, mamab::lemma2);
  report("desk_ordering", 600, mamab::fig4_ordering);
  report("v2_regret_improvement", 600, mamab::v2_improvement);
  report("workload_fidelity", 0, mamab::workload_fidelity);
  report("trace_ingestion", 0, mamab::trace_ingestion);
  report("determinism", 0, mamab::determinism);
  std::printf("%d criteria failed\n", mamab::failures);
  return mamab::failures == 0 ? 0 : 1;
}
