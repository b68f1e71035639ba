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

#include "mamab/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "mamab/baselines.h"
#include "mamab/env.h"
#include "mamab/optimizers.h"

namespace mamab {
namespace {

constexpr std::uint64_t kShared = ~std::uint64_t{0};

std::uint64_t stream_seed(std::uint64_t seed, Stream s, std::uint64_t rep) {
  return derive_seed({seed, static_cast<std::uint64_t>(s), rep});
}

struct LearnerName {
  std::string base;  // distributed, agent_sbs, agent_user, edge
  Exploration exploration = Exploration::kUcbV1;
  bool nonstationary = false;
};

std::optional<LearnerName> parse_learner(const std::string& name) {
  static const std::vector<std::string> kBases = {"distributed", "agent_sbs",
                                                  "agent_user", "edge"};
  LearnerName out;
  std::string rest = name;
  if (rest.starts_with("modified_")) {
    out.nonstationary = true;
    out.exploration = Exploration::kUcbV2;
    rest = rest.substr(9);
  }
  if (rest.ends_with("_eps")) {
    out.exploration = Exploration::kEpsilonGreedy;
    rest = rest.substr(0, rest.size() - 4);
  } else if (!out.nonstationary && rest.ends_with("_v2")) {
    out.exploration = Exploration::kUcbV2;
    rest = rest.substr(0, rest.size() - 3);
  }
  if (std::find(kBases.begin(), kBases.end(), rest) == kBases.end()) {
    return std::nullopt;
  }
  if (out.nonstationary && rest != "distributed" && rest != "edge") {
    return std::nullopt;
  }
  out.base = rest;
  return out;
}

}  // namespace

const std::vector<std::string>& known_learners() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const char* base : {"distributed", "agent_sbs", "agent_user", "edge"}) {
      names.push_back(base);
      names.push_back(std::string(base) + "_v2");
      names.push_back(std::string(base) + "_eps");
    }
    for (const char* m : {"modified_distributed", "modified_edge",
                          "modified_distributed_eps", "modified_edge_eps"}) {
      names.push_back(m);
    }
    for (const char* b : {"lfu", "lru", "cucb", "random", "oracle_ca",
                          "oracle_greedy"}) {
      names.push_back(b);
    }
    return names;
  }();
  return kNames;
}

bool is_known_learner(const std::string& name) {
  const auto& names = known_learners();
  return std::find(names.begin(), names.end(), name) != names.end();
}

MetricMode ExperimentConfig::resolved_metric() const {
  if (metric_mode != MetricMode::kAuto) return metric_mode;
  return stationary() ? MetricMode::kPerSlot : MetricMode::kPerRequest;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error("config: " + key + ": " + why);
  };
  if (replications < 1) fail("replications", "must be >= 1");
  if (stationary() && T_total < 1) fail("T_total", "must be >= 1");
  if (T_total < 0) fail("T_total", "must be >= 0");
  if (M < 1) fail("M", "must be >= 1");
  if (stationary() && U < 1) fail("U", "must be >= 1");
  if (stationary() && F < 1) fail("F", "must be >= 1");
  if (S < 0) fail("S", "must be >= 0");
  if (!(l_c > 0.0) || !std::isfinite(l_c)) fail("l_c", "must be > 0");
  if (!(region > 0.0) || !std::isfinite(region)) fail("region", "must be > 0");
  if (core_delay && !(*core_delay > 0.0)) fail("core_delay", "must be > 0");
  if (!(radio.bandwidth_hz > 0.0)) fail("radio.W", "must be > 0");
  if (!(radio.power_watts > 0.0)) fail("radio.P", "must be > 0");
  if (!(radio.noise_watts > 0.0)) fail("radio.noise", "must be > 0");
  if (!(radio.path_loss_exponent > 2.0)) fail("radio.alpha", "must be > 2");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon", "must be in [0, 1]");
  if (!is_known_learner(learner)) fail("learner", "unknown learner '" + learner + "'");
  if (oracle_restarts < 1) fail("oracle.restarts", "must be >= 1");
  if (ca_max_rounds < 1) fail("ca.max_rounds", "must be >= 1");
  if (bruteforce_cap < 1) fail("bruteforce.cap", "must be >= 1");
  if (threads < 0) fail("threads", "must be >= 0");
  if (workload.zipf_set.empty()) fail("workload.zipf_set", "must not be empty");
  for (double d : workload.zipf_set) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      fail("workload.zipf_set", "exponents must be finite and >= 0");
    }
  }
  if (workload.slot_length_s < 1) fail("workload.slot_length_s", "must be >= 1");
  if (workload.user_cap < 0) fail("workload.user_cap", "must be >= 0");
  if (!stationary() && workload.trace_path.empty()) {
    fail("workload.trace_path", "required in trace mode");
  }
  if (workload.mobility == Mobility::kPerSlot) {
    if (stationary()) fail("workload.mobility", "per_slot needs a trace workload");
    if (learner.starts_with("agent_")) {
      fail("workload.mobility", "agent learners need fixed user positions");
    }
    if (!user_positions.empty()) {
      fail("workload.mobility", "per_slot conflicts with explicit user positions");
    }
  }
  if (!sbs_positions.empty() && static_cast<int>(sbs_positions.size()) != M) {
    fail("topology.sbs_positions", "needs exactly M entries");
  }
  if (!user_positions.empty() && stationary() &&
      static_cast<int>(user_positions.size()) != U) {
    fail("topology.user_positions", "needs exactly U entries");
  }
  for (const auto* list : {&sbs_positions, &user_positions}) {
    for (const Point& p : *list) {
      if (!(p.x >= 0 && p.x <= region && p.y >= 0 && p.y <= region)) {
        fail("topology", "positions must lie inside the region");
      }
    }
  }
}

ReplicationSeeds replication_seeds(const ExperimentConfig& config,
                                   int replication) {
  const std::uint64_t r = static_cast<std::uint64_t>(replication);
  const std::uint64_t geometry =
      config.randomize == Randomize::kPlacementAndRequests ? r : kShared;
  ReplicationSeeds s;
  s.topology = stream_seed(config.seed, Stream::kTopology, geometry);
  s.preferences = stream_seed(config.seed, Stream::kPreferences, geometry);
  s.oracle = stream_seed(config.seed, Stream::kOracle, geometry);
  s.requests = stream_seed(config.seed, Stream::kRequests, r);
  s.policy = stream_seed(config.seed, Stream::kPolicy, r);
  return s;
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config,
                                    const std::string& learner,
                                    const Network& net, int num_files,
                                    const PreferenceMatrix* prefs,
                                    int replication) {
  const ReplicationSeeds seeds = replication_seeds(config, replication);
  const int M = net.num_sbs();
  if (auto parsed = parse_learner(learner)) {
    LearnerOptions opts;
    opts.exploration = parsed->exploration;
    opts.nonstationary = parsed->nonstationary;
    opts.epsilon = config.epsilon;
    opts.log_base = config.log_variant;
    opts.ca_max_rounds = config.ca_max_rounds;
    opts.seed = seeds.policy;
    if (parsed->base == "distributed") {
      return std::make_unique<DistributedLearner>(net, num_files, config.S,
                                                  opts, learner);
    }
    if (parsed->base == "agent_sbs") {
      return std::make_unique<AgentSbsLearner>(net, num_files, config.S, opts,
                                               learner);
    }
    if (parsed->base == "agent_user") {
      return std::make_unique<AgentUserLearner>(net, num_files, config.S, opts,
                                                learner);
    }
    return std::make_unique<EdgeLearner>(net, num_files, config.S, opts,
                                         learner);
  }
  if (learner == "lfu") return std::make_unique<LfuPolicy>(M, num_files, config.S);
  if (learner == "lru") return std::make_unique<LruPolicy>(M, num_files, config.S);
  if (learner == "cucb") {
    return std::make_unique<CucbPolicy>(net, num_files, config.S, seeds.policy,
                                        config.ca_max_rounds);
  }
  if (learner == "random") {
    return std::make_unique<RandomPolicy>(M, num_files, config.S, seeds.policy);
  }
  if (learner == "oracle_ca" || learner == "oracle_greedy") {
    if (prefs == nullptr) {
      return std::make_unique<ClairvoyantPolicy>(
          learner,
          learner == "oracle_ca" ? ClairvoyantPolicy::Method::kCoordinateAscent
                                 : ClairvoyantPolicy::Method::kGreedy,
          num_files, config.S, config.oracle_restarts, seeds.oracle,
          config.ca_max_rounds);
    }
    DeliveryScore score = expected_reward_score(*prefs, net.index, net.delays);
    CacheMatrix placement =
        learner == "oracle_ca"
            ? oracle_coordinate_ascent(score, M, num_files, config.S,
                                       config.oracle_restarts, seeds.oracle,
                                       config.ca_max_rounds)
            : greedy_placement(score, M, num_files, config.S);
    return std::make_unique<FixedPolicy>(learner, std::move(placement));
  }
  throw Error("unknown learner '" + learner + "'");
}

namespace {

Topology base_topology(const ExperimentConfig& config, int num_users,
                       std::uint64_t seed) {
  Topology topo = random_topology(config.M, num_users, config.l_c,
                                  config.region, seed);
  if (!config.sbs_positions.empty()) topo.sbs_positions = config.sbs_positions;
  if (!config.user_positions.empty()) {
    if (static_cast<int>(config.user_positions.size()) != num_users) {
      throw Error("config: topology.user_positions: needs " +
                  std::to_string(num_users) + " entries");
    }
    topo.user_positions = config.user_positions;
  }
  topo.validate();
  return topo;
}

TraceWorkload load_trace(const ExperimentConfig& config) {
  TraceOptions opts;
  opts.slot_length_s = config.workload.slot_length_s;
  opts.user_cap = config.workload.user_cap;
  opts.dense_files = config.workload.dense_files;
  opts.format = config.workload.trace_format;
  return ingest_trace(config.workload.trace_path, opts);
}

ReplicationResult run_one(const ExperimentConfig& config, int replication,
                          const TraceWorkload* trace) {
  const ReplicationSeeds seeds = replication_seeds(config, replication);
  const bool stationary = config.stationary();
  const int num_users = stationary ? config.U : trace->num_users;
  const int num_files = stationary ? config.F : trace->num_files;
  std::int64_t horizon = config.T_total;
  if (!stationary) {
    if (horizon == 0) horizon = trace->num_slots();
    if (horizon > trace->num_slots()) {
      throw Error("config: T_total: trace has only " +
                  std::to_string(trace->num_slots()) + " slots");
    }
  }

  const Topology topo = base_topology(config, num_users, seeds.topology);
  const Network base = build_network(topo, config.radio, config.core_delay);
  const double d0 = base.delays.core_delay();

  std::optional<PreferenceMatrix> prefs;
  std::optional<DeliveryScore> expected;
  ReplicationResult result;
  result.replication = replication;
  result.learner = config.learner;
  result.core_delay = d0;
  if (stationary) {
    ZipfSpec spec;
    spec.exponent_set = config.workload.zipf_set;
    spec.shared_preference = config.workload.shared_preference;
    prefs = zipf_preferences(num_users, num_files, spec, seeds.preferences);
    expected.emplace(expected_reward_score(*prefs, base.index, base.delays));
    CacheMatrix oracle = oracle_coordinate_ascent(
        *expected, base.num_sbs(), num_files, config.S, config.oracle_restarts,
        seeds.oracle, config.ca_max_rounds);
    result.oracle_value = expected->total(oracle);
  }

  std::unique_ptr<Policy> policy =
      make_policy(config, config.learner, base, num_files,
                  prefs ? &*prefs : nullptr, replication);

  const bool moving = config.workload.mobility == Mobility::kPerSlot;
  ActiveFileSet active;
  Network moved;
  result.slots.reserve(static_cast<size_t>(horizon));
  double total_delay = 0.0;
  std::int64_t total_requests = 0;
  double regret = 0.0;
  double sampled = 0.0;
  const MetricMode metric = config.resolved_metric();

  for (std::int64_t t = 1; t <= horizon; ++t) {
    try {
      const Network* net = &base;
      if (moving) {
        Topology now = redraw_users(
            topo, derive_seed({config.seed,
                               static_cast<std::uint64_t>(Stream::kMobility),
                               static_cast<std::uint64_t>(replication),
                               static_cast<std::uint64_t>(t)}));
        moved = build_network(std::move(now), config.radio, d0);
        net = &moved;
      }
      RequestBatch sampled_batch;
      const RequestBatch* batch = nullptr;
      if (stationary) {
        sampled_batch =
            sample_stationary_requests(*prefs, static_cast<int>(t), seeds.requests);
        batch = &sampled_batch;
      } else {
        batch = &trace->slots[t - 1];
      }

      SlotContext ctx;
      ctx.slot = t;
      ctx.net = net;
      ctx.network_revision = moving ? static_cast<std::uint64_t>(t) : 0;
      ctx.clairvoyant = batch;

      const auto start = std::chrono::steady_clock::now();
      CacheMatrix cache = policy->decide(ctx);
      const auto stop = std::chrono::steady_clock::now();
      if (cache.num_sbs() != net->num_sbs() || cache.num_files() != num_files ||
          !cache.within_budget()) {
        throw Error(policy->name() + " returned an invalid placement");
      }
      const bool initial = policy->in_initial_phase();

      ServiceOutcome outcome =
          serve_requests(cache, *batch, net->index, net->delays);
      const double n = static_cast<double>(outcome.num_requests());
      const double residual =
          std::abs(outcome.slot_delay + outcome.total_reward - n * d0);
      if (residual > 1e-9 * n * d0) {
        throw Error("delay/reward conservation violated by " +
                    std::to_string(residual));
      }
      EdgeRewardTable edges = assign_edge_rewards(outcome, net->index);
      std::vector<FileId> new_files = active.absorb(*batch);
      policy->observe(ctx, outcome, edges, new_files);

      SlotRecord rec;
      rec.slot = t;
      rec.delay = outcome.slot_delay;
      rec.reward = outcome.total_reward;
      rec.requests = outcome.num_requests();
      rec.initial_phase = initial;
      rec.decision_seconds =
          std::chrono::duration<double>(stop - start).count();
      total_delay += rec.delay;
      total_requests += rec.requests;
      if (metric == MetricMode::kPerSlot) {
        rec.avg_delay = total_delay / static_cast<double>(t);
      } else {
        rec.avg_delay = total_requests > 0
                            ? total_delay / static_cast<double>(total_requests)
                            : 0.0;
      }
      if (stationary) {
        rec.expected_reward = expected->total(cache);
        const double gap = *result.oracle_value - rec.expected_reward;
        if (initial) {
          result.initial_regret += gap;
        } else {
          regret += gap;
          sampled += *result.oracle_value - rec.reward;
        }
        rec.regret = regret;
        rec.sampled_regret = sampled;
      }
      if (initial) ++result.initial_slots;
      result.slots.push_back(rec);
    } catch (const Error& e) {
      throw Error("replication " + std::to_string(replication) + ", slot " +
                  std::to_string(t) + ": " + e.what());
    }
  }
  return result;
}

}  // namespace

ReplicationResult run_replication(const ExperimentConfig& config,
                                  int replication) {
  config.validate();
  std::optional<TraceWorkload> trace;
  if (!config.stationary()) trace = load_trace(config);
  return run_one(config, replication, trace ? &*trace : nullptr);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::optional<TraceWorkload> trace;
  if (!config.stationary()) trace = load_trace(config);
  const TraceWorkload* tp = trace ? &*trace : nullptr;

  ExperimentResult out;
  out.config = config;
  out.replications.resize(config.replications);
  int workers = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.replications);

  if (workers == 1) {
    for (int r = 0; r < config.replications; ++r) {
      out.replications[r] = run_one(config, r, tp);
    }
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(config.replications);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < config.replications; r = next++) {
        try {
          out.replications[r] = run_one(config, r, tp);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<double> compute_regret(const ReplicationResult& result,
                                   double oracle_value) {
  if (!result.oracle_value) {
    throw Error("compute_regret: needs a stationary workload");
  }
  std::vector<double> curve;
  curve.reserve(result.slots.size());
  double sum = 0.0;
  for (const SlotRecord& s : result.slots) {
    if (!s.initial_phase) sum += oracle_value - s.expected_reward;
    curve.push_back(sum);
  }
  return curve;
}

std::vector<AggregateRow> aggregate_replications(
    const std::vector<ReplicationResult>& reps) {
  if (reps.empty()) return {};
  const size_t len = reps.front().slots.size();
  for (const auto& r : reps) {
    if (r.slots.size() != len) {
      throw Error("aggregate_replications: series lengths differ");
    }
  }
  const double n = static_cast<double>(reps.size());
  auto stats = [&](size_t i, auto get, double* mean, double* sd) {
    double sum = 0.0;
    for (const auto& r : reps) sum += get(r.slots[i]);
    *mean = sum / n;
    if (reps.size() < 2) {
      *sd = 0.0;
      return;
    }
    double ss = 0.0;
    for (const auto& r : reps) {
      const double d = get(r.slots[i]) - *mean;
      ss += d * d;
    }
    *sd = std::sqrt(ss / (n - 1.0));
  };
  std::vector<AggregateRow> rows(len);
  for (size_t i = 0; i < len; ++i) {
    AggregateRow& row = rows[i];
    row.slot = reps.front().slots[i].slot;
    stats(i, [](const SlotRecord& s) { return s.delay; }, &row.mean_delay,
          &row.std_delay);
    stats(i, [](const SlotRecord& s) { return s.reward; }, &row.mean_reward,
          &row.std_reward);
    stats(i, [](const SlotRecord& s) { return static_cast<double>(s.requests); },
          &row.mean_requests, &row.std_requests);
    stats(i, [](const SlotRecord& s) { return s.avg_delay; },
          &row.mean_avg_delay, &row.std_avg_delay);
    stats(i, [](const SlotRecord& s) { return s.regret; }, &row.mean_regret,
          &row.std_regret);
    stats(i, [](const SlotRecord& s) { return s.sampled_regret; },
          &row.mean_sampled_regret, &row.std_sampled_regret);
  }
  return rows;
}

}  // namespace mamab
