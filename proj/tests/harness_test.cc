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

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mamab/env.h"
#include "mamab/optimizers.h"
#include "test_util.h"

namespace mamab {
namespace {

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("MAMAB_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

ExperimentConfig tiny(const std::string& learner, std::int64_t slots) {
  ExperimentConfig c;
  c.learner = learner;
  c.T_total = slots;
  c.M = 2;
  c.U = 6;
  c.F = 6;
  c.S = 2;
  c.threads = 1;
  c.oracle_restarts = 20;
  return c;
}

ExperimentConfig trace_config(const std::string& learner) {
  ExperimentConfig c;
  c.learner = learner;
  c.T_total = 0;
  c.M = 3;
  c.S = 3;
  c.threads = 1;
  c.workload.mode = WorkloadMode::kTrace;
  c.workload.trace_path = data_path("tiny_ratings.dat");
  return c;
}

TEST(RunExperiment, OneSlotSmokeRun) {
  ExperimentConfig c = tiny("lru", 1);
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.replications.size(), 1u);
  ASSERT_EQ(r.replications[0].slots.size(), 1u);
  const SlotRecord& s = r.replications[0].slots[0];
  EXPECT_EQ(s.slot, 1);
  EXPECT_EQ(s.requests, 6);
  EXPECT_NEAR(s.delay + s.reward, 6 * r.replications[0].core_delay, 1e-9);
  EXPECT_DOUBLE_EQ(s.avg_delay, s.delay);
}

TEST(RunExperiment, IdenticalConfigsGiveIdenticalSeries) {
  for (const std::string& name : known_learners()) {
    if (name.starts_with("modified_")) continue;
    ExperimentConfig c = tiny(name, 60);
    c.replications = 2;
    const ExperimentResult a = run_experiment(c);
    const ExperimentResult b = run_experiment(c);
    for (int r = 0; r < 2; ++r) {
      ASSERT_EQ(a.replications[r].slots.size(), b.replications[r].slots.size());
      for (size_t t = 0; t < a.replications[r].slots.size(); ++t) {
        const SlotRecord& x = a.replications[r].slots[t];
        const SlotRecord& y = b.replications[r].slots[t];
        ASSERT_EQ(x.delay, y.delay) << name;
        ASSERT_EQ(x.regret, y.regret) << name;
        ASSERT_EQ(x.initial_phase, y.initial_phase) << name;
      }
    }
  }
}

TEST(RunExperiment, ThreadCountDoesNotChangeResults) {
  ExperimentConfig c = tiny("edge_v2", 80);
  c.replications = 4;
  const ExperimentResult one = run_experiment(c);
  c.threads = 3;
  const ExperimentResult many = run_experiment(c);
  for (int r = 0; r < 4; ++r) {
    for (size_t t = 0; t < 80; ++t) {
      ASSERT_EQ(one.replications[r].slots[t].delay,
                many.replications[r].slots[t].delay);
    }
  }
}

TEST(Regret, OracleLearnerHasZeroRegret) {
  const ExperimentResult r = run_experiment(tiny("oracle_ca", 50));
  for (const SlotRecord& s : r.replications[0].slots) {
    EXPECT_EQ(s.regret, 0.0);
    EXPECT_FALSE(s.initial_phase);
  }
}

TEST(Regret, NonDecreasingWhenOracleIsExact) {
  ExperimentConfig c = tiny("random", 300);
  c.U = 4;
  c.F = 4;
  c.S = 1;
  c.oracle_restarts = 50;
  const ExperimentResult r = run_experiment(c);
  double prev = 0.0;
  for (const SlotRecord& s : r.replications[0].slots) {
    EXPECT_GE(s.regret, prev - 1e-12);
    prev = s.regret;
  }
  const std::vector<double> curve =
      compute_regret(r.replications[0], *r.replications[0].oracle_value);
  for (size_t t = 0; t < curve.size(); ++t) {
    EXPECT_DOUBLE_EQ(curve[t], r.replications[0].slots[t].regret);
  }
}

TEST(Regret, UniformRandomGrowsAtTheAnalyticRate) {
  ExperimentConfig c = tiny("random", 20000);
  c.U = 4;
  c.F = 4;
  c.S = 1;
  c.sbs_positions = {{40, 50}, {60, 50}};
  c.user_positions = {{45, 50}, {55, 50}, {20, 50}, {80, 52}};
  c.oracle_restarts = 50;
  const ExperimentResult r = run_experiment(c);
  const ReplicationResult& rep = r.replications[0];

  // Rebuild the instance the harness used and enumerate every placement.
  const ReplicationSeeds seeds = replication_seeds(c, 0);
  const Network net = testing::make_network(c.sbs_positions, c.user_positions,
                                            c.l_c, c.region);
  ASSERT_DOUBLE_EQ(net.delays.core_delay(), rep.core_delay);
  ZipfSpec spec;
  const PreferenceMatrix prefs = zipf_preferences(4, 4, spec, seeds.preferences);
  const DeliveryScore score = expected_reward_score(prefs, net.index, net.delays);
  double best = -1.0, sum = 0.0, sq = 0.0;
  int n = 0;
  for (FileId a = 0; a < 4; ++a) {
    for (FileId b = 0; b < 4; ++b) {
      CacheMatrix m(2, 4, 1);
      m.set(0, a, true);
      m.set(1, b, true);
      const double v = testing::reference_expected_reward(net, m, prefs);
      best = std::max(best, v);
      sum += v;
      sq += v * v;
      ++n;
    }
  }
  ASSERT_NEAR(*rep.oracle_value, best, 1e-12);
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  const double slope = rep.slots.back().regret / 20000.0;
  EXPECT_NEAR(slope, best - mean, 3.0 * sd / std::sqrt(20000.0));
}

TEST(Aggregate, SingleReplicationIsItself) {
  const ExperimentResult r = run_experiment(tiny("lfu", 30));
  const auto rows = aggregate_replications(r.replications);
  ASSERT_EQ(rows.size(), 30u);
  for (size_t t = 0; t < 30; ++t) {
    EXPECT_EQ(rows[t].mean_delay, r.replications[0].slots[t].delay);
    EXPECT_EQ(rows[t].std_delay, 0.0);
  }
}

TEST(Aggregate, TwoConstantSeries) {
  ReplicationResult a, b;
  for (int t = 1; t <= 3; ++t) {
    SlotRecord s;
    s.slot = t;
    s.delay = 2.0;
    a.slots.push_back(s);
    s.delay = 4.0;
    b.slots.push_back(s);
  }
  const auto rows = aggregate_replications({a, b});
  for (const auto& row : rows) {
    EXPECT_DOUBLE_EQ(row.mean_delay, 3.0);
    EXPECT_DOUBLE_EQ(row.std_delay, std::sqrt(2.0));
  }
  b.slots.pop_back();
  EXPECT_THROW(aggregate_replications({a, b}), Error);
}

TEST(Seeds, RequestsOnlySharesGeometryAcrossReplications) {
  ExperimentConfig c = tiny("lfu", 1);
  c.randomize = Randomize::kRequestsOnly;
  const ReplicationSeeds a = replication_seeds(c, 0);
  const ReplicationSeeds b = replication_seeds(c, 1);
  EXPECT_EQ(a.topology, b.topology);
  EXPECT_EQ(a.preferences, b.preferences);
  EXPECT_NE(a.requests, b.requests);
  EXPECT_NE(a.policy, b.policy);
  c.randomize = Randomize::kPlacementAndRequests;
  EXPECT_NE(replication_seeds(c, 0).topology, replication_seeds(c, 1).topology);
}

TEST(Seeds, LearnerDoesNotChangeWorkload) {
  // Paired comparisons rely on this.
  ExperimentConfig a = tiny("lfu", 40), b = tiny("edge_v2", 40);
  const ExperimentResult ra = run_experiment(a), rb = run_experiment(b);
  EXPECT_EQ(ra.replications[0].oracle_value, rb.replications[0].oracle_value);
  for (size_t t = 0; t < 40; ++t) {
    EXPECT_EQ(ra.replications[0].slots[t].requests,
              rb.replications[0].slots[t].requests);
  }
}

TEST(TraceMode, RunsWithPerRequestAverageAndNoOracle) {
  for (const char* name :
       {"modified_edge", "modified_distributed", "modified_edge_eps", "lru",
        "lfu", "cucb", "oracle_ca", "oracle_greedy"}) {
    ExperimentConfig c = trace_config(name);
    const ExperimentResult r = run_experiment(c);
    const ReplicationResult& rep = r.replications[0];
    EXPECT_FALSE(rep.oracle_value.has_value());
    EXPECT_EQ(rep.slots.size(), 12u) << name;
    double delay = 0.0;
    std::int64_t n = 0;
    for (const SlotRecord& s : rep.slots) {
      delay += s.delay;
      n += s.requests;
      EXPECT_DOUBLE_EQ(s.avg_delay, n ? delay / n : 0.0);
    }
    EXPECT_THROW(compute_regret(rep, 0.0), Error);
  }
}

TEST(TraceMode, ClairvoyantBeatsLearners) {
  const ExperimentResult o = run_experiment(trace_config("oracle_ca"));
  const ExperimentResult l = run_experiment(trace_config("lru"));
  EXPECT_LE(o.replications[0].slots.back().avg_delay,
            l.replications[0].slots.back().avg_delay);
}

TEST(TraceMode, PerSlotMobilityRedrawsUsers) {
  ExperimentConfig c = trace_config("modified_edge");
  c.workload.mobility = Mobility::kPerSlot;
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  ASSERT_EQ(a.replications[0].slots.size(), 12u);
  for (size_t t = 0; t < 12; ++t) {
    EXPECT_EQ(a.replications[0].slots[t].delay, b.replications[0].slots[t].delay);
  }
  c.learner = "agent_sbs";
  EXPECT_THROW(c.validate(), Error);
}

TEST(TraceMode, HorizonBeyondTraceIsAnError) {
  ExperimentConfig c = trace_config("lru");
  c.T_total = 13;
  EXPECT_THROW(run_experiment(c), Error);
}

TEST(Validate, NamesTheOffendingKey) {
  ExperimentConfig c;
  c.S = -1;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("S"), std::string::npos);
  }
  c = ExperimentConfig{};
  c.learner = "nope";
  EXPECT_THROW(c.validate(), Error);
  c = ExperimentConfig{};
  c.workload.mode = WorkloadMode::kTrace;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Validate, DefaultScenario) {
  const ExperimentConfig c;
  EXPECT_EQ(c.M, 6);
  EXPECT_EQ(c.U, 50);
  EXPECT_EQ(c.F, 100);
  EXPECT_EQ(c.S, 10);
  EXPECT_EQ(c.l_c, 50.0);
  EXPECT_EQ(c.T_total, 25000);
  EXPECT_EQ(c.radio.bandwidth_hz, 10e6);
  EXPECT_EQ(c.radio.power_watts, 1.0);
  EXPECT_EQ(c.radio.noise_watts, 1.0);
  EXPECT_EQ(c.radio.path_loss_exponent, 4.0);
  EXPECT_NO_THROW(c.validate());
}

TEST(MakePolicy, EveryKnownLearnerBuilds) {
  SplitMix64 rng(1);
  const Network net = testing::random_covered_network(rng, 3, 8, 50.0, 100.0);
  const PreferenceMatrix p = testing::random_prefs(rng, 8, 5);
  ExperimentConfig c = tiny("lfu", 1);
  c.S = 2;
  for (const std::string& name : known_learners()) {
    auto policy = make_policy(c, name, net, 5, &p, 0);
    ASSERT_NE(policy, nullptr) << name;
    EXPECT_FALSE(policy->name().empty());
  }
  EXPECT_THROW(make_policy(c, "bogus", net, 5, &p, 0), Error);
}

}  // namespace
}  // namespace mamab
