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

// Experiment driver: builds a network per replication, runs the slot loop
// decide -> serve -> assign edge rewards -> observe, and records metrics.

#ifndef MAMAB_HARNESS_H_
#define MAMAB_HARNESS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mamab/demand.h"
#include "mamab/learners.h"
#include "mamab/policy.h"
#include "mamab/topology.h"

namespace mamab {

enum class WorkloadMode { kZipf, kTrace };
enum class MetricMode { kAuto, kPerSlot, kPerRequest };
enum class Randomize { kPlacementAndRequests, kRequestsOnly };
enum class Mobility { kStatic, kPerSlot };

struct WorkloadConfig {
  WorkloadMode mode = WorkloadMode::kZipf;
  std::vector<double> zipf_set = kDefaultZipfSet;
  bool shared_preference = false;
  std::string trace_path;
  TraceFormat trace_format = TraceFormat::kAuto;
  std::int64_t slot_length_s = 86400;
  Mobility mobility = Mobility::kStatic;
  int user_cap = 0;
  bool dense_files = false;

  friend bool operator==(const WorkloadConfig&,
                         const WorkloadConfig&) = default;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int replications = 1;
  // 0 in trace mode: every slot of the trace.
  std::int64_t T_total = 25000;
  MetricMode metric_mode = MetricMode::kAuto;
  Randomize randomize = Randomize::kPlacementAndRequests;

  std::string learner = "edge_v2";
  double epsilon = 0.05;
  LogBase log_variant = LogBase::kNatural;

  int M = 6;
  int U = 50;  // ignored in trace mode
  int F = 100;  // ignored in trace mode
  int S = 10;
  double l_c = 50.0;
  double region = 100.0;
  std::optional<double> core_delay;
  RadioParams radio;
  WorkloadConfig workload;

  // Explicit geometry; when set, replaces random placement.
  std::vector<Point> sbs_positions;
  std::vector<Point> user_positions;

  int oracle_restarts = 300;
  int ca_max_rounds = kDefaultMaxRounds;
  std::uint64_t bruteforce_cap = 1'000'000;
  // Worker threads for replications; 0 = hardware concurrency.
  int threads = 0;

  // Throws Error naming the offending key.
  void validate() const;
  bool stationary() const { return workload.mode == WorkloadMode::kZipf; }
  MetricMode resolved_metric() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

struct SlotRecord {
  std::int64_t slot = 0;
  double delay = 0.0;
  double reward = 0.0;
  std::int64_t requests = 0;
  // Running average delay (per slot or per request, see MetricMode).
  double avg_delay = 0.0;
  // Expected reward of the placement under the preferences (stationary).
  double expected_reward = 0.0;
  // Cumulative regrets over post-initial slots (stationary only).
  double regret = 0.0;
  double sampled_regret = 0.0;
  bool initial_phase = false;
  // Wall time of decide; not exported.
  double decision_seconds = 0.0;
};

struct ReplicationResult {
  int replication = 0;
  std::string learner;
  double core_delay = 0.0;
  // Expected reward of the oracle placement (stationary only).
  std::optional<double> oracle_value;
  int initial_slots = 0;
  // Regret accumulated during initial-phase slots, reported separately.
  double initial_regret = 0.0;
  std::vector<SlotRecord> slots;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicationResult> replications;
};

// Builds the policy named in config.learner for one replication.
// `prefs` is null in trace mode.
std::unique_ptr<Policy> make_policy(const ExperimentConfig& config,
                                    const std::string& learner,
                                    const Network& net, int num_files,
                                    const PreferenceMatrix* prefs,
                                    int replication);

// All names accepted by make_policy.
const std::vector<std::string>& known_learners();
bool is_known_learner(const std::string& name);

// Runs every replication (in parallel when threads > 1); results are
// ordered by replication index and independent of the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Single replication; exposed for tests.
ReplicationResult run_replication(const ExperimentConfig& config,
                                  int replication);

// Cumulative expected-reward regret against `oracle_value` per slot,
// skipping initial-phase slots. Throws for results without expected
// rewards (trace mode).
std::vector<double> compute_regret(const ReplicationResult& result,
                                   double oracle_value);

// Pointwise mean and sample standard deviation (0 for one replication).
struct AggregateRow {
  std::int64_t slot = 0;
  double mean_delay = 0, std_delay = 0;
  double mean_reward = 0, std_reward = 0;
  double mean_requests = 0, std_requests = 0;
  double mean_avg_delay = 0, std_avg_delay = 0;
  double mean_regret = 0, std_regret = 0;
  double mean_sampled_regret = 0, std_sampled_regret = 0;
};

std::vector<AggregateRow> aggregate_replications(
    const std::vector<ReplicationResult>& reps);

// Seeds derived for replication r, for the manifest.
struct ReplicationSeeds {
  std::uint64_t topology = 0;
  std::uint64_t preferences = 0;
  std::uint64_t requests = 0;
  std::uint64_t policy = 0;
  std::uint64_t oracle = 0;
};
ReplicationSeeds replication_seeds(const ExperimentConfig& config,
                                   int replication);

}  // namespace mamab

#endif  // MAMAB_HARNESS_H_
