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

// Result files. Doubles are written in shortest round-trip form so the CSVs
// are loss-free and byte-stable. Regret columns are left empty when the run
// has no stationary oracle.

#ifndef MAMAB_METRICS_IO_H_
#define MAMAB_METRICS_IO_H_

#include <ostream>
#include <string>
#include <vector>

#include "mamab/format.h"
#include "mamab/harness.h"

namespace mamab {

inline constexpr const char* kVersion = "0.1.0";

// slot,replication,delay,reward,requests,avg_delay,regret,sampled_regret,
// initial_phase
void write_metrics_csv(std::ostream& out, const ExperimentResult& result);

// slot then mean_/std_ pairs of delay, reward, requests, avg_delay, regret,
// sampled_regret.
void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregateRow>& rows,
                         bool with_regret);

// Config echo followed by a [manifest] table with version, per-replication
// seeds and output file names.
void write_manifest(std::ostream& out, const ExperimentConfig& config,
                    const std::vector<std::string>& outputs);

// Writes metrics.csv, aggregate.csv and manifest.toml into `dir` (created
// if missing). Returns the written paths.
std::vector<std::string> emit_results(const ExperimentResult& result,
                                      const std::string& dir);

}  // namespace mamab

#endif  // MAMAB_METRICS_IO_H_
