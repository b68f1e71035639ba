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

// TOML experiment configuration. Missing keys take defaults, unknown keys
// are rejected, and emit_config output parses back to an identical config.
//
//   seed, replications, T_total, metric_mode, randomize, learner, epsilon,
//   log_variant, M, U, F, S, l_c, region, core_delay, threads
//   [radio]      W, P, noise, alpha
//   [workload]   mode, zipf_set, shared_preference, trace_path,
//                trace_format, slot_length_s, mobility, user_cap,
//                dense_files
//   [topology]   sbs_positions, user_positions  (lists of [x, y])
//   [oracle]     restarts
//   [ca]         max_rounds
//   [bruteforce] cap
//   [manifest]   ignored (written by the CLI next to results)

#ifndef MAMAB_CONFIG_H_
#define MAMAB_CONFIG_H_

#include <string>

#include "mamab/harness.h"

namespace mamab {

ExperimentConfig parse_config_string(const std::string& text,
                                     const std::string& source = "<string>");
ExperimentConfig parse_config_file(const std::string& path);

// Full config as TOML, every key written explicitly.
std::string emit_config(const ExperimentConfig& config);

// Applies "dotted.key=value" (value in TOML syntax; bare words are taken as
// strings) and re-validates.
ExperimentConfig apply_override(const ExperimentConfig& config,
                                const std::string& assignment);

std::string to_string(MetricMode mode);
std::string to_string(Randomize mode);
std::string to_string(WorkloadMode mode);
std::string to_string(Mobility mode);
std::string to_string(LogBase base);
std::string to_string(TraceFormat format);

}  // namespace mamab

#endif  // MAMAB_CONFIG_H_
