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

#include "mamab/metrics_io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mamab/config.h"

namespace mamab {
namespace {

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::string& path, const std::string& what,
                const auto& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  writer(out);
  out.flush();
  if (!out) throw Error("failed writing " + what + " to " + path);
}

}  // namespace

void write_metrics_csv(std::ostream& out, const ExperimentResult& result) {
  out << "slot,replication,delay,reward,requests,avg_delay,regret,"
         "sampled_regret,initial_phase\n";
  for (const ReplicationResult& rep : result.replications) {
    const bool regret = rep.oracle_value.has_value();
    for (const SlotRecord& s : rep.slots) {
      out << s.slot << ',' << rep.replication << ',' << format_double(s.delay)
          << ',' << format_double(s.reward) << ',' << s.requests << ','
          << format_double(s.avg_delay) << ',';
      if (regret) {
        out << format_double(s.regret) << ',' << format_double(s.sampled_regret);
      } else {
        out << ',';
      }
      out << ',' << (s.initial_phase ? 1 : 0) << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregateRow>& rows,
                         bool with_regret) {
  out << "slot,mean_delay,std_delay,mean_reward,std_reward,mean_requests,"
         "std_requests,mean_avg_delay,std_avg_delay,mean_regret,std_regret,"
         "mean_sampled_regret,std_sampled_regret\n";
  for (const AggregateRow& r : rows) {
    out << r.slot << ',' << format_double(r.mean_delay) << ','
        << format_double(r.std_delay) << ',' << format_double(r.mean_reward)
        << ',' << format_double(r.std_reward) << ','
        << format_double(r.mean_requests) << ','
        << format_double(r.std_requests) << ','
        << format_double(r.mean_avg_delay) << ','
        << format_double(r.std_avg_delay) << ',';
    if (with_regret) {
      out << format_double(r.mean_regret) << ',' << format_double(r.std_regret)
          << ',' << format_double(r.mean_sampled_regret) << ','
          << format_double(r.std_sampled_regret);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

void write_manifest(std::ostream& out, const ExperimentConfig& config,
                    const std::vector<std::string>& outputs) {
  out << emit_config(config);
  out << "\n[manifest]\nversion = \"" << kVersion << "\"\n";
  out << "outputs = [";
  for (size_t i = 0; i < outputs.size(); ++i) {
    out << (i ? ", " : "") << '"' << outputs[i] << '"';
  }
  out << "]\n";
  for (int r = 0; r < config.replications; ++r) {
    const ReplicationSeeds s = replication_seeds(config, r);
    out << "\n[[manifest.seeds]]\nreplication = " << r << "\n"
        << "topology = \"" << hex(s.topology) << "\"\n"
        << "preferences = \"" << hex(s.preferences) << "\"\n"
        << "requests = \"" << hex(s.requests) << "\"\n"
        << "policy = \"" << hex(s.policy) << "\"\n"
        << "oracle = \"" << hex(s.oracle) << "\"\n";
  }
}

std::vector<std::string> emit_results(const ExperimentResult& result,
                                      const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  const std::string metrics = (base / "metrics.csv").string();
  const std::string aggregate = (base / "aggregate.csv").string();
  const std::string manifest = (base / "manifest.toml").string();
  const bool regret = result.config.stationary();

  write_file(metrics, "metrics", [&](std::ostream& o) {
    write_metrics_csv(o, result);
  });
  write_file(aggregate, "aggregate", [&](std::ostream& o) {
    write_aggregate_csv(o, aggregate_replications(result.replications), regret);
  });
  write_file(manifest, "manifest", [&](std::ostream& o) {
    write_manifest(o, result.config,
                   {"metrics.csv", "aggregate.csv", "manifest.toml"});
  });
  return {metrics, aggregate, manifest};
}

}  // namespace mamab
