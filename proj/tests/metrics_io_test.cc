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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "mamab/config.h"

namespace mamab {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small(std::int64_t slots, int reps) {
  ExperimentConfig c;
  c.learner = "lfu";
  c.M = 2;
  c.U = 5;
  c.F = 6;
  c.S = 2;
  c.T_total = slots;
  c.replications = reps;
  c.threads = 1;
  c.oracle_restarts = 5;
  return c;
}

TEST(MetricsCsv, OneSlotGivesHeaderAndOneRow) {
  std::ostringstream out;
  write_metrics_csv(out, run_experiment(small(1, 1)));
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0],
            "slot,replication,delay,reward,requests,avg_delay,regret,"
            "sampled_regret,initial_phase");
  EXPECT_EQ(lines[1].substr(0, 4), "1,0,");
}

TEST(MetricsCsv, RowCountIsSlotsTimesReplications) {
  std::ostringstream out;
  write_metrics_csv(out, run_experiment(small(7, 3)));
  EXPECT_EQ(lines_of(out.str()).size(), 1u + 21u);
}

TEST(MetricsCsv, TraceModeLeavesRegretEmpty) {
  ExperimentConfig c = small(0, 1);
  const char* dir = std::getenv("MAMAB_TEST_DATA");
  c.workload.mode = WorkloadMode::kTrace;
  c.workload.trace_path = std::string(dir ? dir : "tests/data") + "/tiny_ratings.dat";
  c.learner = "modified_edge";
  const ExperimentResult r = run_experiment(c);
  std::ostringstream out;
  write_metrics_csv(out, r);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 13u);
  for (size_t i = 1; i < lines.size(); ++i) {
    EXPECT_NE(lines[i].find(",,,0"), std::string::npos) << lines[i];
  }
  std::ostringstream agg;
  write_aggregate_csv(agg, aggregate_replications(r.replications), false);
  const auto alines = lines_of(agg.str());
  EXPECT_EQ(alines[1].substr(alines[1].size() - 3), ",,,");
}

TEST(MetricsCsv, FieldsParseBackExactly) {
  const ExperimentResult r = run_experiment(small(5, 1));
  std::ostringstream out;
  write_metrics_csv(out, r);
  const auto lines = lines_of(out.str());
  for (size_t t = 0; t < 5; ++t) {
    std::istringstream row(lines[t + 1]);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(row, field, ',')) f.push_back(field);
    ASSERT_EQ(f.size(), 9u);
    EXPECT_EQ(std::stod(f[2]), r.replications[0].slots[t].delay);
    EXPECT_EQ(std::stod(f[6]), r.replications[0].slots[t].regret);
  }
}

TEST(EmitResults, RerunIsByteIdentical) {
  const auto base = std::filesystem::temp_directory_path() / "mamab_emit_test";
  std::filesystem::remove_all(base);
  const ExperimentConfig c = small(20, 2);
  const auto a = emit_results(run_experiment(c), (base / "a").string());
  const auto b = emit_results(run_experiment(c), (base / "b").string());
  ASSERT_EQ(a.size(), 3u);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_FALSE(slurp(a[i]).empty());
    EXPECT_EQ(slurp(a[i]), slurp(b[i])) << a[i];
  }
  // The manifest is itself a loadable config.
  EXPECT_EQ(parse_config_file(a[2]), c);
  std::filesystem::remove_all(base);
}

TEST(Manifest, ListsOutputsAndSeeds) {
  std::ostringstream out;
  write_manifest(out, small(3, 2), {"metrics.csv"});
  const std::string s = out.str();
  EXPECT_NE(s.find("[manifest]"), std::string::npos);
  EXPECT_NE(s.find("outputs = [\"metrics.csv\"]"), std::string::npos);
  EXPECT_NE(s.find("replication = 1"), std::string::npos);
  EXPECT_NE(s.find(kVersion), std::string::npos);
}

}  // namespace
}  // namespace mamab
