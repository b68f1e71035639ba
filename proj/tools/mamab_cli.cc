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

// mamab: run caching experiments and export CSV.
//
//   mamab run     --config exp.toml --out results/
//   mamab compare --config exp.toml --learners edge_v2,lfu --out results/
//   mamab sweep   --config exp.toml --sweep l_c=25,50,75 --out results/
//   mamab ingest  --trace ratings.dat --out slotted.csv

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mamab/config.h"
#include "mamab/demand.h"
#include "mamab/format.h"
#include "mamab/harness.h"
#include "mamab/metrics_io.h"

namespace {

using mamab::ExperimentConfig;
using mamab::ExperimentResult;

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::optional<std::int64_t> seed;
  std::optional<int> replications;
  std::optional<int> threads;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "TOML experiment config");
  cmd->add_option("--out", flags->out, "output directory")->required();
  cmd->add_option("--seed", flags->seed, "master seed");
  cmd->add_option("--replications", flags->replications,
                  "number of replications");
  cmd->add_option("--threads", flags->threads, "worker threads, 0 = all");
  cmd->add_option("--set", flags->overrides,
                  "config override key=value (repeatable)");
}

ExperimentConfig load_config(const CommonFlags& flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) {
    config = mamab::parse_config_file(flags.config_path);
  }
  for (const std::string& o : flags.overrides) {
    config = mamab::apply_override(config, o);
  }
  if (flags.seed) {
    config = mamab::apply_override(config, "seed=" + std::to_string(*flags.seed));
  }
  if (flags.replications) {
    config = mamab::apply_override(
        config, "replications=" + std::to_string(*flags.replications));
  }
  if (flags.threads) {
    config = mamab::apply_override(config,
                                   "threads=" + std::to_string(*flags.threads));
  }
  config.validate();
  return config;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> parse_learners(const std::string& list) {
  std::vector<std::string> names;
  for (const std::string& n : split(list, ',')) {
    if (n.empty()) throw mamab::Error("--learners: empty learner name");
    if (!mamab::is_known_learner(n)) {
      throw mamab::Error("--learners: unknown learner '" + n + "'");
    }
    names.push_back(n);
  }
  return names;
}

// Final-slot statistics across replications, for summary tables.
struct Summary {
  double mean_avg_delay = 0, std_avg_delay = 0;
  double mean_regret = 0, std_regret = 0;
  double mean_tail_delay = 0;
  bool has_regret = false;
};

Summary summarize(const ExperimentResult& result) {
  Summary s;
  const auto rows = mamab::aggregate_replications(result.replications);
  if (rows.empty()) return s;
  const mamab::AggregateRow& last = rows.back();
  s.mean_avg_delay = last.mean_avg_delay;
  s.std_avg_delay = last.std_avg_delay;
  s.has_regret = result.config.stationary();
  s.mean_regret = last.mean_regret;
  s.std_regret = last.std_regret;
  // Mean per-slot delay over the last 10% of slots.
  const size_t tail = std::max<size_t>(1, rows.size() / 10);
  double sum = 0;
  for (size_t i = rows.size() - tail; i < rows.size(); ++i) {
    sum += rows[i].mean_delay;
  }
  s.mean_tail_delay = sum / static_cast<double>(tail);
  return s;
}

void write_summary_row(std::ostream& out, const std::string& prefix,
                       const std::string& learner, const Summary& s) {
  using mamab::format_double;
  out << prefix << learner << ',' << format_double(s.mean_avg_delay) << ','
      << format_double(s.std_avg_delay) << ','
      << format_double(s.mean_tail_delay) << ',';
  if (s.has_regret) {
    out << format_double(s.mean_regret) << ',' << format_double(s.std_regret);
  } else {
    out << ',';
  }
  out << '\n';
}

const char* kSummaryColumns =
    "learner,mean_avg_delay,std_avg_delay,mean_tail_delay,mean_regret,"
    "std_regret";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mamab::Error("cannot open " + path.string() + " for writing");
  return out;
}

int cmd_run(const CommonFlags& flags, const std::string& learner) {
  ExperimentConfig config = load_config(flags);
  if (!learner.empty()) {
    config = mamab::apply_override(config, "learner=\"" + learner + "\"");
  }
  const ExperimentResult result = mamab::run_experiment(config);
  for (const std::string& p : mamab::emit_results(result, flags.out)) {
    std::cout << p << '\n';
  }
  return 0;
}

int cmd_compare(const CommonFlags& flags, const std::string& learner_list) {
  const ExperimentConfig base = load_config(flags);
  const std::vector<std::string> learners = parse_learners(learner_list);
  const std::filesystem::path out_dir(flags.out);
  std::vector<std::pair<std::string, Summary>> rows;
  // Every learner sees the same seeds, hence the same topology and requests.
  for (const std::string& name : learners) {
    ExperimentConfig config = base;
    config.learner = name;
    const ExperimentResult result = mamab::run_experiment(config);
    mamab::emit_results(result, (out_dir / name).string());
    rows.emplace_back(name, summarize(result));
    std::cerr << name << " done\n";
  }
  std::ofstream out = open_out(out_dir / "summary.csv");
  out << kSummaryColumns << '\n';
  for (const auto& [name, s] : rows) write_summary_row(out, "", name, s);
  if (!out) throw mamab::Error("failed writing " + (out_dir / "summary.csv").string());
  std::cout << (out_dir / "summary.csv").string() << '\n';
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& sweep,
              const std::string& learner_list) {
  const ExperimentConfig base = load_config(flags);
  const size_t eq = sweep.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == sweep.size()) {
    throw mamab::Error("--sweep: expected key=v1,v2,...");
  }
  const std::string key = sweep.substr(0, eq);
  const std::vector<std::string> values = split(sweep.substr(eq + 1), ',');
  const std::vector<std::string> learners =
      learner_list.empty() ? std::vector<std::string>{base.learner}
                           : parse_learners(learner_list);

  // Validate every point before spending time on any of them.
  std::vector<ExperimentConfig> points;
  for (const std::string& v : values) {
    points.push_back(mamab::apply_override(base, key + "=" + v));
  }

  const std::filesystem::path out_dir(flags.out);
  std::filesystem::create_directories(out_dir);
  std::ofstream out = open_out(out_dir / "summary.csv");
  out << key << ',' << kSummaryColumns << '\n';
  for (size_t i = 0; i < points.size(); ++i) {
    for (const std::string& name : learners) {
      ExperimentConfig config = points[i];
      config.learner = name;
      const ExperimentResult result = mamab::run_experiment(config);
      mamab::emit_results(
          result, (out_dir / (key + "=" + values[i]) / name).string());
      write_summary_row(out, values[i] + ",", name, summarize(result));
      out.flush();
      std::cerr << key << '=' << values[i] << ' ' << name << " done\n";
    }
  }
  if (!out) throw mamab::Error("failed writing " + (out_dir / "summary.csv").string());
  std::cout << (out_dir / "summary.csv").string() << '\n';
  return 0;
}

int cmd_ingest(const std::string& trace, const std::string& out_path,
               const mamab::TraceOptions& options) {
  const mamab::TraceWorkload w = mamab::ingest_trace(trace, options);
  std::ofstream out = open_out(out_path);
  mamab::write_slotted_trace(out, w);
  out.flush();
  if (!out) throw mamab::Error("failed writing " + out_path);
  std::cout << "users " << w.num_users << ", files " << w.num_files
            << ", slots " << w.num_slots() << ", events " << w.num_events
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative edge caching experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_learner;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common(run, &run_flags);
  run->add_option("--learner", run_learner, "learner (overrides config)");

  CommonFlags compare_flags;
  std::string compare_learners;
  CLI::App* compare =
      app.add_subcommand("compare", "run several learners on paired seeds");
  add_common(compare, &compare_flags);
  compare->add_option("--learners", compare_learners, "comma-separated list")
      ->required();

  CommonFlags sweep_flags;
  std::string sweep_spec;
  std::string sweep_learners;
  CLI::App* sweep =
      app.add_subcommand("sweep", "vary one config key over a list");
  add_common(sweep, &sweep_flags);
  sweep->add_option("--sweep", sweep_spec, "key=v1,v2,...")->required();
  sweep->add_option("--learners", sweep_learners, "comma-separated list");

  std::string trace_path;
  std::string ingest_out;
  std::string ingest_format = "auto";
  mamab::TraceOptions ingest_options;
  CLI::App* ingest =
      app.add_subcommand("ingest", "convert a rating trace to a slotted file");
  ingest->add_option("--trace", trace_path, "ratings file")->required();
  ingest->add_option("--out", ingest_out, "output file")->required();
  ingest->add_option("--slot-length", ingest_options.slot_length_s,
                     "slot length in seconds");
  ingest->add_option("--user-cap", ingest_options.user_cap,
                     "keep the first N users, 0 = all");
  ingest->add_flag("--dense-files", ingest_options.dense_files,
                   "remap file ids densely");
  ingest->add_option("--format", ingest_format,
                     "auto, movielens, csv or slotted");

  CLI::App* list = app.add_subcommand("learners", "list learner names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags, run_learner);
    if (*compare) return cmd_compare(compare_flags, compare_learners);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_spec, sweep_learners);
    if (*ingest) {
      const std::vector<std::pair<std::string, mamab::TraceFormat>> formats = {
          {"auto", mamab::TraceFormat::kAuto},
          {"movielens", mamab::TraceFormat::kMovieLens},
          {"csv", mamab::TraceFormat::kCsv},
          {"slotted", mamab::TraceFormat::kSlotted}};
      bool found = false;
      for (const auto& [name, f] : formats) {
        if (name == ingest_format) {
          ingest_options.format = f;
          found = true;
        }
      }
      if (!found) throw mamab::Error("--format: unknown '" + ingest_format + "'");
      if (ingest_options.slot_length_s <= 0) {
        throw mamab::Error("--slot-length: must be positive");
      }
      if (ingest_options.user_cap < 0) {
        throw mamab::Error("--user-cap: must be >= 0");
      }
      return cmd_ingest(trace_path, ingest_out, ingest_options);
    }
    if (*list) {
      for (const std::string& n : mamab::known_learners()) std::cout << n << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "mamab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
