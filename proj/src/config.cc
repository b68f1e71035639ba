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

#include "mamab/config.h"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mamab/format.h"
#include "toml.hpp"

namespace mamab {
namespace {

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw Error("config: " + key + ": " + why);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

std::int64_t get_int(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<std::int64_t>()) return *v;
  fail(key, "expected an integer");
}

int get_int32(const toml::node& node, const std::string& key) {
  const std::int64_t v = get_int(node, key);
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    fail(key, "out of range");
  }
  return static_cast<int>(v);
}

double get_double(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<double>()) return *v;
  if (auto v = node.value_exact<std::int64_t>()) return static_cast<double>(*v);
  fail(key, "expected a number");
}

bool get_bool(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<bool>()) return *v;
  fail(key, "expected true or false");
}

std::string get_string(const toml::node& node, const std::string& key) {
  if (auto v = node.value_exact<std::string>()) return *v;
  fail(key, "expected a string");
}

template <typename E>
E get_enum(const toml::node& node, const std::string& key,
           std::initializer_list<std::pair<const char*, E>> choices) {
  const std::string s = get_string(node, key);
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (s == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  fail(key, "'" + s + "' is not one of " + allowed);
}

std::vector<double> get_doubles(const toml::node& node,
                                const std::string& key) {
  const toml::array* arr = node.as_array();
  if (arr == nullptr) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < arr->size(); ++i) {
    out.push_back(get_double(*arr->get(i), key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<Point> get_points(const toml::node& node, const std::string& key) {
  const toml::array* arr = node.as_array();
  if (arr == nullptr) fail(key, "expected an array of [x, y] pairs");
  std::vector<Point> out;
  for (size_t i = 0; i < arr->size(); ++i) {
    const std::string k = key + "[" + std::to_string(i) + "]";
    std::vector<double> xy = get_doubles(*arr->get(i), k);
    if (xy.size() != 2) fail(k, "expected [x, y]");
    out.push_back(Point{xy[0], xy[1]});
  }
  return out;
}

const toml::table& get_table(const toml::node& node, const std::string& key) {
  const toml::table* t = node.as_table();
  if (t == nullptr) fail(key, "expected a table");
  return *t;
}

constexpr std::initializer_list<std::pair<const char*, MetricMode>> kMetric = {
    {"auto", MetricMode::kAuto},
    {"per_slot", MetricMode::kPerSlot},
    {"per_request", MetricMode::kPerRequest}};
constexpr std::initializer_list<std::pair<const char*, Randomize>> kRandomize =
    {{"placement_and_requests", Randomize::kPlacementAndRequests},
     {"requests_only", Randomize::kRequestsOnly}};
constexpr std::initializer_list<std::pair<const char*, WorkloadMode>> kMode = {
    {"zipf", WorkloadMode::kZipf}, {"trace", WorkloadMode::kTrace}};
constexpr std::initializer_list<std::pair<const char*, Mobility>> kMobility = {
    {"static", Mobility::kStatic}, {"per_slot", Mobility::kPerSlot}};
constexpr std::initializer_list<std::pair<const char*, LogBase>> kLog = {
    {"natural", LogBase::kNatural}, {"log2", LogBase::kBase2}};
constexpr std::initializer_list<std::pair<const char*, TraceFormat>> kFormat = {
    {"auto", TraceFormat::kAuto},
    {"movielens", TraceFormat::kMovieLens},
    {"csv", TraceFormat::kCsv},
    {"slotted", TraceFormat::kSlotted}};

template <typename E>
std::string name_of(E value,
                    std::initializer_list<std::pair<const char*, E>> choices) {
  for (const auto& [name, v] : choices) {
    if (v == value) return name;
  }
  return "?";
}

void read_radio(const toml::table& t, RadioParams& r) {
  for (const auto& [k, node] : t) {
    const std::string key(k.str());
    const std::string path = join("radio", key);
    if (key == "W") r.bandwidth_hz = get_double(node, path);
    else if (key == "P") r.power_watts = get_double(node, path);
    else if (key == "noise") r.noise_watts = get_double(node, path);
    else if (key == "alpha") r.path_loss_exponent = get_double(node, path);
    else fail(path, "unknown key");
  }
}

void read_workload(const toml::table& t, WorkloadConfig& w) {
  for (const auto& [k, node] : t) {
    const std::string key(k.str());
    const std::string path = join("workload", key);
    if (key == "mode") w.mode = get_enum(node, path, kMode);
    else if (key == "zipf_set") w.zipf_set = get_doubles(node, path);
    else if (key == "shared_preference") w.shared_preference = get_bool(node, path);
    else if (key == "trace_path") w.trace_path = get_string(node, path);
    else if (key == "trace_format") w.trace_format = get_enum(node, path, kFormat);
    else if (key == "slot_length_s") w.slot_length_s = get_int(node, path);
    else if (key == "mobility") w.mobility = get_enum(node, path, kMobility);
    else if (key == "user_cap") w.user_cap = get_int32(node, path);
    else if (key == "dense_files") w.dense_files = get_bool(node, path);
    else fail(path, "unknown key");
  }
}

ExperimentConfig from_table(const toml::table& root) {
  ExperimentConfig c;
  for (const auto& [k, node] : root) {
    const std::string key(k.str());
    if (key == "seed") {
      const std::int64_t s = get_int(node, key);
      if (s < 0) fail(key, "must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "replications") {
      c.replications = get_int32(node, key);
    } else if (key == "T_total") {
      c.T_total = get_int(node, key);
    } else if (key == "metric_mode") {
      c.metric_mode = get_enum(node, key, kMetric);
    } else if (key == "randomize") {
      c.randomize = get_enum(node, key, kRandomize);
    } else if (key == "learner") {
      c.learner = get_string(node, key);
    } else if (key == "epsilon") {
      c.epsilon = get_double(node, key);
    } else if (key == "log_variant") {
      c.log_variant = get_enum(node, key, kLog);
    } else if (key == "M") {
      c.M = get_int32(node, key);
    } else if (key == "U") {
      c.U = get_int32(node, key);
    } else if (key == "F") {
      c.F = get_int32(node, key);
    } else if (key == "S") {
      c.S = get_int32(node, key);
    } else if (key == "l_c") {
      c.l_c = get_double(node, key);
    } else if (key == "region") {
      c.region = get_double(node, key);
    } else if (key == "core_delay") {
      c.core_delay = get_double(node, key);
    } else if (key == "threads") {
      c.threads = get_int32(node, key);
    } else if (key == "radio") {
      read_radio(get_table(node, key), c.radio);
    } else if (key == "workload") {
      read_workload(get_table(node, key), c.workload);
    } else if (key == "topology") {
      for (const auto& [k2, n2] : get_table(node, key)) {
        const std::string sub(k2.str());
        const std::string path = join(key, sub);
        if (sub == "sbs_positions") c.sbs_positions = get_points(n2, path);
        else if (sub == "user_positions") c.user_positions = get_points(n2, path);
        else fail(path, "unknown key");
      }
    } else if (key == "oracle") {
      for (const auto& [k2, n2] : get_table(node, key)) {
        const std::string path = join(key, std::string(k2.str()));
        if (k2.str() == "restarts") c.oracle_restarts = get_int32(n2, path);
        else fail(path, "unknown key");
      }
    } else if (key == "ca") {
      for (const auto& [k2, n2] : get_table(node, key)) {
        const std::string path = join(key, std::string(k2.str()));
        if (k2.str() == "max_rounds") c.ca_max_rounds = get_int32(n2, path);
        else fail(path, "unknown key");
      }
    } else if (key == "bruteforce") {
      for (const auto& [k2, n2] : get_table(node, key)) {
        const std::string path = join(key, std::string(k2.str()));
        if (k2.str() == "cap") {
          const std::int64_t cap = get_int(n2, path);
          if (cap < 1) fail(path, "must be >= 1");
          c.bruteforce_cap = static_cast<std::uint64_t>(cap);
        } else {
          fail(path, "unknown key");
        }
      }
    } else if (key == "manifest") {
      get_table(node, key);
    } else {
      fail(key, "unknown key");
    }
  }
  c.validate();
  return c;
}

toml::table parse_table(const std::string& text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << source << ":" << e.source().begin.line << ":"
        << e.source().begin.column << ": " << e.description();
    throw Error(msg.str());
  }
}

// TOML floats need a '.' or exponent; to_chars may print "10" for 10.0.
std::string toml_float(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string points(const std::vector<Point>& ps) {
  std::string out = "[";
  for (size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += "[" + toml_float(ps[i].x) + ", " + toml_float(ps[i].y) + "]";
  }
  return out + "]";
}

}  // namespace

std::string to_string(MetricMode mode) { return name_of(mode, kMetric); }
std::string to_string(Randomize mode) { return name_of(mode, kRandomize); }
std::string to_string(WorkloadMode mode) { return name_of(mode, kMode); }
std::string to_string(Mobility mode) { return name_of(mode, kMobility); }
std::string to_string(LogBase base) { return name_of(base, kLog); }
std::string to_string(TraceFormat format) { return name_of(format, kFormat); }

ExperimentConfig parse_config_string(const std::string& text,
                                     const std::string& source) {
  return from_table(parse_table(text, source));
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str(), path);
}

std::string emit_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "seed = " << c.seed << "\n"
    << "replications = " << c.replications << "\n"
    << "T_total = " << c.T_total << "\n"
    << "metric_mode = " << quote(to_string(c.metric_mode)) << "\n"
    << "randomize = " << quote(to_string(c.randomize)) << "\n"
    << "learner = " << quote(c.learner) << "\n"
    << "epsilon = " << toml_float(c.epsilon) << "\n"
    << "log_variant = " << quote(to_string(c.log_variant)) << "\n"
    << "M = " << c.M << "\n"
    << "U = " << c.U << "\n"
    << "F = " << c.F << "\n"
    << "S = " << c.S << "\n"
    << "l_c = " << toml_float(c.l_c) << "\n"
    << "region = " << toml_float(c.region) << "\n";
  if (c.core_delay) o << "core_delay = " << toml_float(*c.core_delay) << "\n";
  o << "threads = " << c.threads << "\n";
  o << "\n[radio]\n"
    << "W = " << toml_float(c.radio.bandwidth_hz) << "\n"
    << "P = " << toml_float(c.radio.power_watts) << "\n"
    << "noise = " << toml_float(c.radio.noise_watts) << "\n"
    << "alpha = " << toml_float(c.radio.path_loss_exponent) << "\n";
  const WorkloadConfig& w = c.workload;
  o << "\n[workload]\n"
    << "mode = " << quote(to_string(w.mode)) << "\n"
    << "zipf_set = [";
  for (size_t i = 0; i < w.zipf_set.size(); ++i) {
    o << (i ? ", " : "") << toml_float(w.zipf_set[i]);
  }
  o << "]\n"
    << "shared_preference = " << (w.shared_preference ? "true" : "false") << "\n"
    << "trace_path = " << quote(w.trace_path) << "\n"
    << "trace_format = " << quote(to_string(w.trace_format)) << "\n"
    << "slot_length_s = " << w.slot_length_s << "\n"
    << "mobility = " << quote(to_string(w.mobility)) << "\n"
    << "user_cap = " << w.user_cap << "\n"
    << "dense_files = " << (w.dense_files ? "true" : "false") << "\n";
  if (!c.sbs_positions.empty() || !c.user_positions.empty()) {
    o << "\n[topology]\n";
    if (!c.sbs_positions.empty()) {
      o << "sbs_positions = " << points(c.sbs_positions) << "\n";
    }
    if (!c.user_positions.empty()) {
      o << "user_positions = " << points(c.user_positions) << "\n";
    }
  }
  o << "\n[oracle]\nrestarts = " << c.oracle_restarts << "\n"
    << "\n[ca]\nmax_rounds = " << c.ca_max_rounds << "\n"
    << "\n[bruteforce]\ncap = " << c.bruteforce_cap << "\n";
  return o.str();
}

ExperimentConfig apply_override(const ExperimentConfig& config,
                                const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error("override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  toml::table root = parse_table(emit_config(config), "<config>");
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + value, std::string_view("<override>"));
  } catch (const toml::parse_error&) {
    parsed = toml::table{};
    parsed.insert("v", value);
  }

  toml::table* table = &root;
  std::string rest = key;
  for (size_t dot; (dot = rest.find('.')) != std::string::npos;) {
    const std::string part = rest.substr(0, dot);
    rest = rest.substr(dot + 1);
    toml::node* child = table->get(part);
    if (child == nullptr) {
      table->insert(part, toml::table{});
      child = table->get(part);
    }
    if (!child->is_table()) fail(key, "is not a table path");
    table = child->as_table();
  }
  parsed.get("v")->visit(
      [&](const auto& v) { table->insert_or_assign(rest, v); });
  return from_table(root);
}

}  // namespace mamab
