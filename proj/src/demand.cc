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

#include "mamab/demand.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <string_view>

#include "mamab/random.h"

namespace mamab {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line,
                                    std::string_view delim) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + delim.size();
  }
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void parse_failure(const std::string& source, std::int64_t line,
                                const std::string& what) {
  throw Error(source + ":" + std::to_string(line) + ": " + what);
}

TraceFormat sniff_format(std::string_view first_line) {
  if (first_line.starts_with("# slotted")) return TraceFormat::kSlotted;
  if (first_line.find("::") != std::string_view::npos) {
    return TraceFormat::kMovieLens;
  }
  return TraceFormat::kCsv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Preferences

void PreferenceMatrix::finalize() {
  cdf_.resize(p_.size());
  for (UserId u = 0; u < num_users_; ++u) {
    double acc = 0.0;
    for (FileId f = 0; f < num_files_; ++f) {
      const size_t i = static_cast<size_t>(u) * num_files_ + f;
      acc += p_[i];
      cdf_[i] = acc;
    }
  }
}

PreferenceMatrix PreferenceMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  PreferenceMatrix prefs;
  prefs.num_users_ = static_cast<int>(rows.size());
  prefs.num_files_ = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (size_t u = 0; u < rows.size(); ++u) {
    const auto& row = rows[u];
    if (static_cast<int>(row.size()) != prefs.num_files_) {
      throw Error("preferences: ragged rows");
    }
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw Error("preferences: negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error("preferences: row " + std::to_string(u) +
                  " does not sum to 1");
    }
    prefs.p_.insert(prefs.p_.end(), row.begin(), row.end());
    // Rank by descending probability, ties by file id.
    std::vector<int> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return row[a] > row[b]; });
    std::vector<int> rank(row.size());
    for (size_t r = 0; r < order.size(); ++r) {
      rank[order[r]] = static_cast<int>(r) + 1;
    }
    prefs.rank_.insert(prefs.rank_.end(), rank.begin(), rank.end());
    prefs.exponents_.push_back(std::nan(""));
  }
  prefs.finalize();
  return prefs;
}

FileId PreferenceMatrix::file_at(UserId u, double x) const {
  auto first = cdf_.begin() + static_cast<std::ptrdiff_t>(u) * num_files_;
  auto it = std::upper_bound(first, first + num_files_, x);
  // Skip zero-probability files whose cumulative value equals x exactly.
  FileId f = static_cast<FileId>(it - first);
  if (f >= num_files_) {
    f = num_files_ - 1;
    while (f > 0 && prob(u, f) == 0.0) --f;
  }
  return f;
}

PreferenceMatrix zipf_preferences(int num_users, int num_files,
                                  const ZipfSpec& spec, std::uint64_t seed) {
  if (num_files < 1) throw Error("zipf_preferences: num_files must be >= 1");
  if (num_users < 0) throw Error("zipf_preferences: negative num_users");
  if (!spec.explicit_exponents.empty() &&
      static_cast<int>(spec.explicit_exponents.size()) != num_users) {
    throw Error("zipf_preferences: explicit exponents must list every user");
  }
  if (spec.explicit_exponents.empty() && spec.exponent_set.empty()) {
    throw Error("zipf_preferences: empty exponent set");
  }
  for (double d : spec.exponent_set) {
    if (!(d >= 0.0)) throw Error("zipf_preferences: exponent must be >= 0");
  }
  for (double d : spec.explicit_exponents) {
    if (!(d >= 0.0)) throw Error("zipf_preferences: exponent must be >= 0");
  }

  PreferenceMatrix prefs;
  prefs.num_users_ = num_users;
  prefs.num_files_ = num_files;
  prefs.p_.resize(static_cast<size_t>(num_users) * num_files);
  prefs.rank_.resize(prefs.p_.size());
  prefs.exponents_.resize(num_users);

  std::vector<int> shared_perm;
  double shared_exponent = 0.0;
  if (spec.shared_preference) {
    SplitMix64 rng = make_stream(seed, Stream::kPreferences, {0xffffffffu});
    shared_perm = sample_without_replacement(rng, num_files, num_files);
    shared_exponent =
        spec.explicit_exponents.empty()
            ? spec.exponent_set[uniform_index(
                  rng, static_cast<int>(spec.exponent_set.size()))]
            : spec.explicit_exponents.front();
  }

  for (UserId u = 0; u < num_users; ++u) {
    SplitMix64 rng =
        make_stream(seed, Stream::kPreferences, {static_cast<std::uint64_t>(u)});
    double delta = 0.0;
    std::vector<int> perm;
    if (spec.shared_preference) {
      delta = shared_exponent;
      perm = shared_perm;
    } else {
      delta = spec.explicit_exponents.empty()
                  ? spec.exponent_set[uniform_index(
                        rng, static_cast<int>(spec.exponent_set.size()))]
                  : spec.explicit_exponents[u];
      // perm[r] = file holding rank r + 1.
      perm = sample_without_replacement(rng, num_files, num_files);
    }
    prefs.exponents_[u] = delta;
    double norm = 0.0;
    for (int j = 1; j <= num_files; ++j) norm += std::pow(j, -delta);
    for (int r = 0; r < num_files; ++r) {
      const size_t i = static_cast<size_t>(u) * num_files + perm[r];
      prefs.p_[i] = std::pow(r + 1, -delta) / norm;
      prefs.rank_[i] = r + 1;
    }
  }
  prefs.finalize();
  return prefs;
}

std::int64_t RequestBatch::total_requests() const {
  std::int64_t n = 0;
  for (const auto& q : requests) n += static_cast<std::int64_t>(q.size());
  return n;
}

RequestBatch sample_stationary_requests(const PreferenceMatrix& prefs,
                                        int slot, std::uint64_t stream_seed) {
  RequestBatch batch;
  batch.slot = slot;
  batch.requests.resize(prefs.num_users());
  for (UserId u = 0; u < prefs.num_users(); ++u) {
    SplitMix64 rng = make_stream(stream_seed, Stream::kRequests,
                                 {static_cast<std::uint64_t>(slot),
                                  static_cast<std::uint64_t>(u)});
    batch.requests[u].push_back(prefs.file_at(u, uniform01(rng)));
  }
  return batch;
}

// ---------------------------------------------------------------------------
// Traces

std::vector<TraceEvent> parse_trace_events(std::istream& in,
                                           TraceFormat format,
                                           const std::string& source) {
  std::vector<TraceEvent> events;
  std::string line;
  std::int64_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (first && format == TraceFormat::kAuto) format = sniff_format(view);
    if (format == TraceFormat::kSlotted) {
      throw Error(source + ": slotted files are read with ingest_trace");
    }
    const bool allow_header = first;
    first = false;
    if (view.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::int64_t user = 0;
    std::int64_t item = 0;
    std::int64_t ts = 0;
    if (format == TraceFormat::kMovieLens) {
      fields = split(view, "::");
      if (fields.size() != 4) {
        parse_failure(source, line_no,
                      "expected user::item::rating::timestamp");
      }
      if (!parse_int(fields[0], user) || !parse_int(fields[1], item) ||
          !parse_int(fields[3], ts)) {
        parse_failure(source, line_no, "non-integer field");
      }
    } else {
      fields = split(view, ",");
      if (fields.size() != 3) {
        if (allow_header) continue;
        parse_failure(source, line_no, "expected user_id,file_id,timestamp");
      }
      if (!parse_int(fields[0], user) || !parse_int(fields[1], item) ||
          !parse_int(fields[2], ts)) {
        if (allow_header) continue;
        parse_failure(source, line_no, "non-integer field");
      }
    }
    if (user < 0 || item < 0) parse_failure(source, line_no, "negative id");
    if (format == TraceFormat::kMovieLens && item < 1) {
      parse_failure(source, line_no, "MovieLens item ids start at 1");
    }
    events.push_back(TraceEvent{user, item, ts});
  }
  return events;
}

std::vector<TraceEvent> read_trace_events(const std::string& path,
                                          TraceFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file " + path);
  return parse_trace_events(in, format, path);
}

TraceWorkload slot_trace(std::vector<TraceEvent> events,
                         const TraceOptions& options, bool one_based_files) {
  if (events.empty()) throw Error("trace: no events");
  if (options.slot_length_s <= 0) throw Error("trace: slot length must be > 0");
  if (options.user_cap < 0) throw Error("trace: negative user cap");

  std::vector<std::int64_t> users;
  users.reserve(events.size());
  for (const auto& e : events) users.push_back(e.user_id);
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  if (options.user_cap > 0 &&
      static_cast<int>(users.size()) > options.user_cap) {
    users.resize(options.user_cap);
  }
  auto dense_user = [&](std::int64_t raw) -> int {
    auto it = std::lower_bound(users.begin(), users.end(), raw);
    if (it == users.end() || *it != raw) return -1;
    return static_cast<int>(it - users.begin());
  };
  std::erase_if(events,
                [&](const TraceEvent& e) { return dense_user(e.user_id) < 0; });

  std::vector<std::int64_t> files;
  if (options.dense_files) {
    for (const auto& e : events) files.push_back(e.file_id);
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
  }
  auto map_file = [&](std::int64_t raw) -> FileId {
    if (options.dense_files) {
      return static_cast<FileId>(
          std::lower_bound(files.begin(), files.end(), raw) - files.begin());
    }
    return static_cast<FileId>(one_based_files ? raw - 1 : raw);
  };

  TraceWorkload w;
  w.slot_length_s = options.slot_length_s;
  w.num_users = static_cast<int>(users.size());
  w.raw_user_ids = users;
  w.num_events = static_cast<std::int64_t>(events.size());
  w.start_timestamp = std::min_element(events.begin(), events.end(),
                                       [](const auto& a, const auto& b) {
                                         return a.timestamp < b.timestamp;
                                       })
                          ->timestamp;
  std::int64_t last_slot = 0;
  FileId max_file = -1;
  for (const auto& e : events) {
    last_slot = std::max(last_slot,
                         (e.timestamp - w.start_timestamp) / options.slot_length_s);
    max_file = std::max(max_file, map_file(e.file_id));
  }
  w.num_files = max_file + 1;
  w.slots.resize(static_cast<size_t>(last_slot) + 1);
  for (size_t t = 0; t < w.slots.size(); ++t) {
    w.slots[t].slot = static_cast<int>(t) + 1;
    w.slots[t].requests.resize(w.num_users);
  }
  for (const auto& e : events) {
    const auto t = (e.timestamp - w.start_timestamp) / options.slot_length_s;
    w.slots[t].requests[dense_user(e.user_id)].push_back(map_file(e.file_id));
  }
  for (auto& batch : w.slots) {
    for (auto& q : batch.requests) {
      std::sort(q.begin(), q.end());
      q.erase(std::unique(q.begin(), q.end()), q.end());
    }
  }
  return w;
}

namespace {

TraceWorkload read_slotted(std::istream& in, const std::string& source) {
  std::string line;
  std::int64_t line_no = 0;
  TraceWorkload w;
  int num_slots = -1;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.starts_with("# slotted")) {
      std::map<std::string, std::int64_t> meta;
      for (auto token : split(view.substr(9), " ")) {
        auto eq = token.find('=');
        if (eq == std::string_view::npos) continue;
        std::int64_t v = 0;
        if (!parse_int(token.substr(eq + 1), v)) {
          parse_failure(source, line_no, "bad metadata value");
        }
        meta[std::string(token.substr(0, eq))] = v;
      }
      for (const char* key : {"slots", "users", "files", "slot_length_s",
                              "start_timestamp", "events"}) {
        if (!meta.contains(key)) {
          parse_failure(source, line_no,
                        std::string("missing metadata key ") + key);
        }
      }
      num_slots = static_cast<int>(meta["slots"]);
      w.num_users = static_cast<int>(meta["users"]);
      w.num_files = static_cast<int>(meta["files"]);
      w.slot_length_s = meta["slot_length_s"];
      w.start_timestamp = meta["start_timestamp"];
      w.num_events = meta["events"];
      w.slots.resize(num_slots);
      for (int t = 0; t < num_slots; ++t) {
        w.slots[t].slot = t + 1;
        w.slots[t].requests.resize(w.num_users);
      }
      w.raw_user_ids.resize(w.num_users);
      std::iota(w.raw_user_ids.begin(), w.raw_user_ids.end(), 0);
      continue;
    }
    if (num_slots < 0) parse_failure(source, line_no, "missing # slotted line");
    if (!have_header) {
      if (view != "slot,user_id,file_id") {
        parse_failure(source, line_no, "expected slot,user_id,file_id header");
      }
      have_header = true;
      continue;
    }
    auto fields = split(view, ",");
    std::int64_t t = 0;
    std::int64_t u = 0;
    std::int64_t f = 0;
    if (fields.size() != 3 || !parse_int(fields[0], t) ||
        !parse_int(fields[1], u) || !parse_int(fields[2], f)) {
      parse_failure(source, line_no, "expected slot,user_id,file_id");
    }
    if (t < 1 || t > num_slots || u < 0 || u >= w.num_users || f < 0 ||
        f >= w.num_files) {
      parse_failure(source, line_no, "row out of declared range");
    }
    w.slots[t - 1].requests[u].push_back(static_cast<FileId>(f));
  }
  if (num_slots < 0) throw Error(source + ": empty slotted trace");
  for (auto& batch : w.slots) {
    for (auto& q : batch.requests) {
      std::sort(q.begin(), q.end());
      q.erase(std::unique(q.begin(), q.end()), q.end());
    }
  }
  return w;
}

}  // namespace

TraceWorkload ingest_trace(const std::string& path,
                           const TraceOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file " + path);
  TraceFormat format = options.format;
  if (format == TraceFormat::kAuto) {
    std::string line;
    while (std::getline(in, line) && trim(line).empty()) {
    }
    format = sniff_format(trim(line));
    in.clear();
    in.seekg(0);
  }
  if (format == TraceFormat::kSlotted) return read_slotted(in, path);
  auto events = parse_trace_events(in, format, path);
  return slot_trace(std::move(events), options,
                    format == TraceFormat::kMovieLens);
}

void write_slotted_trace(std::ostream& out, const TraceWorkload& w) {
  out << "# slotted slots=" << w.num_slots() << " users=" << w.num_users
      << " files=" << w.num_files << " slot_length_s=" << w.slot_length_s
      << " start_timestamp=" << w.start_timestamp << " events=" << w.num_events
      << '\n';
  out << "slot,user_id,file_id\n";
  for (const auto& batch : w.slots) {
    for (UserId u = 0; u < static_cast<int>(batch.requests.size()); ++u) {
      for (FileId f : batch.requests[u]) {
        out << batch.slot << ',' << u << ',' << f << '\n';
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Active file set

std::vector<FileId> ActiveFileSet::files() const {
  std::vector<FileId> out;
  out.reserve(size_);
  for (FileId f = 0; f < static_cast<int>(member_.size()); ++f) {
    if (member_[f]) out.push_back(f);
  }
  return out;
}

void ActiveFileSet::insert(FileId f) {
  if (f < 0) throw Error("active file set: negative file id");
  if (f >= static_cast<int>(member_.size())) member_.resize(f + 1, 0);
  if (!member_[f]) {
    member_[f] = 1;
    ++size_;
  }
}

std::vector<FileId> ActiveFileSet::absorb(const RequestBatch& batch) {
  std::vector<FileId> fresh;
  for (const auto& q : batch.requests) {
    for (FileId f : q) {
      if (!contains(f)) {
        insert(f);
        fresh.push_back(f);
      }
    }
  }
  std::sort(fresh.begin(), fresh.end());
  return fresh;
}

std::vector<FileId> update_active_files(ActiveFileSet& active,
                                        const RequestBatch& batch) {
  return active.absorb(batch);
}

}  // namespace mamab
