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

// Request workloads: per-user Zipf preferences for the stationary setting,
// and rating traces (MovieLens "::" format or plain CSV) grouped into
// fixed-length slots for the non-stationary setting.

#ifndef MAMAB_DEMAND_H_
#define MAMAB_DEMAND_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mamab/cache_matrix.h"

namespace mamab {

inline const std::vector<double> kDefaultZipfSet = {0.5, 0.7, 0.9, 1.1, 1.3};

struct ZipfSpec {
  // Candidate exponents; each user draws one uniformly.
  std::vector<double> exponent_set = kDefaultZipfSet;
  // When non-empty, user u gets explicit_exponents[u] instead of a draw.
  std::vector<double> explicit_exponents;
  // All users share one rank permutation and one exponent.
  bool shared_preference = false;
};

class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;

  // Rows must be non-negative and sum to 1 within 1e-9.
  static PreferenceMatrix from_rows(
      const std::vector<std::vector<double>>& rows);

  int num_users() const { return num_users_; }
  int num_files() const { return num_files_; }
  double prob(UserId u, FileId f) const {
    return p_[static_cast<size_t>(u) * num_files_ + f];
  }
  std::span<const double> row(UserId u) const {
    return std::span<const double>(p_).subspan(
        static_cast<size_t>(u) * num_files_, num_files_);
  }
  // Preference rank of f for user u, 1 = most preferred.
  int rank(UserId u, FileId f) const {
    return rank_[static_cast<size_t>(u) * num_files_ + f];
  }
  double exponent(UserId u) const { return exponents_[u]; }

  // Inverse-CDF lookup: the file whose cumulative interval contains x.
  FileId file_at(UserId u, double x) const;

 private:
  friend PreferenceMatrix zipf_preferences(int, int, const ZipfSpec&,
                                           std::uint64_t);
  void finalize();

  int num_users_ = 0;
  int num_files_ = 0;
  std::vector<double> p_;
  std::vector<double> cdf_;
  std::vector<int> rank_;
  std::vector<double> exponents_;
};

// p_{u,f} = f_u^{-delta_u} / sum_{j=1..F} j^{-delta_u}, with an independent
// uniformly random rank permutation per user.
PreferenceMatrix zipf_preferences(int num_users, int num_files,
                                  const ZipfSpec& spec, std::uint64_t seed);

struct RequestBatch {
  int slot = 0;
  // requests[u] holds Q_u^t: ascending, duplicate-free file ids.
  std::vector<std::vector<FileId>> requests;

  std::int64_t total_requests() const;
};

// One request per user drawn from its preference row. The draw for (user,
// slot) depends only on (stream_seed, slot, user).
RequestBatch sample_stationary_requests(const PreferenceMatrix& prefs,
                                        int slot, std::uint64_t stream_seed);

struct TraceEvent {
  std::int64_t user_id = 0;
  std::int64_t file_id = 0;
  std::int64_t timestamp = 0;
};

enum class TraceFormat {
  kAuto,       // by content: "::" delimiters, a "# slotted" header, or CSV
  kMovieLens,  // user::item::rating::timestamp, 1-based item ids
  kCsv,        // user_id,file_id,timestamp with optional header row
  kSlotted,    // output of write_slotted_trace
};

struct TraceOptions {
  std::int64_t slot_length_s = 86400;
  // Keep only the first `user_cap` users in ascending raw-id order; 0 = all.
  int user_cap = 0;
  // Remap file ids densely by ascending raw id. Otherwise the raw id is kept
  // (minus one for 1-based MovieLens items) and the catalog spans 0..max.
  bool dense_files = false;
  TraceFormat format = TraceFormat::kAuto;
};

struct TraceWorkload {
  int num_users = 0;
  int num_files = 0;
  std::int64_t slot_length_s = 0;
  std::int64_t start_timestamp = 0;
  std::int64_t num_events = 0;
  // raw_user_ids[dense] = raw id from the trace.
  std::vector<std::int64_t> raw_user_ids;
  std::vector<RequestBatch> slots;  // slots[t - 1] has slot index t

  int num_slots() const { return static_cast<int>(slots.size()); }
};

// Parses one rating file. Throws Error naming the line on malformed rows.
std::vector<TraceEvent> read_trace_events(const std::string& path,
                                          TraceFormat format);
std::vector<TraceEvent> parse_trace_events(std::istream& in,
                                           TraceFormat format,
                                           const std::string& source);

// Groups events into consecutive slots of slot_length_s starting at the
// earliest timestamp. Throws on an empty event list. `one_based_files`
// selects the MovieLens item-id convention.
TraceWorkload slot_trace(std::vector<TraceEvent> events,
                         const TraceOptions& options, bool one_based_files);

TraceWorkload ingest_trace(const std::string& path,
                           const TraceOptions& options);

// Slotted cache file: a "# slotted" metadata line, a header, then
// "slot,user_id,file_id" rows.
void write_slotted_trace(std::ostream& out, const TraceWorkload& workload);

class ActiveFileSet {
 public:
  bool contains(FileId f) const {
    return f >= 0 && f < static_cast<int>(member_.size()) && member_[f] != 0;
  }
  int size() const { return size_; }
  std::vector<FileId> files() const;
  // Adds every requested file; returns the ones not present before,
  // ascending.
  std::vector<FileId> absorb(const RequestBatch& batch);
  void insert(FileId f);

 private:
  std::vector<std::uint8_t> member_;
  int size_ = 0;
};

std::vector<FileId> update_active_files(ActiveFileSet& active,
                                        const RequestBatch& batch);

}  // namespace mamab

#endif  // MAMAB_DEMAND_H_
