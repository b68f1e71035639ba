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

#ifndef MAMAB_CACHE_MATRIX_H_
#define MAMAB_CACHE_MATRIX_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mamab {

using SbsId = int;
using UserId = int;
using FileId = int;

// All recoverable failures in the library are reported with this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary M x F placement matrix. Every row holds at most `cache_size` ones;
// mutators throw rather than let a row exceed the budget.
class CacheMatrix {
 public:
  CacheMatrix() = default;
  CacheMatrix(int num_sbs, int num_files, int cache_size);

  int num_sbs() const { return num_sbs_; }
  int num_files() const { return num_files_; }
  int cache_size() const { return cache_size_; }

  bool cached(SbsId m, FileId f) const {
    return bits_[static_cast<size_t>(m) * num_files_ + f] != 0;
  }
  int row_count(SbsId m) const { return row_counts_[m]; }
  bool row_full(SbsId m) const { return row_counts_[m] >= cache_size_; }

  void set(SbsId m, FileId f, bool value);
  void clear_row(SbsId m);
  // Replaces row m with exactly `files`; throws on budget or range violation.
  void set_row(SbsId m, std::span<const FileId> files);
  std::vector<FileId> row_files(SbsId m) const;
  void clear();

  int total_cached() const;
  bool within_budget() const;

  friend bool operator==(const CacheMatrix&, const CacheMatrix&) = default;

 private:
  void check_index(SbsId m, FileId f) const;

  int num_sbs_ = 0;
  int num_files_ = 0;
  int cache_size_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<int> row_counts_;
};

std::string to_string(const CacheMatrix& cache);

// Additive objective value with an optimistic tier. Keys that have never
// been observed carry an estimate that must rank above every finite number;
// `optimistic` counts such terms and dominates the comparison.
struct Score {
  int optimistic = 0;
  double value = 0.0;

  static Score finite(double v) { return Score{0, v}; }
  static Score unseen() { return Score{1, 0.0}; }

  bool negative() const {
    return optimistic < 0 || (optimistic == 0 && value < 0.0);
  }

  Score& operator+=(const Score& o) {
    optimistic += o.optimistic;
    value += o.value;
    return *this;
  }
  Score& operator-=(const Score& o) {
    optimistic -= o.optimistic;
    value -= o.value;
    return *this;
  }
  friend Score operator+(Score a, const Score& b) { return a += b; }
  friend Score operator-(Score a, const Score& b) { return a -= b; }
  friend bool operator==(const Score&, const Score&) = default;
  friend bool operator<(const Score& a, const Score& b) {
    if (a.optimistic != b.optimistic) return a.optimistic < b.optimistic;
    return a.value < b.value;
  }
  friend bool operator>(const Score& a, const Score& b) { return b < a; }
  friend bool operator<=(const Score& a, const Score& b) { return !(b < a); }
  friend bool operator>=(const Score& a, const Score& b) { return !(a < b); }
};

}  // namespace mamab

#endif  // MAMAB_CACHE_MATRIX_H_
