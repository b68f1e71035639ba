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

#include "mamab/cache_matrix.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace mamab {

CacheMatrix::CacheMatrix(int num_sbs, int num_files, int cache_size)
    : num_sbs_(num_sbs),
      num_files_(num_files),
      cache_size_(cache_size),
      bits_(static_cast<size_t>(num_sbs) * num_files, 0),
      row_counts_(num_sbs, 0) {
  if (num_sbs < 0 || num_files < 0 || cache_size < 0) {
    throw Error("CacheMatrix: negative dimension");
  }
}

void CacheMatrix::check_index(SbsId m, FileId f) const {
  if (m < 0 || m >= num_sbs_ || f < 0 || f >= num_files_) {
    throw Error("CacheMatrix: index (" + std::to_string(m) + "," +
                std::to_string(f) + ") out of range");
  }
}

void CacheMatrix::set(SbsId m, FileId f, bool value) {
  check_index(m, f);
  auto& bit = bits_[static_cast<size_t>(m) * num_files_ + f];
  if ((bit != 0) == value) return;
  if (value) {
    if (row_counts_[m] >= cache_size_) {
      throw Error("CacheMatrix: row " + std::to_string(m) +
                  " exceeds cache size " + std::to_string(cache_size_));
    }
    ++row_counts_[m];
  } else {
    --row_counts_[m];
  }
  bit = value ? 1 : 0;
}

void CacheMatrix::clear_row(SbsId m) {
  auto first = bits_.begin() + static_cast<std::ptrdiff_t>(m) * num_files_;
  std::fill(first, first + num_files_, 0);
  row_counts_[m] = 0;
}

void CacheMatrix::set_row(SbsId m, std::span<const FileId> files) {
  if (static_cast<int>(files.size()) > cache_size_) {
    throw Error("CacheMatrix: set_row with " + std::to_string(files.size()) +
                " files exceeds cache size " + std::to_string(cache_size_));
  }
  clear_row(m);
  for (FileId f : files) set(m, f, true);
}

std::vector<FileId> CacheMatrix::row_files(SbsId m) const {
  std::vector<FileId> out;
  out.reserve(row_counts_[m]);
  for (FileId f = 0; f < num_files_; ++f) {
    if (cached(m, f)) out.push_back(f);
  }
  return out;
}

void CacheMatrix::clear() {
  std::fill(bits_.begin(), bits_.end(), 0);
  std::fill(row_counts_.begin(), row_counts_.end(), 0);
}

int CacheMatrix::total_cached() const {
  return std::accumulate(row_counts_.begin(), row_counts_.end(), 0);
}

bool CacheMatrix::within_budget() const {
  for (SbsId m = 0; m < num_sbs_; ++m) {
    int count = 0;
    for (FileId f = 0; f < num_files_; ++f) count += cached(m, f) ? 1 : 0;
    if (count != row_counts_[m] || count > cache_size_) return false;
  }
  return true;
}

std::string to_string(const CacheMatrix& cache) {
  std::ostringstream out;
  for (SbsId m = 0; m < cache.num_sbs(); ++m) {
    out << m << ":";
    for (FileId f : cache.row_files(m)) out << ' ' << f;
    out << '\n';
  }
  return out.str();
}

}  // namespace mamab
