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


#include "mamab/random.h"

#include <algorithm>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "mamab/cache_matrix.h"

namespace mamab {
namespace {

TEST(SplitMix64, MatchesPublishedSequenceForSeedZero) {
  // First outputs of the reference splitmix64.c with state 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng(), 0x06c45d188009454fULL);
}

TEST(DeriveSeed, DependsOnEveryPartAndItsOrder) {
  const std::uint64_t a = derive_seed({1, 2, 3});
  EXPECT_EQ(a, derive_seed({1, 2, 3}));
  EXPECT_NE(a, derive_seed({1, 2, 4}));
  EXPECT_NE(a, derive_seed({2, 1, 3}));
  EXPECT_NE(a, derive_seed({1, 2}));
}

TEST(MakeStream, StreamsAreIndependentOfEachOther) {
  SplitMix64 a = make_stream(7, Stream::kTopology, {0});
  SplitMix64 b = make_stream(7, Stream::kRequests, {0});
  SplitMix64 c = make_stream(7, Stream::kTopology, {1});
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_EQ(x, make_stream(7, Stream::kTopology, {0})());
}

TEST(Uniform01, StaysInUnitInterval) {
  SplitMix64 rng(3);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(UniformIndex, CoversRangeEvenly) {
  SplitMix64 rng(11);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[uniform_index(rng, 7)];
  // 10000 expected per bucket, sd ~ 93.
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(UniformIndex, RejectsEmptyRange) {
  SplitMix64 rng(1);
  EXPECT_THROW(uniform_index(rng, 0), Error);
}

TEST(SampleWithoutReplacement, ReturnsDistinctValues) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = sample_without_replacement(rng, 10, 4);
    ASSERT_EQ(s.size(), 4u);
    std::set<int> seen(s.begin(), s.end());
    EXPECT_EQ(seen.size(), 4u);
    for (int v : s) {
      EXPECT_GE(v, 0);
      EXPECT_LT(v, 10);
    }
  }
  EXPECT_TRUE(sample_without_replacement(rng, 5, 0).empty());
  auto all = sample_without_replacement(rng, 5, 5);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (std::vector<int>{0, 1, 2, 3, 4}));
}

}  // namespace
}  // namespace mamab
