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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"

namespace mamab {
namespace {

PreferenceMatrix explicit_zipf(std::vector<double> exponents, int num_files,
                               std::uint64_t seed = 1) {
  ZipfSpec spec;
  spec.explicit_exponents = std::move(exponents);
  return zipf_preferences(static_cast<int>(spec.explicit_exponents.size()),
                          num_files, spec, seed);
}

TEST(ZipfPreferences, ZeroExponentIsUniform) {
  const PreferenceMatrix p = explicit_zipf({0.0}, 4);
  for (FileId f = 0; f < 4; ++f) EXPECT_DOUBLE_EQ(p.prob(0, f), 0.25);
}

TEST(ZipfPreferences, UnitExponentOverTwoFiles) {
  // 1 / (1 + 1/2) and (1/2) / (1 + 1/2) by rank.
  const PreferenceMatrix p = explicit_zipf({1.0}, 2);
  for (FileId f = 0; f < 2; ++f) {
    const double want = p.rank(0, f) == 1 ? 2.0 / 3.0 : 1.0 / 3.0;
    EXPECT_NEAR(p.prob(0, f), want, 1e-15);
  }
}

TEST(ZipfPreferences, RowsFollowRankFormula) {
  ZipfSpec spec;
  const PreferenceMatrix p = zipf_preferences(20, 100, spec, 42);
  for (UserId u = 0; u < 20; ++u) {
    const double delta = p.exponent(u);
    bool in_set = false;
    for (double d : kDefaultZipfSet) in_set = in_set || d == delta;
    EXPECT_TRUE(in_set);
    double norm = 0.0;
    for (int j = 1; j <= 100; ++j) norm += std::pow(j, -delta);
    double sum = 0.0;
    std::vector<int> seen(101, 0);
    for (FileId f = 0; f < 100; ++f) {
      const int r = p.rank(u, f);
      ++seen[r];
      EXPECT_NEAR(p.prob(u, f), std::pow(r, -delta) / norm, 1e-12);
      sum += p.prob(u, f);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (int r = 1; r <= 100; ++r) EXPECT_EQ(seen[r], 1);
  }
}

TEST(ZipfPreferences, SharedPreferenceGivesIdenticalRows) {
  ZipfSpec spec;
  spec.shared_preference = true;
  const PreferenceMatrix p = zipf_preferences(5, 30, spec, 3);
  for (UserId u = 1; u < 5; ++u) {
    for (FileId f = 0; f < 30; ++f) EXPECT_EQ(p.prob(u, f), p.prob(0, f));
  }
}

TEST(ZipfPreferences, Deterministic) {
  ZipfSpec spec;
  const PreferenceMatrix a = zipf_preferences(10, 50, spec, 9);
  const PreferenceMatrix b = zipf_preferences(10, 50, spec, 9);
  for (UserId u = 0; u < 10; ++u) {
    for (FileId f = 0; f < 50; ++f) EXPECT_EQ(a.prob(u, f), b.prob(u, f));
  }
}

TEST(PreferenceMatrix, FromRowsValidates) {
  EXPECT_THROW(PreferenceMatrix::from_rows({{0.5, 0.4}}), Error);
  EXPECT_THROW(PreferenceMatrix::from_rows({{1.5, -0.5}}), Error);
  EXPECT_NO_THROW(PreferenceMatrix::from_rows({{0.5, 0.5}}));
}

TEST(SampleStationaryRequests, DegenerateRowAlwaysPicksThatFile) {
  const PreferenceMatrix p = PreferenceMatrix::from_rows({{0, 0, 1, 0}});
  for (int t = 1; t <= 200; ++t) {
    const RequestBatch b = sample_stationary_requests(p, t, 5);
    ASSERT_EQ(b.requests[0], std::vector<FileId>{2});
    EXPECT_EQ(b.slot, t);
  }
}

TEST(SampleStationaryRequests, OneRequestPerUserAndDeterministic) {
  ZipfSpec spec;
  const PreferenceMatrix p = zipf_preferences(7, 20, spec, 1);
  const RequestBatch a = sample_stationary_requests(p, 3, 77);
  const RequestBatch b = sample_stationary_requests(p, 3, 77);
  const RequestBatch c = sample_stationary_requests(p, 4, 77);
  EXPECT_EQ(a.requests, b.requests);
  EXPECT_NE(a.requests, c.requests);
  EXPECT_EQ(a.total_requests(), 7);
  for (const auto& q : a.requests) EXPECT_EQ(q.size(), 1u);
}

TEST(SampleStationaryRequests, FrequenciesMatchPreferences) {
  // 20000 draws, each file within 4 binomial standard deviations.
  const PreferenceMatrix p = explicit_zipf({0.8}, 10, 2);
  const int n = 20000;
  std::vector<int> counts(10, 0);
  for (int t = 1; t <= n; ++t) {
    ++counts[sample_stationary_requests(p, t, 13).requests[0][0]];
  }
  for (FileId f = 0; f < 10; ++f) {
    const double q = p.prob(0, f);
    EXPECT_NEAR(counts[f], n * q, 4.0 * std::sqrt(n * q * (1 - q))) << f;
  }
}

std::vector<TraceEvent> parse(const std::string& text,
                              TraceFormat format = TraceFormat::kAuto) {
  std::istringstream in(text);
  return parse_trace_events(in, format, "<test>");
}

TEST(TraceParsing, MovieLensRows) {
  const auto e = parse("1::1193::5::978300760\n2::661::3::978302109\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].user_id, 1);
  EXPECT_EQ(e[0].file_id, 1193);
  EXPECT_EQ(e[0].timestamp, 978300760);
}

TEST(TraceParsing, CsvWithHeader) {
  const auto e = parse("user_id,file_id,timestamp\n4,9,100\n5,2,200\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[1].user_id, 5);
  EXPECT_EQ(e[1].file_id, 2);
}

TEST(TraceParsing, MalformedRowNamesLine) {
  try {
    parse("1::2::3::4\n1::x::3::4\n", TraceFormat::kMovieLens);
    FAIL() << "expected an error";
  } catch (const Error& err) {
    EXPECT_NE(std::string(err.what()).find(":2"), std::string::npos)
        << err.what();
  }
}

TEST(SlotTrace, TwoRatingsOneDayGiveTwoRequests) {
  TraceOptions opt;
  const TraceWorkload w =
      slot_trace({{1, 5, 1000}, {1, 8, 5000}}, opt, /*one_based_files=*/false);
  ASSERT_EQ(w.num_slots(), 1);
  EXPECT_EQ(w.slots[0].requests[0], (std::vector<FileId>{5, 8}));
}

TEST(SlotTrace, RepeatedPairInOneDayIsOneRequest) {
  TraceOptions opt;
  const TraceWorkload w = slot_trace({{1, 5, 1000}, {1, 5, 2000}}, opt, false);
  EXPECT_EQ(w.slots[0].requests[0], (std::vector<FileId>{5}));
  EXPECT_EQ(w.slots[0].total_requests(), 1);
}

TEST(SlotTrace, DailySlotsFromEarliestTimestamp) {
  TraceOptions opt;
  const std::int64_t day = 86400;
  const TraceWorkload w = slot_trace(
      {{3, 1, 10 + 2 * day}, {7, 2, 10}, {3, 3, 9 + day}, {7, 4, 10 + day}},
      opt, true);
  EXPECT_EQ(w.num_slots(), 3);
  EXPECT_EQ(w.num_users, 2);
  EXPECT_EQ(w.raw_user_ids, (std::vector<std::int64_t>{3, 7}));
  EXPECT_EQ(w.num_files, 4);  // ids 1..4 become 0..3
  EXPECT_EQ(w.slots[0].requests[1], (std::vector<FileId>{1}));
  EXPECT_EQ(w.slots[0].requests[0], (std::vector<FileId>{2}));
  EXPECT_EQ(w.slots[1].requests[1], (std::vector<FileId>{3}));
  EXPECT_EQ(w.slots[2].requests[0], (std::vector<FileId>{0}));
  EXPECT_EQ(w.slots[2].slot, 3);
}

TEST(SlotTrace, UserCapKeepsLowestIds) {
  TraceOptions opt;
  opt.user_cap = 1;
  const TraceWorkload w = slot_trace({{9, 1, 0}, {4, 2, 0}}, opt, false);
  EXPECT_EQ(w.num_users, 1);
  EXPECT_EQ(w.raw_user_ids, (std::vector<std::int64_t>{4}));
  EXPECT_EQ(w.num_events, 1);
}

TEST(SlotTrace, DenseFilesRemap) {
  TraceOptions opt;
  opt.dense_files = true;
  const TraceWorkload w = slot_trace({{1, 100, 0}, {1, 40, 0}}, opt, true);
  EXPECT_EQ(w.num_files, 2);
  EXPECT_EQ(w.slots[0].requests[0], (std::vector<FileId>{0, 1}));
}

TEST(SlotTrace, EmptyTraceThrows) {
  EXPECT_THROW(slot_trace({}, TraceOptions{}, false), Error);
}

TEST(SlottedFile, RoundTripsThroughIngest) {
  TraceOptions opt;
  const TraceWorkload w = slot_trace(
      {{1, 3, 0}, {2, 1, 0}, {1, 2, 86400 * 2}}, opt, false);
  const std::string path =
      (std::filesystem::temp_directory_path() / "mamab_slotted_test.csv")
          .string();
  {
    std::ofstream out(path);
    write_slotted_trace(out, w);
  }
  const TraceWorkload back = ingest_trace(path, opt);
  std::filesystem::remove(path);
  EXPECT_EQ(back.num_slots(), w.num_slots());
  EXPECT_EQ(back.num_users, w.num_users);
  EXPECT_EQ(back.num_files, w.num_files);
  for (int t = 0; t < w.num_slots(); ++t) {
    EXPECT_EQ(back.slots[t].requests, w.slots[t].requests);
  }
}

TEST(ActiveFileSet, TracksNewFiles) {
  ActiveFileSet a;
  RequestBatch empty;
  empty.requests.resize(2);
  EXPECT_TRUE(update_active_files(a, empty).empty());
  EXPECT_EQ(a.size(), 0);

  RequestBatch b;
  b.requests = {{3}, {7, 3}};
  EXPECT_EQ(update_active_files(a, b), (std::vector<FileId>{3, 7}));
  EXPECT_TRUE(a.contains(3));
  EXPECT_FALSE(a.contains(4));

  RequestBatch c;
  c.requests = {{7}, {1}};
  EXPECT_EQ(update_active_files(a, c), (std::vector<FileId>{1}));
  EXPECT_EQ(a.files(), (std::vector<FileId>{1, 3, 7}));
}

}  // namespace
}  // namespace mamab
