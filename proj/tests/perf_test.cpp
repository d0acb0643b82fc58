/* Copyright 2026 The ENL Kernels Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "enl/perf.hpp"

namespace enl {
namespace {

PerfShape shape(std::uint64_t h, std::uint64_t w, std::uint64_t c, std::uint64_t ct,
                std::uint64_t cg, std::uint64_t cl = 0) {
  return {h, w, c, ct, cg, cl};
}

TEST(CountTest, DenseDotProductHandValue) {
  const PerfReport r = count_nl(shape(4, 4, 4, 2, 2), SimilarityKind::dot_product);
  EXPECT_EQ(r.flops, 2048u);
  EXPECT_EQ(r.variant, Variant::nl_dot);
}

TEST(CountTest, SoftmaxAddsFourOpsPerAffinityEntry) {
  const PerfShape s = shape(4, 4, 4, 2, 2);
  EXPECT_EQ(count_nl(s, SimilarityKind::embedded_gaussian).flops, 2048u + 4u * 256u);
  EXPECT_EQ(count_nl(s, SimilarityKind::dot_product, 8, Normalization::one_over_hw).flops,
            2048u + 256u);
}

TEST(CountTest, DenseAffinityPeak) {
  EXPECT_EQ(count_nl(shape(2, 2, 2, 1, 1), SimilarityKind::dot_product, 1)
                .peak_intermediate_bytes,
            16u);
  const PerfReport big = count_nl(shape(250, 200, 64, 32, 32), SimilarityKind::embedded_gaussian, 4);
  EXPECT_EQ(big.peak_intermediate_bytes, 10'000'000'000ULL);
}

TEST(CountTest, EfficientHandValues) {
  const PerfReport r = count_enl(shape(4, 4, 4, 2, 2), false);
  EXPECT_EQ(r.flops, 4u * 16u * 4u);
  EXPECT_EQ(r.peak_intermediate_bytes, 4u * sizeof(double));
  const PerfReport p = count_enl(shape(4, 4, 4, 2, 2, 9), true);
  EXPECT_EQ(p.flops, 256u + 4u * 16u * 18u);
  EXPECT_EQ(p.peak_intermediate_bytes, 18u * sizeof(double));
  EXPECT_EQ(count_enl(shape(4, 4, 4, 2, 2), false, 8, Normalization::one_over_hw).flops, 260u);
}

TEST(CountTest, ProjectionFlopsReportedSeparately) {
  const PerfReport r = count_enl(shape(3, 5, 6, 2, 4), false);
  EXPECT_EQ(r.projection_flops, 2u * 15u * 6u * (2u * 2u + 4u));
}

TEST(CountTest, MemoryRatioAtLargeMaps) {
  const PerfShape s = shape(250, 200, 64, 32, 32);
  const double ratio =
      static_cast<double>(count_nl(s, SimilarityKind::embedded_gaussian, 4).peak_intermediate_bytes) /
      static_cast<double>(count_enl(s, false, 4).peak_intermediate_bytes);
  EXPECT_GE(ratio, 1e4);
}

TEST(CountTest, QuadrupledMapGrowsDenseSixteenfoldAndEfficientFourfold) {
  const PerfShape s1 = shape(16, 16, 8, 4, 4), s4 = shape(32, 32, 8, 4, 4);
  const auto nl1 = count_nl(s1, SimilarityKind::dot_product);
  const auto nl4 = count_nl(s4, SimilarityKind::dot_product);
  const auto enl1 = count_enl(s1, false), enl4 = count_enl(s4, false);
  EXPECT_EQ(nl4.flops, 16u * nl1.flops);
  EXPECT_EQ(nl4.peak_intermediate_bytes, 16u * nl1.peak_intermediate_bytes);
  EXPECT_EQ(enl4.flops, 4u * enl1.flops);
  EXPECT_EQ(enl4.peak_intermediate_bytes, enl1.peak_intermediate_bytes);
  EXPECT_LT(enl1.flops, nl1.flops);
}

TEST(CountTest, OverflowAndBadShapesThrow) {
  EXPECT_THROW(count_nl(shape(1ULL << 20, 1ULL << 20, 1, 1, 1), SimilarityKind::dot_product),
               std::overflow_error);
  EXPECT_THROW(count_enl(shape(0, 4, 4, 2, 2), false), std::invalid_argument);
  EXPECT_THROW(count_enl(shape(4, 4, 4, 2, 2, 0), true), std::invalid_argument);
}

TEST(VerifyCountsTest, AllVariantsExact) {
  for (auto norm : {Normalization::none, Normalization::one_over_hw}) {
    const auto checks = verify_counts(shape(4, 3, 4, 3, 2), {2, 2, {}}, norm);
    ASSERT_EQ(checks.size(), 4u);
    for (const CountCheck& c : checks) {
      EXPECT_TRUE(c.ok()) << to_string(c.variant);
      EXPECT_GT(c.instrumented_flops, 0u);
    }
    EXPECT_EQ(checks[3].shape.c_l, 4u);
  }
}

TEST(VerifyCountsTest, RefusesLargeMaps) {
  EXPECT_THROW(verify_counts(shape(65, 64, 2, 1, 1), {}), SizeError);
}

TEST(VariantTest, RoundTripsNames) {
  for (Variant v : {Variant::nl, Variant::nl_dot, Variant::enl, Variant::enl_pos})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("fast"), std::invalid_argument);
}

TEST(MedianTest, OddEvenAndEmpty) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

BenchRequest small_request(std::size_t repeats) {
  BenchRequest req;
  req.variants = {Variant::nl, Variant::enl, Variant::enl_pos};
  req.shapes = {shape(6, 6, 8, 4, 4)};
  req.mask = {3, 3, {}};
  req.repeats = repeats;
  return req;
}

TEST(BenchmarkTest, MedianNeedsFiveRuns) {
  const auto reports = benchmark(small_request(5));
  ASSERT_EQ(reports.size(), 3u);
  for (const PerfReport& r : reports) {
    EXPECT_EQ(r.samples.size(), 5u);
    EXPECT_TRUE(r.is_median);
    ASSERT_TRUE(r.wall_time.has_value());
    EXPECT_EQ(*r.wall_time, median(r.samples));
    EXPECT_EQ(r.elem_size, 4u);
  }
  EXPECT_EQ(reports[2].shape.c_l, 9u);
}

TEST(BenchmarkTest, SingleRunIsNotAMedian) {
  const auto reports = benchmark(small_request(1));
  for (const PerfReport& r : reports) {
    EXPECT_EQ(r.samples.size(), 1u);
    EXPECT_FALSE(r.is_median);
  }
  EXPECT_FALSE(to_json(reports[0])["is_median"].get<bool>());
}

TEST(BenchmarkTest, RefusesOverBudgetDenseVariant) {
  BenchRequest req;
  req.variants = {Variant::nl, Variant::nl_dot};
  req.shapes = {shape(250, 200, 4, 2, 2)};
  req.repeats = 1;
  const auto reports = benchmark(req);
  ASSERT_EQ(reports.size(), 2u);
  for (const PerfReport& r : reports) {
    EXPECT_TRUE(r.refused);
    EXPECT_FALSE(r.wall_time.has_value());
    EXPECT_TRUE(r.samples.empty());
    EXPECT_EQ(r.peak_intermediate_bytes, 10'000'000'000ULL);
  }
  EXPECT_TRUE(to_json(reports[0])["wall_time_s"].is_null());
}

TEST(BenchmarkTest, ZeroRepeatsRejected) {
  EXPECT_THROW(benchmark(small_request(0)), std::invalid_argument);
}

TEST(ReportTest, CsvHasMetaLineAndFixedHeader) {
  const auto reports = benchmark(small_request(1));
  std::ostringstream os;
  write_csv(os, reports, {"9.9.9", 17});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "# version=9.9.9 seed=17");
  std::getline(is, line);
  EXPECT_EQ(line, "variant,H,W,C,C_theta,C_g,C_l,flops,peak_bytes,wall_time_s");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, 3u);
}

TEST(ReportTest, JsonCarriesMetaAndFields) {
  const auto reports = benchmark(small_request(1));
  std::ostringstream os;
  write_json(os, reports, {"9.9.9", 17});
  const auto doc = nlohmann::json::parse(os.str());
  EXPECT_EQ(doc["version"], "9.9.9");
  EXPECT_EQ(doc["seed"], 17);
  ASSERT_EQ(doc["reports"].size(), 3u);
  for (const char* key : {"variant", "H", "W", "C", "C_theta", "C_g", "C_l", "flops",
                          "peak_bytes", "wall_time_s", "is_median", "projection_flops"})
    EXPECT_TRUE(doc["reports"][0].contains(key)) << key;
  EXPECT_EQ(doc["reports"][1]["variant"], "enl");
}

}  // namespace
}  // namespace enl
