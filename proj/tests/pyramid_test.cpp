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

#include <cmath>

#include <gtest/gtest.h>

#include "enl/pyramid.hpp"

namespace enl {
namespace {

// Minted from the serial double path after the oracle suite passed.
constexpr std::uint64_t kGoldenSmallPyramid = 0xa56da58dc79eed77ULL;

PyramidConfig small(bool use_position = true) {
  return PyramidConfig::make(16, 16, 3, 8, 42, use_position);
}

TEST(PyramidConfigTest, LevelSizes) {
  const PyramidConfig cfg = small();
  EXPECT_EQ(cfg.level_height(0), 16u);
  EXPECT_EQ(cfg.level_width(2), 4u);
  EXPECT_EQ(cfg.enl.c_theta, 4u);
  EXPECT_TRUE(cfg.enl.use_position);
}

TEST(PyramidConfigTest, IndivisibleSizeNamesTheLevel) {
  const PyramidConfig cfg = PyramidConfig::make(12, 16, 4, 4, 1);
  try {
    cfg.validate();
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("2^3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(PyramidConfig::make(16, 16, 0, 4, 1).validate(), std::invalid_argument);
}

TEST(PyramidTest, ShapesCoarseToFine) {
  const PyramidConfig cfg = small();
  const PyramidTrace t = pyramid_forward(synth_laterals(cfg), cfg);
  ASSERT_EQ(t.levels.size(), 3u);
  const std::size_t sizes[] = {4, 8, 16};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.levels[i].scale, 2 - i);
    EXPECT_EQ(t.levels[i].output.height(), sizes[i]);
    EXPECT_EQ(t.levels[i].output.width(), sizes[i]);
    EXPECT_EQ(t.levels[i].output.channels(), 8u);
    EXPECT_EQ(t.levels[i].perf.shape.c_l, std::min<std::size_t>(sizes[i], 9) *
                                             std::min<std::size_t>(sizes[i], 9));
    EXPECT_EQ(t.levels[i].perf.samples.size(), 1u);
  }
}

TEST(PyramidTest, DeterministicForSeed) {
  const PyramidConfig cfg = small();
  const PyramidTrace a = pyramid_forward(synth_laterals(cfg), cfg);
  const PyramidTrace b = pyramid_forward(synth_laterals(cfg), cfg);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.levels[i].output, b.levels[i].output);
  PyramidConfig other = cfg;
  other.seed = 43;
  EXPECT_NE(pyramid_forward(synth_laterals(other), other).fingerprint(), a.fingerprint());
}

TEST(PyramidTest, GoldenFingerprint) {
  const PyramidConfig cfg = small();
  const std::uint64_t fp = pyramid_forward(synth_laterals(cfg), cfg).fingerprint();
  EXPECT_EQ(fp, kGoldenSmallPyramid) << "0x" << std::hex << fp;
}

TEST(PyramidTest, SingleLevelIsOneBlock) {
  const PyramidConfig cfg = PyramidConfig::make(8, 8, 1, 6, 5);
  const auto laterals = synth_laterals(cfg);
  const auto weights = pyramid_weights(cfg);
  const DctBasis basis = build_basis(8, 8, cfg.mask);
  EXPECT_EQ(pyramid_forward(laterals, cfg).levels[0].output,
            enl_module(laterals[0], weights[0], cfg.enl, &basis));
}

TEST(PyramidTest, ZeroOutputConvReducesToUpsampleCascade) {
  const PyramidConfig cfg = small();
  const auto laterals = synth_laterals(cfg);
  auto weights = pyramid_weights(cfg);
  for (auto& w : weights) w.w_out = Matrix(w.c_g(), cfg.channels);
  const PyramidTrace t = pyramid_forward(laterals, cfg, weights);
  const FeatureMap expected =
      add(laterals[2], bilinear_upsample2x(add(laterals[1], bilinear_upsample2x(laterals[0]))));
  EXPECT_LE(max_abs_diff(t.levels[2].output, expected), 1e-12);
}

TEST(PyramidTest, DenseReferenceMatches) {
  for (bool pos : {true, false}) {
    const PyramidConfig cfg = small(pos);
    const auto laterals = synth_laterals(cfg);
    const PyramidTrace a = pyramid_forward(laterals, cfg);
    const PyramidTrace b = pyramid_forward(laterals, cfg, PyramidMode::dense_reference);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_LE(max_abs_diff(a.levels[i].output, b.levels[i].output), 1e-8);
    EXPECT_GT(b.levels[2].perf.peak_intermediate_bytes, a.levels[2].perf.peak_intermediate_bytes);
  }
}

TEST(PyramidTest, CoarseLateralReachesFinestOutput) {
  PyramidConfig cfg = small();
  auto laterals = synth_laterals(cfg);
  const PyramidTrace base = pyramid_forward(laterals, cfg);
  laterals[0].at(1, 2, 3) += 1.0;
  const PyramidTrace bumped = pyramid_forward(laterals, cfg);
  EXPECT_GT(max_abs_diff(base.levels[2].output, bumped.levels[2].output), 1e-3);
}

TEST(PyramidTest, LateralsAreStandardNormal) {
  const PyramidConfig cfg = PyramidConfig::make(32, 32, 3, 32, 9);
  const auto laterals = synth_laterals(cfg);
  for (const FeatureMap& l : laterals) {
    double sum = 0.0, sq = 0.0;
    for (double v : l.matrix().values()) {
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(l.matrix().size());
    EXPECT_LE(std::abs(sum / n), 5.0 / std::sqrt(n));
    EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  }
}

TEST(PyramidTest, RejectsWrongLaterals) {
  const PyramidConfig cfg = small();
  auto laterals = synth_laterals(cfg);
  laterals[1] = FeatureMap(8, 7, 8);
  try {
    pyramid_forward(laterals, cfg);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos) << e.what();
  }
  laterals.pop_back();
  EXPECT_THROW(pyramid_forward(laterals, cfg), ShapeError);
}

TEST(PyramidTest, SharedCacheBuildsOneBasisPerLevel) {
  const PyramidConfig cfg = small();
  BasisCache cache;
  const auto laterals = synth_laterals(cfg);
  const auto weights = pyramid_weights(cfg);
  pyramid_forward(laterals, cfg, weights, PyramidMode::efficient, &cache);
  pyramid_forward(laterals, cfg, weights, PyramidMode::efficient, &cache);
  EXPECT_EQ(cache.size(), 3u);
}

TEST(PyramidTest, JsonTraceLayout) {
  const PyramidConfig cfg = small();
  const PyramidTrace t = pyramid_forward(synth_laterals(cfg), cfg);
  const nlohmann::json doc = to_json(t, cfg);
  EXPECT_EQ(doc["fingerprint"].get<std::uint64_t>(), t.fingerprint());
  ASSERT_EQ(doc["trace"].size(), 3u);
  EXPECT_EQ(doc["trace"][0]["output_shape"], nlohmann::json({4, 4, 8}));
  EXPECT_EQ(doc["trace"][2]["scale"], 0);
}

}  // namespace
}  // namespace enl
