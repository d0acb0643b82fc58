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

#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "enl/dct_pos.hpp"
#include "enl/nl_reference.hpp"
#include "enl/oracle.hpp"

namespace enl {
namespace {

FeatureMap permute_pixels(const FeatureMap& x, const std::vector<std::size_t>& perm) {
  FeatureMap out(x.height(), x.width(), x.channels());
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t c = 0; c < x.channels(); ++c) out.matrix()(i, c) = x.matrix()(perm[i], c);
  return out;
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  oracle::Dice dice(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[dice.between(0, i - 1)]);
  return perm;
}

TEST(NlAffinityTest, ZeroInputGivesUniformSoftmax) {
  const auto w = ModuleWeights::random(3, 2, 2, 1, 1.0);
  const AffinityMatrix a = nl_affinity(FeatureMap(2, 3, 3), w, SimilarityKind::embedded_gaussian);
  for (double v : a.f.values()) EXPECT_DOUBLE_EQ(v, 1.0 / 6.0);
}

TEST(NlAffinityTest, ZeroInputGivesZeroDotProduct) {
  const auto w = ModuleWeights::random(3, 2, 2, 1, 1.0);
  const AffinityMatrix a = nl_affinity(FeatureMap(2, 3, 3), w, SimilarityKind::dot_product);
  EXPECT_EQ(max_abs(a.f), 0.0);
}

TEST(NlAffinityTest, SoftmaxRowsArePositiveAndSumToOne) {
  const auto inst = oracle::random_instance(5, 4, 6, 3, 3, 21);
  const AffinityMatrix a = nl_affinity(inst.x, inst.w, SimilarityKind::embedded_gaussian);
  ASSERT_EQ(a.f.rows(), 20u);
  for (std::size_t i = 0; i < a.f.rows(); ++i) {
    double sum = 0.0;
    for (double v : a.f.row(i)) {
      EXPECT_GT(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(NlAffinityTest, OneOverHwScalesDotProductOnly) {
  const auto inst = oracle::random_instance(3, 3, 4, 2, 2, 5);
  const Matrix raw = nl_affinity(inst.x, inst.w, SimilarityKind::dot_product).f;
  const Matrix scaled =
      nl_affinity(inst.x, inst.w, SimilarityKind::dot_product, Normalization::one_over_hw).f;
  for (std::size_t k = 0; k < raw.size(); ++k)
    EXPECT_NEAR(scaled.data()[k], raw.data()[k] / 9.0, 1e-15);
  EXPECT_EQ(nl_affinity(inst.x, inst.w, SimilarityKind::embedded_gaussian).f,
            nl_affinity(inst.x, inst.w, SimilarityKind::embedded_gaussian,
                        Normalization::one_over_hw)
                .f);
}

TEST(NlForwardTest, SinglePixelSoftmaxReturnsG) {
  const auto inst = oracle::random_instance(1, 1, 4, 3, 2, 8);
  const FeatureMap y = nl_forward(inst.x, inst.w, SimilarityKind::embedded_gaussian);
  const Matrix g = matmul(inst.x.matrix(), inst.w.w_g);
  EXPECT_LE(max_abs_diff(y.matrix(), g), 1e-15);
}

TEST(NlForwardTest, MatchesPerPixelLoopOnFixedInstance) {
  const auto inst = oracle::random_instance(4, 4, 3, 3, 3, 7);
  for (auto kind : {SimilarityKind::embedded_gaussian, SimilarityKind::dot_product})
    for (auto norm : {Normalization::none, Normalization::one_over_hw})
      EXPECT_LE(max_abs_diff(nl_forward(inst.x, inst.w, kind, norm),
                             oracle::brute_force_nl(inst.x, inst.w, kind, norm)),
                1e-10);
}

TEST(NlForwardTest, ParallelMatchesSerial) {
  const auto inst = oracle::random_instance(6, 7, 5, 4, 3, 9);
  for (auto kind : {SimilarityKind::embedded_gaussian, SimilarityKind::dot_product})
    EXPECT_LE(max_abs_diff(nl_forward(inst.x, inst.w, kind, Normalization::none, Exec::parallel),
                           nl_forward(inst.x, inst.w, kind)),
              1e-12);
}

TEST(NlForwardTest, ChannelMismatchThrows) {
  const auto w = ModuleWeights::random(4, 2, 2, 1);
  EXPECT_THROW(nl_forward(FeatureMap(2, 2, 3), w, SimilarityKind::dot_product), ShapeError);
}

TEST(NlForwardTest, MismatchedEmbeddingsThrow) {
  auto w = ModuleWeights::random(4, 2, 2, 1);
  w.w_phi = Matrix(4, 3);
  EXPECT_THROW(nl_forward(FeatureMap(2, 2, 4), w, SimilarityKind::dot_product), ShapeError);
}

TEST(NlForwardTest, PermutationEquivariant) {
  oracle::Dice dice(31);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t h = dice.between(1, 6), w = dice.between(1, 6);
    const auto inst = oracle::random_instance(h, w, dice.between(1, 5), dice.between(1, 4),
                                              dice.between(1, 4), dice.seed());
    const auto perm = shuffled(h * w, dice.seed());
    for (auto kind : {SimilarityKind::embedded_gaussian, SimilarityKind::dot_product}) {
      const FeatureMap lhs = nl_forward(permute_pixels(inst.x, perm), inst.w, kind);
      const FeatureMap rhs = permute_pixels(nl_forward(inst.x, inst.w, kind), perm);
      ASSERT_LE(max_abs_diff(lhs, rhs), 1e-12);
    }
  }
}

TEST(NlForwardPosTest, PositionTermBreaksPermutationEquivariance) {
  const auto inst = oracle::random_instance(4, 4, 3, 2, 2, 12);
  const Matrix l = dense_l(build_basis(4, 4, {2, 2, {}}));
  // L depends on absolute position, so shuffling pixels changes the output
  // by more than a reordering.
  const std::vector<std::size_t> perm = shuffled(16, 99);
  const FeatureMap lhs = nl_forward_pos(permute_pixels(inst.x, perm), inst.w,
                                        SimilarityKind::dot_product, l, Combine::add);
  const FeatureMap rhs = permute_pixels(
      nl_forward_pos(inst.x, inst.w, SimilarityKind::dot_product, l, Combine::add), perm);
  EXPECT_GT(max_abs_diff(lhs, rhs), 1e-3);
}

TEST(NlForwardPosTest, MultiplyByOnesIsIdentity) {
  const auto inst = oracle::random_instance(3, 4, 3, 2, 2, 13);
  const Matrix ones(12, 12, 1.0);
  for (auto kind : {SimilarityKind::embedded_gaussian, SimilarityKind::dot_product})
    EXPECT_EQ(nl_forward_pos(inst.x, inst.w, kind, ones, Combine::mul),
              nl_forward(inst.x, inst.w, kind));
}

TEST(NlForwardPosTest, AddZerosIsIdentity) {
  const auto inst = oracle::random_instance(3, 4, 3, 2, 2, 14);
  const Matrix zeros(12, 12);
  for (auto kind : {SimilarityKind::embedded_gaussian, SimilarityKind::dot_product})
    EXPECT_EQ(nl_forward_pos(inst.x, inst.w, kind, zeros, Combine::add),
              nl_forward(inst.x, inst.w, kind));
}

TEST(NlForwardPosTest, MatchesClosedFormLoop) {
  const auto inst = oracle::random_instance(5, 3, 3, 2, 3, 15);
  const FrequencyMask mask{2, 3, {}};
  const FeatureMap y = nl_forward_pos(inst.x, inst.w, SimilarityKind::dot_product,
                                      dense_l(build_basis(5, 3, mask)), Combine::add);
  EXPECT_LE(max_abs_diff(y, oracle::brute_force_nl_pos(inst.x, inst.w, mask)), 1e-10);
}

TEST(NlForwardPosTest, WrongSizedLThrows) {
  const auto inst = oracle::random_instance(2, 2, 2, 1, 1, 16);
  EXPECT_THROW(nl_forward_pos(inst.x, inst.w, SimilarityKind::dot_product, Matrix(3, 3),
                              Combine::add),
               ShapeError);
}

TEST(ResidualWrapTest, ZeroBranchReturnsInput) {
  const auto inst = oracle::random_instance(3, 3, 4, 2, 2, 17);
  EXPECT_EQ(residual_wrap(inst.x, FeatureMap(3, 3, 2), inst.w.w_out), inst.x);
}

TEST(ResidualWrapTest, ZeroOutputConvReturnsInput) {
  const auto inst = oracle::random_instance(3, 3, 4, 2, 2, 18);
  const FeatureMap y = nl_forward(inst.x, inst.w, SimilarityKind::dot_product);
  EXPECT_EQ(residual_wrap(inst.x, y, Matrix(2, 4)), inst.x);
}

TEST(ResidualWrapTest, AddsProjectedBranch) {
  const FeatureMap x(1, 1, Matrix{{1, 1}});
  const FeatureMap y(1, 1, Matrix{{2}});
  EXPECT_EQ(residual_wrap(x, y, Matrix{{3, -1}}).matrix(), (Matrix{{7, -1}}));
}

TEST(ResidualWrapTest, ChannelMismatchThrows) {
  EXPECT_THROW(residual_wrap(FeatureMap(2, 2, 3), FeatureMap(2, 2, 2), Matrix(2, 4)), ShapeError);
  EXPECT_THROW(residual_wrap(FeatureMap(2, 2, 3), FeatureMap(2, 1, 2), Matrix(2, 3)), ShapeError);
}

TEST(ModuleWeightsTest, RandomIsDeterministicAndOrdered) {
  const auto a = ModuleWeights::random(4, 3, 2, 77, 0.5);
  const auto b = ModuleWeights::random(4, 3, 2, 77, 0.5);
  EXPECT_EQ(a.w_theta, b.w_theta);
  EXPECT_EQ(a.w_out, b.w_out);
  GaussianSource rng(77);
  EXPECT_EQ(a.w_theta, rng.matrix(4, 3, 0.5));
  EXPECT_EQ(a.w_phi, rng.matrix(4, 3, 0.5));
  EXPECT_EQ(a.channels(), 4u);
  EXPECT_EQ(a.c_theta(), 3u);
  EXPECT_EQ(a.c_g(), 2u);
}

}  // namespace
}  // namespace enl
