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

// Independent reference computations. Nothing here calls the matmul kernels;
// every sum is an explicit loop over pixels and channels.

#ifndef ENL_ORACLE_HPP_
#define ENL_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <random>

#include "enl/enl_core.hpp"

namespace enl::oracle {

// y_i = sum_j F(x_i, x_j) g(x_j), one pixel pair at a time. The embedded
// Gaussian form divides by sum_j exp(theta_i . phi_j) without max shifting.
FeatureMap brute_force_nl(const FeatureMap& x, const ModuleWeights& w, SimilarityKind kind,
                          Normalization norm = Normalization::none);

// Same sum with the position term: F(i, j) + L(i, j), where L(i, j) is
// evaluated from the closed-form cosines.
FeatureMap brute_force_nl_pos(const FeatureMap& x, const ModuleWeights& w,
                              const FrequencyMask& mask, Normalization norm = Normalization::none);

// L(i, j) straight from the separable DCT-II formula.
double closed_form_l(std::size_t height, std::size_t width, const FrequencyMask& mask,
                     std::size_t i, std::size_t j);

// Central differences of <upstream, enl_module(x)> for every entry of x and
// every weight matrix.
EnlGradients finite_difference_gradients(const FeatureMap& x, const ModuleWeights& w,
                                         const EnlConfig& cfg, const DctBasis* basis,
                                         const FeatureMap& upstream, double step = 1e-5);

// |a - b| / max(|a|, |b|, floor), maximized over all entries.
double max_relative_error(const Matrix& analytic, const Matrix& numeric, double floor);
double max_relative_error(const EnlGradients& analytic, const EnlGradients& numeric,
                          double floor);

// Portable bounded draws (std::uniform_int_distribution is implementation
// defined).
class Dice {
 public:
  explicit Dice(std::uint64_t seed) : engine_(seed) {}
  std::size_t between(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  std::uint64_t seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct Instance {
  FeatureMap x;
  ModuleWeights w;
  EnlConfig cfg;
};

// Unit-scale random problem: x ~ N(0, 1), weights ~ N(0, weight_sigma^2 / C).
Instance random_instance(std::size_t height, std::size_t width, std::size_t channels,
                         std::size_t c_theta, std::size_t c_g, std::uint64_t seed,
                         double weight_sigma = 1.0);

}  // namespace enl::oracle

#endif  // ENL_ORACLE_HPP_
