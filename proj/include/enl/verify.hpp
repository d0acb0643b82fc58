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

#ifndef ENL_VERIFY_HPP_
#define ENL_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace enl::verify {

inline constexpr double kEquivalenceTol64 = 1e-10;
inline constexpr double kEquivalenceTol32 = 1e-4;
inline constexpr double kPositionalTol = 1e-8;
inline constexpr double kBruteForceTol = 1e-10;
inline constexpr double kGradientTol = 1e-6;
inline constexpr double kGradientStep = 1e-5;
// Gradient entries smaller than this are compared on an absolute scale.
inline constexpr double kGradientFloor = 1e-3;

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;     // worst observed error (or count of failures)
  double tolerance = 0.0;
  std::size_t instances = 0;
  double seconds = 0.0;
  std::string detail;
};

nlohmann::json to_json(const CheckResult& r);

// enl_forward vs the dense dot-product block, H, W, C, C_theta, C_g <= 8.
CheckResult check_enl_equivalence(std::size_t instances, std::uint64_t seed, bool single = false);

// enl_forward_pos vs nl_forward_pos(Add, L = E_hat E_hat^T), masks 1x1, 2x2,
// 3x3 and full.
CheckResult check_positional_equivalence(std::size_t instances, std::uint64_t seed);

// nl_forward vs the per-pixel double loop, both similarity kinds, over every
// H, W <= 6 and C, C_theta, C_g <= 4 with `seeds` seeds each.
CheckResult check_brute_force(std::size_t seeds, std::uint64_t seed);

// enl_backward vs central differences, H, W <= 4; half the instances carry
// the position term.
CheckResult check_gradients(std::size_t instances, std::uint64_t seed);

// verify_counts over H, W in {2, 4, 8}, C in {2, 4}, masks 1x1, 2x2, full,
// with and without 1/HW scaling.
CheckResult check_count_lattice();

std::vector<CheckResult> run_oracle_suite(std::uint64_t seed);

}  // namespace enl::verify

#endif  // ENL_VERIFY_HPP_
