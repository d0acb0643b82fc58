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

#ifndef ENL_RNG_HPP_
#define ENL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "enl/matrix.hpp"

namespace enl {

// Box-Muller over mt19937_64. std::normal_distribution is implementation
// defined, so it would break cross-toolchain golden values.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next(double sigma = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return sigma * spare_;
    }
    // 53-bit uniforms in (0, 1].
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return sigma * r * std::cos(a);
  }

  Matrix matrix(std::size_t rows, std::size_t cols, double sigma = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.values()) v = next(sigma);
    return m;
  }

  FeatureMap feature_map(std::size_t h, std::size_t w, std::size_t c, double sigma = 1.0) {
    return FeatureMap(h, w, matrix(h * w, c, sigma));
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Decorrelates a base seed for a numbered sub-stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace enl

#endif  // ENL_RNG_HPP_
