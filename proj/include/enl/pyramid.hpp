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

// Forward-only top-down stream. Walking coarse to fine, each level merges
// its lateral with the upsampled output of the level above, runs one
// efficient block on the merged map, and hands the result to the next
// level's 2x upsample.

#ifndef ENL_PYRAMID_HPP_
#define ENL_PYRAMID_HPP_

#include <cstdint>
#include <vector>

#include "enl/enl_core.hpp"
#include "enl/perf.hpp"

namespace enl {

struct PyramidConfig {
  std::size_t base_height = 32;
  std::size_t base_width = 32;
  std::size_t levels = 3;
  std::size_t channels = 256;
  std::uint64_t seed = 0;
  EnlConfig enl = EnlConfig::for_channels(256, true);
  FrequencyMask mask;
  double init_sigma = 0.01;

  // Spatial size of level k (k = 0 is the finest). Throws unless exact.
  std::size_t level_height(std::size_t k) const;
  std::size_t level_width(std::size_t k) const;
  void validate() const;

  static PyramidConfig make(std::size_t base_height, std::size_t base_width, std::size_t levels,
                            std::size_t channels, std::uint64_t seed, bool use_position = true);
};

// efficient: enl_module per level. dense_reference: the same block evaluated
// through the dense dot-product path with L = E_hat E_hat^T.
enum class PyramidMode { efficient, dense_reference };

struct PyramidLevel {
  std::size_t scale = 0;  // size is base / 2^scale
  FeatureMap input;       // merged map the block sees
  FeatureMap output;
  PerfReport perf;
};

struct PyramidTrace {
  std::vector<PyramidLevel> levels;  // coarse -> fine
  std::uint64_t seed = 0;

  std::uint64_t fingerprint() const;
};

// Seeded N(0, 1) laterals, coarse -> fine.
std::vector<FeatureMap> synth_laterals(const PyramidConfig& cfg);

// One weight set per level, coarse -> fine.
std::vector<ModuleWeights> pyramid_weights(const PyramidConfig& cfg);

PyramidTrace pyramid_forward(const std::vector<FeatureMap>& laterals, const PyramidConfig& cfg,
                             PyramidMode mode = PyramidMode::efficient);
PyramidTrace pyramid_forward(const std::vector<FeatureMap>& laterals, const PyramidConfig& cfg,
                             const std::vector<ModuleWeights>& weights,
                             PyramidMode mode = PyramidMode::efficient,
                             BasisCache* cache = nullptr);

nlohmann::json to_json(const PyramidTrace& trace, const PyramidConfig& cfg);

}  // namespace enl

#endif  // ENL_PYRAMID_HPP_
