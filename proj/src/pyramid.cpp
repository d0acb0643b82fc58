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

#include "enl/pyramid.hpp"

#include <chrono>
#include <stdexcept>

#include "enl/rng.hpp"

namespace enl {
namespace {

constexpr std::uint64_t kWeightStream = 100;
constexpr std::uint64_t kLateralStream = 200;

std::size_t level_size(std::size_t base, std::size_t k, const char* axis) {
  const std::size_t div = std::size_t{1} << k;
  if (base % div != 0 || base / div == 0)
    throw ShapeError(std::string("base ") + axis + " " + std::to_string(base) +
                     " is not divisible by 2^" + std::to_string(k));
  return base / div;
}

}  // namespace

std::size_t PyramidConfig::level_height(std::size_t k) const {
  return level_size(base_height, k, "height");
}

std::size_t PyramidConfig::level_width(std::size_t k) const {
  return level_size(base_width, k, "width");
}

void PyramidConfig::validate() const {
  if (levels == 0) throw std::invalid_argument("pyramid needs at least one level");
  if (channels == 0) throw std::invalid_argument("pyramid needs at least one channel");
  (void)level_height(levels - 1);
  (void)level_width(levels - 1);
}

PyramidConfig PyramidConfig::make(std::size_t base_height, std::size_t base_width,
                                  std::size_t levels, std::size_t channels, std::uint64_t seed,
                                  bool use_position) {
  PyramidConfig cfg;
  cfg.base_height = base_height;
  cfg.base_width = base_width;
  cfg.levels = levels;
  cfg.channels = channels;
  cfg.seed = seed;
  cfg.enl = EnlConfig::for_channels(channels, use_position);
  return cfg;
}

std::uint64_t PyramidTrace::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const PyramidLevel& level : levels) h = bit_fingerprint(level.output.matrix(), h);
  return h;
}

std::vector<FeatureMap> synth_laterals(const PyramidConfig& cfg) {
  cfg.validate();
  std::vector<FeatureMap> laterals;
  for (std::size_t i = 0; i < cfg.levels; ++i) {
    const std::size_t k = cfg.levels - 1 - i;
    GaussianSource rng(derive_seed(cfg.seed, kLateralStream + k));
    laterals.push_back(rng.feature_map(cfg.level_height(k), cfg.level_width(k), cfg.channels));
  }
  return laterals;
}

std::vector<ModuleWeights> pyramid_weights(const PyramidConfig& cfg) {
  cfg.validate();
  std::vector<ModuleWeights> weights;
  for (std::size_t i = 0; i < cfg.levels; ++i) {
    const std::size_t k = cfg.levels - 1 - i;
    weights.push_back(ModuleWeights::random(cfg.channels, cfg.enl.c_theta, cfg.enl.c_g,
                                            derive_seed(cfg.seed, kWeightStream + k),
                                            cfg.init_sigma));
  }
  return weights;
}

PyramidTrace pyramid_forward(const std::vector<FeatureMap>& laterals, const PyramidConfig& cfg,
                             PyramidMode mode) {
  return pyramid_forward(laterals, cfg, pyramid_weights(cfg), mode);
}

PyramidTrace pyramid_forward(const std::vector<FeatureMap>& laterals, const PyramidConfig& cfg,
                             const std::vector<ModuleWeights>& weights, PyramidMode mode,
                             BasisCache* cache) {
  cfg.validate();
  if (laterals.size() != cfg.levels)
    throw ShapeError("expected " + std::to_string(cfg.levels) + " laterals, got " +
                     std::to_string(laterals.size()));
  if (weights.size() != cfg.levels)
    throw ShapeError("expected " + std::to_string(cfg.levels) + " weight sets, got " +
                     std::to_string(weights.size()));
  BasisCache local_cache;
  if (cache == nullptr) cache = &local_cache;

  PyramidTrace trace;
  trace.seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.levels; ++i) {
    const std::size_t k = cfg.levels - 1 - i;
    const std::size_t h = cfg.level_height(k), w = cfg.level_width(k);
    const FeatureMap& lateral = laterals[i];
    if (lateral.height() != h || lateral.width() != w || lateral.channels() != cfg.channels)
      throw ShapeError("level " + std::to_string(k) + " lateral is " +
                       shape_str(lateral.height(), lateral.width()) + "x" +
                       std::to_string(lateral.channels()) + ", expected " + shape_str(h, w) +
                       "x" + std::to_string(cfg.channels));

    PyramidLevel level;
    level.scale = k;
    level.input = i == 0 ? lateral : add(lateral, bilinear_upsample2x(trace.levels.back().output));

    std::shared_ptr<const DctBasis> basis;
    if (cfg.enl.use_position) basis = cache->get(h, w, cfg.mask);

    const auto t0 = std::chrono::steady_clock::now();
    if (mode == PyramidMode::efficient) {
      level.output = enl_module(level.input, weights[i], cfg.enl, basis.get());
    } else {
      const FeatureMap y =
          cfg.enl.use_position
              ? nl_forward_pos(level.input, weights[i], SimilarityKind::dot_product,
                               dense_l(*basis), Combine::add, cfg.enl.normalization)
              : nl_forward(level.input, weights[i], SimilarityKind::dot_product,
                           cfg.enl.normalization);
      level.output = residual_wrap(level.input, y, weights[i].w_out);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    PerfShape shape{h, w, cfg.channels, cfg.enl.c_theta, cfg.enl.c_g, basis ? basis->c_l() : 0};
    if (mode == PyramidMode::efficient)
      level.perf = count_enl(shape, cfg.enl.use_position, sizeof(double), cfg.enl.normalization);
    else
      level.perf = count_nl(shape, SimilarityKind::dot_product, sizeof(double),
                            cfg.enl.normalization);
    level.perf.shape.c_l = shape.c_l;
    level.perf.samples = {seconds};
    level.perf.wall_time = seconds;
    trace.levels.push_back(std::move(level));
  }
  return trace;
}

nlohmann::json to_json(const PyramidTrace& trace, const PyramidConfig& cfg) {
  nlohmann::json doc;
  doc["seed"] = trace.seed;
  doc["base"] = {cfg.base_height, cfg.base_width};
  doc["levels"] = cfg.levels;
  doc["channels"] = cfg.channels;
  doc["C_theta"] = cfg.enl.c_theta;
  doc["C_g"] = cfg.enl.c_g;
  doc["use_position"] = cfg.enl.use_position;
  doc["fingerprint"] = trace.fingerprint();
  doc["trace"] = nlohmann::json::array();
  for (const PyramidLevel& level : trace.levels) {
    nlohmann::json j;
    j["scale"] = level.scale;
    j["input_shape"] = {level.input.height(), level.input.width(), level.input.channels()};
    j["output_shape"] = {level.output.height(), level.output.width(), level.output.channels()};
    j["output_fingerprint"] = bit_fingerprint(level.output.matrix());
    j["output_max_abs"] = max_abs(level.output.matrix());
    j["perf"] = to_json(level.perf);
    doc["trace"].push_back(std::move(j));
  }
  return doc;
}

}  // namespace enl
