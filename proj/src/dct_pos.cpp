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

#include "enl/dct_pos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace enl {

double dct_coefficient(std::size_t n, std::size_t k, std::size_t size) {
  const double len = static_cast<double>(size);
  const double scale = k == 0 ? std::sqrt(1.0 / len) : std::sqrt(2.0 / len);
  return scale * std::cos(std::numbers::pi * (2.0 * static_cast<double>(n) + 1.0) *
                          static_cast<double>(k) / (2.0 * len));
}

DctBasis build_basis(std::size_t height, std::size_t width, const FrequencyMask& mask) {
  if (height == 0 || width == 0) throw ShapeError("DCT basis needs a non-empty grid");
  if (mask.h_freqs == 0 || mask.w_freqs == 0) throw ShapeError("frequency mask selects nothing");
  if (!mask.weights.empty() && mask.weights.size() != mask.selected())
    throw ShapeError("mask has " + std::to_string(mask.weights.size()) + " weights for " +
                     std::to_string(mask.selected()) + " frequencies");

  DctBasis basis;
  basis.height = height;
  basis.width = width;
  const std::size_t hf = std::min(mask.h_freqs, height);
  const std::size_t wf = std::min(mask.w_freqs, width);
  basis.mask = FrequencyMask{hf, wf, {}};
  if (hf != mask.h_freqs || wf != mask.w_freqs) {
    basis.warnings.push_back("mask " + shape_str(mask.h_freqs, mask.w_freqs) +
                             " clamped to " + shape_str(hf, wf) + " for a " +
                             shape_str(height, width) + " map");
  }
  if (!mask.weights.empty()) {
    basis.mask.weights.reserve(hf * wf);
    std::size_t dropped = 0;
    for (std::size_t u = 0; u < mask.h_freqs; ++u)
      for (std::size_t v = 0; v < mask.w_freqs; ++v) {
        if (u < hf && v < wf)
          basis.mask.weights.push_back(mask.weight(u, v));
        else if (mask.weight(u, v) != 0.0)
          ++dropped;
      }
    if (dropped > 0)
      basis.warnings.push_back(std::to_string(dropped) +
                               " non-zero frequency weights fall outside the clamped mask");
  }

  std::vector<double> rows(height * hf), cols(width * wf);
  for (std::size_t h = 0; h < height; ++h)
    for (std::size_t u = 0; u < hf; ++u) rows[h * hf + u] = dct_coefficient(h, u, height);
  for (std::size_t w = 0; w < width; ++w)
    for (std::size_t v = 0; v < wf; ++v) cols[w * wf + v] = dct_coefficient(w, v, width);

  basis.e_hat = Matrix(height * width, hf * wf);
  for (std::size_t h = 0; h < height; ++h)
    for (std::size_t w = 0; w < width; ++w) {
      auto out = basis.e_hat.row(h * width + w);
      for (std::size_t u = 0; u < hf; ++u)
        for (std::size_t v = 0; v < wf; ++v)
          out[u * wf + v] = std::abs(basis.mask.weight(u, v)) * rows[h * hf + u] * cols[w * wf + v];
    }
  return basis;
}

Matrix dense_l(const DctBasis& basis) {
  const std::size_t hw = basis.pixels();
  if (hw > kDenseLimit)
    throw SizeError("dense L for HW = " + std::to_string(hw) + " exceeds the oracle limit of " +
                    std::to_string(kDenseLimit));
  Matrix l = matmul_a_bt(basis.e_hat, basis.e_hat);
  // The product is symmetric up to rounding order; mirror the upper triangle
  // so symmetry holds exactly.
  for (std::size_t i = 0; i < hw; ++i)
    for (std::size_t j = 0; j < i; ++j) l(i, j) = l(j, i);
  return l;
}

Matrix position_term(const DctBasis& basis, const Matrix& g) {
  if (g.rows() != basis.pixels())
    throw ShapeError("position term: g has " + std::to_string(g.rows()) + " rows, basis has " +
                     std::to_string(basis.pixels()) + " pixels");
  Matrix scratch(basis.c_l(), g.cols());
  Matrix out(g.rows(), g.cols());
  position_term_add_into(basis.e_hat, g, scratch, out);
  return out;
}

FeatureMap extract_filter(const DctBasis& basis, std::size_t center) {
  if (center >= basis.pixels())
    throw std::out_of_range("filter center " + std::to_string(center) + " outside [0, " +
                            std::to_string(basis.pixels()) + ")");
  FeatureMap filter(basis.height, basis.width, 1);
  const auto c = basis.e_hat.row(center);
  for (std::size_t j = 0; j < basis.pixels(); ++j) {
    const auto r = basis.e_hat.row(j);
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * r[k];
    filter.matrix()(j, 0) = acc;
  }
  return filter;
}

std::shared_ptr<const DctBasis> BasisCache::get(std::size_t height, std::size_t width,
                                                const FrequencyMask& mask) {
  Key key{height, width, mask.h_freqs, mask.w_freqs, mask.weights};
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  auto basis = std::make_shared<const DctBasis>(build_basis(height, width, mask));
  entries_.emplace(std::move(key), basis);
  return basis;
}

std::size_t BasisCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace enl
