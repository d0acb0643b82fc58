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

#include "enl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace enl::oracle {
namespace {

// theta(x_i), phi(x_i) or g(x_i) for one pixel.
std::vector<double> embed(const FeatureMap& x, std::size_t pixel, const Matrix& weight) {
  std::vector<double> out(weight.cols(), 0.0);
  for (std::size_t o = 0; o < weight.cols(); ++o)
    for (std::size_t c = 0; c < x.channels(); ++c) out[o] += x.matrix()(pixel, c) * weight(c, o);
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double cosine_basis(std::size_t n, std::size_t k, std::size_t size) {
  const double len = static_cast<double>(size);
  const double scale = k == 0 ? 1.0 / std::sqrt(len) : std::sqrt(2.0) / std::sqrt(len);
  return scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                          (static_cast<double>(n) + 0.5) / len);
}

FeatureMap brute_force(const FeatureMap& x, const ModuleWeights& w, SimilarityKind kind,
                       Normalization norm, const FrequencyMask* mask) {
  const std::size_t hw = x.pixels();
  std::vector<std::vector<double>> theta, phi, g;
  for (std::size_t i = 0; i < hw; ++i) {
    theta.push_back(embed(x, i, w.w_theta));
    phi.push_back(embed(x, i, w.w_phi));
    g.push_back(embed(x, i, w.w_g));
  }
  FeatureMap y(x.height(), x.width(), w.c_g());
  for (std::size_t i = 0; i < hw; ++i) {
    double z = 1.0;
    if (kind == SimilarityKind::embedded_gaussian) {
      z = 0.0;
      for (std::size_t j = 0; j < hw; ++j) z += std::exp(dot(theta[i], phi[j]));
    } else if (norm == Normalization::one_over_hw) {
      z = static_cast<double>(hw);
    }
    for (std::size_t j = 0; j < hw; ++j) {
      const double s = dot(theta[i], phi[j]);
      double f = kind == SimilarityKind::embedded_gaussian ? std::exp(s) / z : s / z;
      if (mask != nullptr) f += closed_form_l(x.height(), x.width(), *mask, i, j);
      for (std::size_t c = 0; c < w.c_g(); ++c) y.matrix()(i, c) += f * g[j][c];
    }
  }
  return y;
}

template <typename F>
void perturb_each(Matrix& m, double step, F&& objective, Matrix& grad) {
  grad = Matrix(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double saved = m.data()[k];
    m.data()[k] = saved + step;
    const double up = objective();
    m.data()[k] = saved - step;
    const double down = objective();
    m.data()[k] = saved;
    grad.data()[k] = (up - down) / (2.0 * step);
  }
}

}  // namespace

double closed_form_l(std::size_t height, std::size_t width, const FrequencyMask& mask,
                     std::size_t i, std::size_t j) {
  const std::size_t hi = i / width, wi = i % width, hj = j / width, wj = j % width;
  const std::size_t hf = std::min(mask.h_freqs, height), wf = std::min(mask.w_freqs, width);
  double s = 0.0;
  for (std::size_t u = 0; u < hf; ++u)
    for (std::size_t v = 0; v < wf; ++v) {
      const double d = mask.weights.empty() ? 1.0 : mask.weights[u * mask.w_freqs + v];
      s += d * d * cosine_basis(hi, u, height) * cosine_basis(hj, u, height) *
           cosine_basis(wi, v, width) * cosine_basis(wj, v, width);
    }
  return s;
}

FeatureMap brute_force_nl(const FeatureMap& x, const ModuleWeights& w, SimilarityKind kind,
                          Normalization norm) {
  return brute_force(x, w, kind, norm, nullptr);
}

FeatureMap brute_force_nl_pos(const FeatureMap& x, const ModuleWeights& w,
                              const FrequencyMask& mask, Normalization norm) {
  return brute_force(x, w, SimilarityKind::dot_product, norm, &mask);
}

EnlGradients finite_difference_gradients(const FeatureMap& x, const ModuleWeights& w,
                                         const EnlConfig& cfg, const DctBasis* basis,
                                         const FeatureMap& upstream, double step) {
  FeatureMap xv = x;
  ModuleWeights wv = w;
  auto objective = [&] {
    const FeatureMap z = enl_module(xv, wv, cfg, basis);
    double s = 0.0;
    for (std::size_t k = 0; k < z.matrix().size(); ++k)
      s += upstream.matrix().data()[k] * z.matrix().data()[k];
    return s;
  };
  EnlGradients g;
  Matrix dx;
  perturb_each(xv.matrix(), step, objective, dx);
  g.d_x = FeatureMap(x.height(), x.width(), std::move(dx));
  perturb_each(wv.w_theta, step, objective, g.d_w_theta);
  perturb_each(wv.w_phi, step, objective, g.d_w_phi);
  perturb_each(wv.w_g, step, objective, g.d_w_g);
  perturb_each(wv.w_out, step, objective, g.d_w_out);
  return g;
}

double max_relative_error(const Matrix& analytic, const Matrix& numeric, double floor) {
  if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols())
    throw ShapeError("gradient shapes differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const double a = analytic.data()[k], n = numeric.data()[k];
    const double denom = std::max({std::abs(a), std::abs(n), floor});
    worst = std::max(worst, std::abs(a - n) / denom);
  }
  return worst;
}

double max_relative_error(const EnlGradients& a, const EnlGradients& n, double floor) {
  return std::max({max_relative_error(a.d_x.matrix(), n.d_x.matrix(), floor),
                   max_relative_error(a.d_w_theta, n.d_w_theta, floor),
                   max_relative_error(a.d_w_phi, n.d_w_phi, floor),
                   max_relative_error(a.d_w_g, n.d_w_g, floor),
                   max_relative_error(a.d_w_out, n.d_w_out, floor)});
}

Instance random_instance(std::size_t height, std::size_t width, std::size_t channels,
                         std::size_t c_theta, std::size_t c_g, std::uint64_t seed,
                         double weight_sigma) {
  GaussianSource rng(seed);
  Instance inst;
  inst.x = rng.feature_map(height, width, channels);
  inst.w = ModuleWeights::random(channels, c_theta, c_g, derive_seed(seed, 1),
                                 weight_sigma / std::sqrt(static_cast<double>(channels)));
  inst.cfg = EnlConfig{c_theta, c_g, false, Normalization::none};
  return inst;
}

}  // namespace enl::oracle
