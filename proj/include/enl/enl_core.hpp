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

// Efficient non-local block. With a dot-product affinity the chain
// theta * phi^T * g is evaluated right to left, so the largest transient is
// C_theta x C_g (or C_l x C_g for the position term) instead of HW x HW.

#ifndef ENL_ENL_CORE_HPP_
#define ENL_ENL_CORE_HPP_

#include <algorithm>
#include <stdexcept>

#include "enl/dct_pos.hpp"
#include "enl/nl_reference.hpp"

namespace enl {

struct EnlConfig {
  std::size_t c_theta = 1;
  std::size_t c_g = 1;
  bool use_position = false;
  Normalization normalization = Normalization::none;

  // C_theta = C_g = max(1, C / 2).
  static EnlConfig for_channels(std::size_t channels, bool use_position = false) {
    const std::size_t half = std::max<std::size_t>(1, channels / 2);
    return {half, half, use_position, Normalization::none};
  }
};

template <typename T>
struct BasicEnlGradients {
  BasicFeatureMap<T> d_x;
  BasicMatrix<T> d_w_theta;
  BasicMatrix<T> d_w_phi;
  BasicMatrix<T> d_w_g;
  BasicMatrix<T> d_w_out;
};

using EnlGradients = BasicEnlGradients<double>;

namespace detail {

template <typename T>
void check_config(const BasicModuleWeights<T>& w, const EnlConfig& cfg) {
  w.validate();
  if (cfg.c_theta == 0 || cfg.c_g == 0) throw ShapeError("embedding widths must be >= 1");
  if (w.c_theta() != cfg.c_theta || w.c_g() != cfg.c_g)
    throw ShapeError("config widths (" + std::to_string(cfg.c_theta) + ", " +
                     std::to_string(cfg.c_g) + ") do not match weights (" +
                     std::to_string(w.c_theta()) + ", " + std::to_string(w.c_g()) + ")");
}

inline void check_basis(const DctBasis& basis, std::size_t height, std::size_t width) {
  if (basis.height != height || basis.width != width)
    throw ShapeError("basis built for " + shape_str(basis.height, basis.width) +
                     ", feature map is " + shape_str(height, width));
}

}  // namespace detail

// Block interior: out = theta [s phi^T g] (+ E_hat [E_hat^T g]).
// `out` must be HW x C_g; e_hat may be null. Transients: C_theta x C_g and,
// with a basis, C_l x C_g.
template <typename T>
void enl_aggregate_into(const Projections<T>& p, Normalization norm, const BasicMatrix<T>* e_hat,
                        BasicMatrix<T>& out, Exec exec = Exec::serial) {
  BasicMatrix<T> inner(p.phi.cols(), p.g.cols());
  matmul_at_b_into(p.phi, p.g, inner, exec);
  if (norm == Normalization::one_over_hw)
    scale_inplace(inner, T(1.0 / static_cast<double>(p.g.rows())));
  matmul_into(p.theta, inner, out, exec);
  if (e_hat != nullptr) {
    BasicMatrix<T> scratch(e_hat->cols(), p.g.cols());
    position_term_add_into(*e_hat, p.g, scratch, out, exec);
  }
}

template <typename T>
BasicFeatureMap<T> enl_forward(const BasicFeatureMap<T>& x, const BasicModuleWeights<T>& w,
                               const EnlConfig& cfg, Exec exec = Exec::serial) {
  if (cfg.use_position)
    throw std::invalid_argument("enl_forward called with use_position set; use enl_forward_pos");
  detail::check_config(w, cfg);
  const Projections<T> p = project(x, w, exec);
  BasicMatrix<T> y(x.pixels(), cfg.c_g);
  enl_aggregate_into<T>(p, cfg.normalization, nullptr, y, exec);
  return BasicFeatureMap<T>(x.height(), x.width(), std::move(y));
}

// E_hat supplied in the working precision; must be HW x C_l for x's grid.
template <typename T>
BasicFeatureMap<T> enl_forward_pos(const BasicFeatureMap<T>& x, const BasicModuleWeights<T>& w,
                                   const EnlConfig& cfg, const BasicMatrix<T>& e_hat,
                                   Exec exec = Exec::serial) {
  detail::check_config(w, cfg);
  if (e_hat.rows() != x.pixels())
    throw ShapeError("position basis has " + std::to_string(e_hat.rows()) + " rows, map has " +
                     std::to_string(x.pixels()) + " pixels");
  const Projections<T> p = project(x, w, exec);
  BasicMatrix<T> y(x.pixels(), cfg.c_g);
  enl_aggregate_into(p, cfg.normalization, &e_hat, y, exec);
  return BasicFeatureMap<T>(x.height(), x.width(), std::move(y));
}

inline FeatureMap enl_forward_pos(const FeatureMap& x, const ModuleWeights& w,
                                  const EnlConfig& cfg, const DctBasis& basis,
                                  Exec exec = Exec::serial) {
  detail::check_basis(basis, x.height(), x.width());
  return enl_forward_pos(x, w, cfg, basis.e_hat, exec);
}

// z = conv1x1(y, w_out) + x, with y from the positional or plain forward as
// cfg.use_position dictates.
inline FeatureMap enl_module(const FeatureMap& x, const ModuleWeights& w, const EnlConfig& cfg,
                             const DctBasis* basis = nullptr, Exec exec = Exec::serial) {
  if (cfg.use_position) {
    if (basis == nullptr) throw std::invalid_argument("use_position requires a DCT basis");
    return residual_wrap(x, enl_forward_pos(x, w, cfg, *basis, exec), w.w_out, exec);
  }
  return residual_wrap(x, enl_forward(x, w, cfg, exec), w.w_out, exec);
}

// Gradients of <upstream, enl_module(x)> with respect to x and every weight.
// E_hat is a constant. Nothing of size HW x HW is formed.
//
//   theta = X Wt, phi = X Wp, G = X Wg, M = s phi^T G, P = E^T G
//   Y = theta M + E P,  Z = Y Wo + X
//
//   dWo = Y^T U           dY = U Wo^T
//   dtheta = dY M^T       dM = theta^T dY
//   dphi = s G dM^T       dG = s phi dM + E (E^T dY)
//   dWt = X^T dtheta, dWp = X^T dphi, dWg = X^T dG
//   dX = U + dtheta Wt^T + dphi Wp^T + dG Wg^T
inline EnlGradients enl_backward(const FeatureMap& x, const ModuleWeights& w, const EnlConfig& cfg,
                                 const DctBasis* basis, const FeatureMap& upstream) {
  detail::check_config(w, cfg);
  if (x.channels() != w.channels())
    throw ShapeError("input has " + std::to_string(x.channels()) + " channels, weights expect " +
                     std::to_string(w.channels()));
  if (!upstream.same_shape(x)) throw ShapeError("upstream cotangent must have the output's shape");
  const Matrix* e_hat = nullptr;
  if (cfg.use_position) {
    if (basis == nullptr) throw std::invalid_argument("use_position requires a DCT basis");
    detail::check_basis(*basis, x.height(), x.width());
    e_hat = &basis->e_hat;
  }

  const Matrix& xm = x.matrix();
  const Matrix& u = upstream.matrix();
  const double s = cfg.normalization == Normalization::one_over_hw
                       ? 1.0 / static_cast<double>(x.pixels())
                       : 1.0;

  const Projections<double> p = project(x, w);
  Matrix m = matmul_at_b(p.phi, p.g);
  scale_inplace(m, s);
  Matrix y = matmul(p.theta, m);
  if (e_hat != nullptr) {
    Matrix scratch(e_hat->cols(), p.g.cols());
    position_term_add_into(*e_hat, p.g, scratch, y);
  }

  EnlGradients grads;
  grads.d_w_out = matmul_at_b(y, u);
  const Matrix d_y = matmul_a_bt(u, w.w_out);

  const Matrix d_theta = matmul_a_bt(d_y, m);
  const Matrix d_m = matmul_at_b(p.theta, d_y);
  Matrix d_phi = matmul_a_bt(p.g, d_m);
  scale_inplace(d_phi, s);
  Matrix d_g = matmul(p.phi, d_m);
  scale_inplace(d_g, s);
  if (e_hat != nullptr) {
    Matrix scratch(e_hat->cols(), d_y.cols());
    position_term_add_into(*e_hat, d_y, scratch, d_g);
  }

  grads.d_w_theta = matmul_at_b(xm, d_theta);
  grads.d_w_phi = matmul_at_b(xm, d_phi);
  grads.d_w_g = matmul_at_b(xm, d_g);

  Matrix d_x = u;
  matmul_add_into(d_theta, w.w_theta.transposed(), d_x);
  matmul_add_into(d_phi, w.w_phi.transposed(), d_x);
  matmul_add_into(d_g, w.w_g.transposed(), d_x);
  grads.d_x = FeatureMap(x.height(), x.width(), std::move(d_x));
  return grads;
}

}  // namespace enl

#endif  // ENL_ENL_CORE_HPP_
