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

// Dense non-local block. The HW x HW affinity is materialized on purpose:
// this is the baseline the efficient block is checked and measured against.

#ifndef ENL_NL_REFERENCE_HPP_
#define ENL_NL_REFERENCE_HPP_

#include <cstdint>
#include <string>

#include "enl/rng.hpp"
#include "enl/tensor.hpp"

namespace enl {

enum class SimilarityKind { embedded_gaussian, dot_product };

// Uniform scaling of the raw dot-product affinity. Never applied to the
// softmax variant, which is already normalized.
enum class Normalization { none, one_over_hw };

// How a dense position term L meets the affinity F.
enum class Combine { add, mul };

inline const char* to_string(SimilarityKind k) {
  return k == SimilarityKind::embedded_gaussian ? "embedded_gaussian" : "dot_product";
}

template <typename T>
struct BasicModuleWeights {
  BasicMatrix<T> w_theta;  // C x C_theta
  BasicMatrix<T> w_phi;    // C x C_theta
  BasicMatrix<T> w_g;      // C x C_g
  BasicMatrix<T> w_out;    // C_g x C
  std::uint64_t seed = 0;
  double init_sigma = 0.01;

  std::size_t channels() const { return w_theta.rows(); }
  std::size_t c_theta() const { return w_theta.cols(); }
  std::size_t c_g() const { return w_g.cols(); }

  void validate() const {
    const std::size_t c = channels();
    if (w_phi.rows() != c || w_g.rows() != c || w_out.cols() != c)
      throw ShapeError("module weights disagree on input channels");
    if (w_phi.cols() != c_theta())
      throw ShapeError("theta and phi embeddings must share width: " + shape_str(w_theta) +
                       " vs " + shape_str(w_phi));
    if (w_out.rows() != c_g())
      throw ShapeError("output conv " + shape_str(w_out) + " does not consume C_g = " +
                       std::to_string(c_g()));
  }

  // i.i.d. N(0, sigma^2) draws in the order theta, phi, g, out.
  static BasicModuleWeights random(std::size_t channels, std::size_t c_theta, std::size_t c_g,
                                   std::uint64_t seed, double sigma = 0.01) {
    GaussianSource rng(seed);
    BasicModuleWeights w;
    w.w_theta = rng.matrix(channels, c_theta, sigma).template cast<T>();
    w.w_phi = rng.matrix(channels, c_theta, sigma).template cast<T>();
    w.w_g = rng.matrix(channels, c_g, sigma).template cast<T>();
    w.w_out = rng.matrix(c_g, channels, sigma).template cast<T>();
    w.seed = seed;
    w.init_sigma = sigma;
    return w;
  }

  template <typename U>
  BasicModuleWeights<U> cast() const {
    return {w_theta.template cast<U>(), w_phi.template cast<U>(), w_g.template cast<U>(),
            w_out.template cast<U>(), seed, init_sigma};
  }
};

using ModuleWeights = BasicModuleWeights<double>;

template <typename T>
struct Projections {
  BasicMatrix<T> theta;  // HW x C_theta
  BasicMatrix<T> phi;    // HW x C_theta
  BasicMatrix<T> g;      // HW x C_g
};

template <typename T>
Projections<T> project(const BasicFeatureMap<T>& x, const BasicModuleWeights<T>& w,
                       Exec exec = Exec::serial) {
  w.validate();
  if (x.channels() != w.channels())
    throw ShapeError("input has " + std::to_string(x.channels()) + " channels, weights expect " +
                     std::to_string(w.channels()));
  return {matmul(x.matrix(), w.w_theta, exec), matmul(x.matrix(), w.w_phi, exec),
          matmul(x.matrix(), w.w_g, exec)};
}

template <typename T>
struct BasicAffinityMatrix {
  BasicMatrix<T> f;  // HW x HW
  SimilarityKind kind;
};

using AffinityMatrix = BasicAffinityMatrix<double>;

// F = softmax(theta phi^T) or theta phi^T (optionally / HW).
template <typename T>
BasicMatrix<T> affinity_from_projections(const BasicMatrix<T>& theta, const BasicMatrix<T>& phi,
                                         SimilarityKind kind,
                                         Normalization norm = Normalization::none,
                                         Exec exec = Exec::serial) {
  BasicMatrix<T> f = matmul_a_bt(theta, phi, exec);
  if (kind == SimilarityKind::embedded_gaussian) {
    row_softmax_inplace(f);
  } else if (norm == Normalization::one_over_hw) {
    scale_inplace(f, T(1.0 / static_cast<double>(theta.rows())));
  }
  return f;
}

template <typename T>
BasicAffinityMatrix<T> nl_affinity(const BasicFeatureMap<T>& x, const BasicModuleWeights<T>& w,
                                   SimilarityKind kind, Normalization norm = Normalization::none,
                                   Exec exec = Exec::serial) {
  const Projections<T> p = project(x, w, exec);
  return {affinity_from_projections(p.theta, p.phi, kind, norm, exec), kind};
}

// Block interior: y = F g. `out` must be HW x C_g. The only transient buffer
// is F itself.
template <typename T>
void nl_aggregate_into(const Projections<T>& p, SimilarityKind kind, Normalization norm,
                       BasicMatrix<T>& out, Exec exec = Exec::serial) {
  const BasicMatrix<T> f = affinity_from_projections(p.theta, p.phi, kind, norm, exec);
  matmul_into(f, p.g, out, exec);
}

template <typename T>
BasicFeatureMap<T> nl_forward(const BasicFeatureMap<T>& x, const BasicModuleWeights<T>& w,
                              SimilarityKind kind, Normalization norm = Normalization::none,
                              Exec exec = Exec::serial) {
  const Projections<T> p = project(x, w, exec);
  BasicMatrix<T> y(x.pixels(), w.c_g());
  nl_aggregate_into(p, kind, norm, y, exec);
  return BasicFeatureMap<T>(x.height(), x.width(), std::move(y));
}

// y = (F (+ or elementwise *) L) g. No renormalization after combining.
template <typename T>
BasicFeatureMap<T> nl_forward_pos(const BasicFeatureMap<T>& x, const BasicModuleWeights<T>& w,
                                  SimilarityKind kind, const BasicMatrix<T>& l_dense,
                                  Combine combine, Normalization norm = Normalization::none,
                                  Exec exec = Exec::serial) {
  const std::size_t hw = x.pixels();
  if (l_dense.rows() != hw || l_dense.cols() != hw)
    throw ShapeError("position matrix " + shape_str(l_dense) + " does not match HW = " +
                     std::to_string(hw));
  const Projections<T> p = project(x, w, exec);
  BasicMatrix<T> f = affinity_from_projections(p.theta, p.phi, kind, norm, exec);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (combine == Combine::add)
      f.data()[i] += l_dense.data()[i];
    else
      f.data()[i] *= l_dense.data()[i];
  }
  BasicMatrix<T> y(hw, w.c_g());
  matmul_into(f, p.g, y, exec);
  return BasicFeatureMap<T>(x.height(), x.width(), std::move(y));
}

// z = conv1x1(y, w_out) + x
template <typename T>
BasicFeatureMap<T> residual_wrap(const BasicFeatureMap<T>& x, const BasicFeatureMap<T>& y,
                                 const BasicMatrix<T>& w_out, Exec exec = Exec::serial) {
  if (y.height() != x.height() || y.width() != x.width())
    throw ShapeError("residual branch spatial size differs from input");
  if (w_out.cols() != x.channels())
    throw ShapeError("output conv produces " + std::to_string(w_out.cols()) +
                     " channels, residual needs " + std::to_string(x.channels()));
  BasicFeatureMap<T> z = conv1x1(y, w_out, exec);
  for (std::size_t i = 0; i < z.matrix().size(); ++i) z.matrix().data()[i] += x.matrix().data()[i];
  return z;
}

}  // namespace enl

#endif  // ENL_NL_REFERENCE_HPP_
