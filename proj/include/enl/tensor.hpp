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

#ifndef ENL_TENSOR_HPP_
#define ENL_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "enl/counted.hpp"
#include "enl/errors.hpp"
#include "enl/matrix.hpp"

namespace enl {

// serial: fixed summation order, k ascending for every output element.
// parallel: OpenMP over output rows; only serial results are reproducible
// across implementations.
enum class Exec { serial, parallel };

namespace detail {

inline void require(bool ok, const char* what, const std::string& a, const std::string& b) {
  if (!ok) throw ShapeError(std::string(what) + ": " + a + " vs " + b);
}

}  // namespace detail

// out = a * b
template <typename T>
void matmul_into(const BasicMatrix<T>& a, const BasicMatrix<T>& b, BasicMatrix<T>& out,
                 Exec exec = Exec::serial) {
  detail::require(a.cols() == b.rows(), "matmul inner dimension", shape_str(a), shape_str(b));
  detail::require(out.rows() == a.rows() && out.cols() == b.cols(), "matmul output",
                  shape_str(out), shape_str(a.rows(), b.cols()));
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const T* pa = a.data();
  const T* pb = b.data();
  T* pc = out.data();
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        T acc{};
        for (std::size_t p = 0; p < k; ++p) acc += pa[i * k + p] * pb[p * m + j];
        pc[i * m + j] = acc;
      }
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    T* crow = pc + i * m;
    std::fill(crow, crow + m, T{});
    for (std::size_t p = 0; p < k; ++p) {
      const T av = pa[i * k + p];
      const T* brow = pb + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// out += a * b
template <typename T>
void matmul_add_into(const BasicMatrix<T>& a, const BasicMatrix<T>& b, BasicMatrix<T>& out,
                     Exec exec = Exec::serial) {
  detail::require(a.cols() == b.rows(), "matmul inner dimension", shape_str(a), shape_str(b));
  detail::require(out.rows() == a.rows() && out.cols() == b.cols(), "matmul output",
                  shape_str(out), shape_str(a.rows(), b.cols()));
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const T* pa = a.data();
  const T* pb = b.data();
  T* pc = out.data();
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        T acc = pc[i * m + j];
        for (std::size_t p = 0; p < k; ++p) acc += pa[i * k + p] * pb[p * m + j];
        pc[i * m + j] = acc;
      }
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    T* crow = pc + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = pa[i * k + p];
      const T* brow = pb + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// out = a^T * b, with a: n x p, b: n x q, out: p x q. a^T is never formed.
template <typename T>
void matmul_at_b_into(const BasicMatrix<T>& a, const BasicMatrix<T>& b, BasicMatrix<T>& out,
                      Exec exec = Exec::serial) {
  detail::require(a.rows() == b.rows(), "matmul_at_b shared rows", shape_str(a), shape_str(b));
  detail::require(out.rows() == a.cols() && out.cols() == b.cols(), "matmul_at_b output",
                  shape_str(out), shape_str(a.cols(), b.cols()));
  const std::size_t n = a.rows(), p = a.cols(), q = b.cols();
  const T* pa = a.data();
  const T* pb = b.data();
  T* pc = out.data();
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < q; ++j) {
        T acc{};
        for (std::size_t r = 0; r < n; ++r) acc += pa[r * p + i] * pb[r * q + j];
        pc[i * q + j] = acc;
      }
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(p); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    T* crow = pc + i * q;
    std::fill(crow, crow + q, T{});
    for (std::size_t r = 0; r < n; ++r) {
      const T av = pa[r * p + i];
      const T* brow = pb + r * q;
      for (std::size_t j = 0; j < q; ++j) crow[j] += av * brow[j];
    }
  }
}

// out = a * b^T, with a: n x k, b: m x k, out: n x m.
template <typename T>
void matmul_a_bt_into(const BasicMatrix<T>& a, const BasicMatrix<T>& b, BasicMatrix<T>& out,
                      Exec exec = Exec::serial) {
  detail::require(a.cols() == b.cols(), "matmul_a_bt shared cols", shape_str(a), shape_str(b));
  detail::require(out.rows() == a.rows() && out.cols() == b.rows(), "matmul_a_bt output",
                  shape_str(out), shape_str(a.rows(), b.rows()));
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  const T* pa = a.data();
  const T* pb = b.data();
  T* pc = out.data();
  auto row_kernel = [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      T acc{};
      for (std::size_t p = 0; p < k; ++p) acc += pa[i * k + p] * pb[j * k + p];
      pc[i * m + j] = acc;
    }
  };
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) row_kernel(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    row_kernel(static_cast<std::size_t>(i));
}

template <typename T>
BasicMatrix<T> matmul(const BasicMatrix<T>& a, const BasicMatrix<T>& b, Exec exec = Exec::serial) {
  detail::require(a.cols() == b.rows(), "matmul inner dimension", shape_str(a), shape_str(b));
  BasicMatrix<T> out(a.rows(), b.cols());
  matmul_into(a, b, out, exec);
  return out;
}

template <typename T>
BasicMatrix<T> matmul_at_b(const BasicMatrix<T>& a, const BasicMatrix<T>& b,
                           Exec exec = Exec::serial) {
  detail::require(a.rows() == b.rows(), "matmul_at_b shared rows", shape_str(a), shape_str(b));
  BasicMatrix<T> out(a.cols(), b.cols());
  matmul_at_b_into(a, b, out, exec);
  return out;
}

template <typename T>
BasicMatrix<T> matmul_a_bt(const BasicMatrix<T>& a, const BasicMatrix<T>& b,
                           Exec exec = Exec::serial) {
  detail::require(a.cols() == b.cols(), "matmul_a_bt shared cols", shape_str(a), shape_str(b));
  BasicMatrix<T> out(a.rows(), b.rows());
  matmul_a_bt_into(a, b, out, exec);
  return out;
}

// Softmax along each row with max subtraction. Costs 4 counted ops per
// element: subtract, exp, accumulate, divide.
template <typename T>
void row_softmax_inplace(BasicMatrix<T>& m) {
  if (m.empty()) throw ShapeError("row_softmax of empty matrix " + shape_str(m));
  using std::exp;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    T mx = r[0];
    for (const T& v : r)
      if (mx < v) mx = v;
    T sum{};
    for (T& v : r) {
      v = exp(v - mx);
      sum += v;
    }
    for (T& v : r) v = v / sum;
  }
}

template <typename T>
BasicMatrix<T> row_softmax(const BasicMatrix<T>& m) {
  BasicMatrix<T> out = m;
  row_softmax_inplace(out);
  return out;
}

// Per-pixel linear map (no bias): HW x C_in times C_in x C_out.
template <typename T>
BasicFeatureMap<T> conv1x1(const BasicFeatureMap<T>& x, const BasicMatrix<T>& w,
                           Exec exec = Exec::serial) {
  if (w.rows() != x.channels())
    throw ShapeError("conv1x1 expects " + std::to_string(x.channels()) +
                     " input channels, weight is " + shape_str(w));
  return BasicFeatureMap<T>(x.height(), x.width(), matmul(x.matrix(), w, exec));
}

// 2x bilinear upsampling, half-pixel centers (align_corners = false), edge clamped.
template <typename T>
BasicFeatureMap<T> bilinear_upsample2x(const BasicFeatureMap<T>& x) {
  const std::size_t h = x.height(), w = x.width(), c = x.channels();
  if (h == 0 || w == 0) throw ShapeError("bilinear_upsample2x of empty map");
  BasicFeatureMap<T> out(2 * h, 2 * w, c);
  auto source = [](std::size_t dst, std::size_t in, std::size_t& i0, std::size_t& i1, double& f) {
    double s = (static_cast<double>(dst) + 0.5) / 2.0 - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(in - 1));
    i0 = static_cast<std::size_t>(std::floor(s));
    i1 = std::min(i0 + 1, in - 1);
    f = s - static_cast<double>(i0);
  };
  for (std::size_t oy = 0; oy < 2 * h; ++oy) {
    std::size_t y0, y1;
    double fy;
    source(oy, h, y0, y1, fy);
    for (std::size_t ox = 0; ox < 2 * w; ++ox) {
      std::size_t x0, x1;
      double fx;
      source(ox, w, x0, x1, fx);
      const T w00 = static_cast<T>((1 - fy) * (1 - fx));
      const T w01 = static_cast<T>((1 - fy) * fx);
      const T w10 = static_cast<T>(fy * (1 - fx));
      const T w11 = static_cast<T>(fy * fx);
      for (std::size_t ch = 0; ch < c; ++ch) {
        out.at(oy, ox, ch) = w00 * x.at(y0, x0, ch) + w01 * x.at(y0, x1, ch) +
                             w10 * x.at(y1, x0, ch) + w11 * x.at(y1, x1, ch);
      }
    }
  }
  return out;
}

template <typename T>
BasicMatrix<T> add(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "elementwise add",
                  shape_str(a), shape_str(b));
  BasicMatrix<T> out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

template <typename T>
BasicFeatureMap<T> add(const BasicFeatureMap<T>& a, const BasicFeatureMap<T>& b) {
  if (!a.same_shape(b)) throw ShapeError("elementwise add of feature maps with different shapes");
  return BasicFeatureMap<T>(a.height(), a.width(), add(a.matrix(), b.matrix()));
}

template <typename T>
void scale_inplace(BasicMatrix<T>& m, T s) {
  for (T& v : m.values()) v *= s;
}

template <typename T>
double max_abs_diff(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff", shape_str(a),
                  shape_str(b));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(to_double(a.data()[i]) - to_double(b.data()[i])));
  return worst;
}

template <typename T>
double max_abs_diff(const BasicFeatureMap<T>& a, const BasicFeatureMap<T>& b) {
  if (!a.same_shape(b)) throw ShapeError("max_abs_diff of feature maps with different shapes");
  return max_abs_diff(a.matrix(), b.matrix());
}

template <typename T>
double max_abs(const BasicMatrix<T>& m) {
  double worst = 0.0;
  for (const T& v : m.values()) worst = std::max(worst, std::abs(to_double(v)));
  return worst;
}

// FNV-1a over the raw bytes of every entry; equal only for bitwise-equal data.
template <typename T>
std::uint64_t bit_fingerprint(const BasicMatrix<T>& m, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  for (std::size_t i = 0; i < m.size() * sizeof(T); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace enl

#endif  // ENL_TENSOR_HPP_
