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

// Low-rank relative position encoding L = E_hat E_hat^T built from the
// lowest-frequency columns of the orthonormal 2D DCT-II. Neither the full
// HW x HW transform nor the diagonal selector is ever formed; E_hat comes
// straight from the closed-form cosines.

#ifndef ENL_DCT_POS_HPP_
#define ENL_DCT_POS_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "enl/tensor.hpp"

namespace enl {

inline constexpr std::size_t kDefaultMaskSize = 9;
inline constexpr std::size_t kDenseLimit = 4096;

struct FrequencyMask {
  std::size_t h_freqs = kDefaultMaskSize;  // vertical frequencies kept, [0, h_freqs)
  std::size_t w_freqs = kDefaultMaskSize;  // horizontal frequencies kept, [0, w_freqs)
  // One weight per selected (u, v), row-major in u. Empty means all ones.
  std::vector<double> weights;

  std::size_t selected() const { return h_freqs * w_freqs; }
  double weight(std::size_t u, std::size_t v) const {
    return weights.empty() ? 1.0 : weights[u * w_freqs + v];
  }

  static FrequencyMask full(std::size_t h, std::size_t w) { return {h, w, {}}; }

  bool operator==(const FrequencyMask&) const = default;
};

struct DctBasis {
  std::size_t height = 0;
  std::size_t width = 0;
  FrequencyMask mask;  // after clamping to the map size
  Matrix e_hat;        // HW x C_l, column u * mask.w_freqs + v
  std::vector<std::string> warnings;

  std::size_t pixels() const { return height * width; }
  std::size_t c_l() const { return e_hat.cols(); }
};

// Orthonormal DCT-II basis value c_k cos(pi (2n + 1) k / (2N)).
double dct_coefficient(std::size_t n, std::size_t k, std::size_t size);

DctBasis build_basis(std::size_t height, std::size_t width, const FrequencyMask& mask = {});

// Dense L = E_hat E_hat^T. Oracle only; refuses HW > kDenseLimit.
Matrix dense_l(const DctBasis& basis);

// out += E_hat (E_hat^T g), factored order. `scratch` must be C_l x C_g.
template <typename T>
void position_term_add_into(const BasicMatrix<T>& e_hat, const BasicMatrix<T>& g,
                            BasicMatrix<T>& scratch, BasicMatrix<T>& out,
                            Exec exec = Exec::serial) {
  matmul_at_b_into(e_hat, g, scratch, exec);
  matmul_add_into(e_hat, scratch, out, exec);
}

// E_hat (E_hat^T g) for g of shape HW x C_g.
Matrix position_term(const DctBasis& basis, const Matrix& g);

// Row `center` of L laid out on the H x W grid: the spatial kernel the
// position term applies around that pixel.
FeatureMap extract_filter(const DctBasis& basis, std::size_t center);

// Thread-safe memo of bases keyed by (H, W, mask).
class BasisCache {
 public:
  std::shared_ptr<const DctBasis> get(std::size_t height, std::size_t width,
                                      const FrequencyMask& mask = {});
  std::size_t size() const;

 private:
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::vector<double>>;
  mutable std::mutex mu_;
  std::map<Key, std::shared_ptr<const DctBasis>> entries_;
};

}  // namespace enl

#endif  // ENL_DCT_POS_HPP_
