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

#ifndef ENL_MATRIX_HPP_
#define ENL_MATRIX_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "enl/alloc_probe.hpp"
#include "enl/errors.hpp"

namespace enl {

// Dense row-major matrix. Storage goes through TrackingAllocator so that
// AllocationProbe sees every buffer, including copies.
template <typename T>
class BasicMatrix {
 public:
  using value_type = T;
  using storage_type = std::vector<T, TrackingAllocator<T>>;

  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  BasicMatrix(std::size_t rows, std::size_t cols, T fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // Row-major nested literal, e.g. {{1, 2}, {3, 4}}.
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) : rows_(rows.size()) {
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  BasicMatrix transposed() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <typename U>
  BasicMatrix<U> cast() const {
    BasicMatrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = static_cast<U>(data_[i]);
    return out;
  }

  bool operator==(const BasicMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  storage_type data_;
};

using Matrix = BasicMatrix<double>;
using MatrixF = BasicMatrix<float>;

inline std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

template <typename T>
std::string shape_str(const BasicMatrix<T>& m) {
  return shape_str(m.rows(), m.cols());
}

// Flattened H x W x C activation; pixel (h, w) lives in row h * W + w.
template <typename T>
class BasicFeatureMap {
 public:
  BasicFeatureMap() = default;
  BasicFeatureMap(std::size_t height, std::size_t width, std::size_t channels)
      : height_(height), width_(width), data_(height * width, channels) {}
  BasicFeatureMap(std::size_t height, std::size_t width, BasicMatrix<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (data_.rows() != height_ * width_)
      throw ShapeError("feature map " + shape_str(height_, width_) + " cannot wrap a " +
                       shape_str(data_) + " matrix");
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return data_.cols(); }
  std::size_t pixels() const { return height_ * width_; }
  static std::size_t index(std::size_t h, std::size_t w, std::size_t width) { return h * width + w; }

  T& at(std::size_t h, std::size_t w, std::size_t c) { return data_(h * width_ + w, c); }
  const T& at(std::size_t h, std::size_t w, std::size_t c) const { return data_(h * width_ + w, c); }

  // HW x C view.
  const BasicMatrix<T>& matrix() const { return data_; }
  BasicMatrix<T>& matrix() { return data_; }

  bool same_shape(const BasicFeatureMap& o) const {
    return height_ == o.height_ && width_ == o.width_ && channels() == o.channels();
  }

  bool operator==(const BasicFeatureMap& o) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  BasicMatrix<T> data_;
};

using FeatureMap = BasicFeatureMap<double>;
using FeatureMapF = BasicFeatureMap<float>;

}  // namespace enl

#endif  // ENL_MATRIX_HPP_
