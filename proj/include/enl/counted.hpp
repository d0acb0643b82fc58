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

#ifndef ENL_COUNTED_HPP_
#define ENL_COUNTED_HPP_

#include <cmath>
#include <cstdint>

namespace enl {

// Per-thread tally of arithmetic performed through Counted<T>.
struct OpTally {
  std::uint64_t add = 0;  // includes subtraction
  std::uint64_t mul = 0;
  std::uint64_t div = 0;
  std::uint64_t exp = 0;

  std::uint64_t flops() const { return add + mul + div + exp; }
};

inline OpTally& op_tally() {
  thread_local OpTally tally;
  return tally;
}

// Scalar wrapper that counts every +, -, *, / and exp applied to it.
// Comparisons are free. Used to instantiate kernels in instrumented mode.
template <typename T>
class Counted {
 public:
  using value_type = T;

  constexpr Counted() = default;
  constexpr Counted(T v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  constexpr T value() const { return v_; }

  Counted& operator+=(Counted o) { ++op_tally().add; v_ += o.v_; return *this; }
  Counted& operator-=(Counted o) { ++op_tally().add; v_ -= o.v_; return *this; }
  Counted& operator*=(Counted o) { ++op_tally().mul; v_ *= o.v_; return *this; }
  Counted& operator/=(Counted o) { ++op_tally().div; v_ /= o.v_; return *this; }

  friend Counted operator+(Counted a, Counted b) { return a += b; }
  friend Counted operator-(Counted a, Counted b) { return a -= b; }
  friend Counted operator*(Counted a, Counted b) { return a *= b; }
  friend Counted operator/(Counted a, Counted b) { return a /= b; }
  friend Counted operator-(Counted a) { return Counted(-a.v_); }

  friend bool operator<(Counted a, Counted b) { return a.v_ < b.v_; }
  friend bool operator>(Counted a, Counted b) { return a.v_ > b.v_; }
  friend bool operator==(Counted a, Counted b) { return a.v_ == b.v_; }

  friend Counted exp(Counted a) {
    ++op_tally().exp;
    return Counted(std::exp(a.v_));
  }

 private:
  T v_{};
};

template <typename T>
constexpr double to_double(T v) { return static_cast<double>(v); }
template <typename T>
constexpr double to_double(Counted<T> v) { return static_cast<double>(v.value()); }

}  // namespace enl

#endif  // ENL_COUNTED_HPP_
