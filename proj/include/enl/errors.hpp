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

#ifndef ENL_ERRORS_HPP_
#define ENL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace enl {

// Operand shapes are incompatible.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A dense oracle was asked to materialize something too large.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Analytic and instrumented measurements disagree.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace enl

#endif  // ENL_ERRORS_HPP_
