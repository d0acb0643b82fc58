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

#ifndef ENL_FILTER_IO_HPP_
#define ENL_FILTER_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "enl/matrix.hpp"

namespace enl {

// Binary P5, 8-bit, min-max normalized to [0, 255]. A flat image maps to 0.
// `comment` becomes a single "# ..." header line.
void write_pgm(std::ostream& out, const FeatureMap& image, const std::string& comment);

// One text row per image row, raw values at full precision.
void write_filter_csv(std::ostream& out, const FeatureMap& image, const std::string& comment);

// Quantization used by write_pgm, exposed for tests.
std::vector<std::uint8_t> to_gray8(const FeatureMap& image);

}  // namespace enl

#endif  // ENL_FILTER_IO_HPP_
