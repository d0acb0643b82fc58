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

#include "enl/filter_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace enl {

std::vector<std::uint8_t> to_gray8(const FeatureMap& image) {
  if (image.channels() != 1) throw ShapeError("grayscale export needs a single channel");
  const auto values = image.matrix().values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = values.empty() ? 0.0 : *hi - *lo;
  std::vector<std::uint8_t> gray(values.size(), 0);
  if (range <= 0.0) return gray;
  for (std::size_t i = 0; i < values.size(); ++i)
    gray[i] = static_cast<std::uint8_t>(std::lround(255.0 * (values[i] - *lo) / range));
  return gray;
}

void write_pgm(std::ostream& out, const FeatureMap& image, const std::string& comment) {
  const std::vector<std::uint8_t> gray = to_gray8(image);
  out << "P5\n# " << comment << "\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
}

void write_filter_csv(std::ostream& out, const FeatureMap& image, const std::string& comment) {
  if (image.channels() != 1) throw ShapeError("filter CSV needs a single channel");
  out << "# " << comment << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t h = 0; h < image.height(); ++h) {
    for (std::size_t w = 0; w < image.width(); ++w) {
      if (w > 0) out << ',';
      out << image.at(h, w, 0);
    }
    out << '\n';
  }
}

}  // namespace enl
