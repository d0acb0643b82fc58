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

// Operation and memory accounting for the block interior, i.e. everything
// between the input projections and the output conv.
//
// Formula sheet (one multiply-add = 2 flops, N = H * W):
//   nl   flops = 2 N^2 C_theta + 2 N^2 C_g + softmax 4 N^2 (embedded Gaussian)
//                                          or N^2 (dot product, 1/HW scaling)
//        peak  = N^2 elements (the affinity)
//   enl  flops = 2 N C_theta C_g + 2 N C_theta C_g (+ C_theta C_g with 1/HW)
//              + 4 N C_l C_g with the position term
//        peak  = max(C_theta C_g, C_l C_g) elements
//   projections, reported separately: 2 N C (2 C_theta + C_g)
//   output conv, not counted: 2 N C_g C

#ifndef ENL_PERF_HPP_
#define ENL_PERF_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "enl/dct_pos.hpp"
#include "enl/nl_reference.hpp"
#include "json.hpp"

namespace enl {

enum class Variant { nl, nl_dot, enl, enl_pos };

// "nl" is the original embedded-Gaussian block, "nl-dot" its dense
// dot-product twin.
std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct PerfShape {
  std::uint64_t height = 1;
  std::uint64_t width = 1;
  std::uint64_t channels = 1;
  std::uint64_t c_theta = 1;
  std::uint64_t c_g = 1;
  std::uint64_t c_l = 0;  // 0 when no position term

  std::uint64_t pixels() const;
};

struct PerfReport {
  Variant variant = Variant::enl;
  PerfShape shape;
  std::uint64_t elem_size = sizeof(double);
  std::uint64_t flops = 0;
  std::uint64_t projection_flops = 0;
  std::uint64_t peak_intermediate_bytes = 0;
  std::vector<double> samples;       // seconds, one per timed run
  std::optional<double> wall_time;   // median of samples, when measured
  bool is_median = false;            // true only with >= kMinMedianRuns samples
  bool refused = false;
  std::string refusal;
};

inline constexpr std::size_t kMinMedianRuns = 5;
inline constexpr std::uint64_t kDefaultBudgetBytes = 4ULL << 30;

// Throws std::overflow_error when a count leaves 64 bits.
PerfReport count_nl(const PerfShape& shape, SimilarityKind kind,
                    std::uint64_t elem_size = sizeof(double),
                    Normalization norm = Normalization::none);
PerfReport count_enl(const PerfShape& shape, bool with_position,
                     std::uint64_t elem_size = sizeof(double),
                     Normalization norm = Normalization::none);
PerfReport count_variant(Variant v, const PerfShape& shape, std::uint64_t elem_size,
                         Normalization norm = Normalization::none);

struct CountCheck {
  Variant variant;
  PerfShape shape;
  std::uint64_t analytic_flops = 0;
  std::uint64_t instrumented_flops = 0;
  std::uint64_t analytic_peak_bytes = 0;
  std::uint64_t instrumented_peak_bytes = 0;

  bool ok() const {
    return analytic_flops == instrumented_flops && analytic_peak_bytes == instrumented_peak_bytes;
  }
};

// Runs every variant's interior with a counting scalar type and an
// allocation probe. Throws ContractViolation on the first mismatch.
// C_theta and C_g come from the shape; c_l is recomputed from the clamped mask.
std::vector<CountCheck> verify_counts(const PerfShape& shape, const FrequencyMask& mask,
                                      Normalization norm = Normalization::none,
                                      std::uint64_t seed = 1);

struct BenchRequest {
  std::vector<Variant> variants;
  std::vector<PerfShape> shapes;  // c_l is filled from the mask
  FrequencyMask mask;
  std::size_t repeats = kMinMedianRuns;
  std::uint64_t budget_bytes = kDefaultBudgetBytes;
  std::uint64_t seed = 0;
};

// 32-bit, parallel kernels, one variant at a time. Over-budget dense
// variants produce a refusal record instead of running.
std::vector<PerfReport> benchmark(const BenchRequest& request);

double median(std::vector<double> v);

struct OutputMeta {
  std::string version;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const PerfReport& report);

void write_csv(std::ostream& out, const std::vector<PerfReport>& reports, const OutputMeta& meta);
void write_json(std::ostream& out, const std::vector<PerfReport>& reports, const OutputMeta& meta);

}  // namespace enl

#endif  // ENL_PERF_HPP_
