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

#include "enl/perf.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>

#include "enl/enl_core.hpp"
#include "enl/rng.hpp"

namespace enl {
namespace {

std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("operation count overflows 64 bits");
  return r;
}

std::uint64_t plus(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("operation count overflows 64 bits");
  return r;
}

void require_positive(const PerfShape& s) {
  if (s.height == 0 || s.width == 0 || s.channels == 0 || s.c_theta == 0 || s.c_g == 0)
    throw std::invalid_argument("shape dimensions must be positive");
}

PerfReport base_report(Variant v, const PerfShape& shape, std::uint64_t elem_size) {
  PerfReport r;
  r.variant = v;
  r.shape = shape;
  r.elem_size = elem_size;
  const std::uint64_t n = shape.pixels();
  r.projection_flops =
      mul(mul(2, n), mul(shape.channels, plus(mul(2, shape.c_theta), shape.c_g)));
  return r;
}

using Clock = std::chrono::steady_clock;

template <typename F>
double time_once(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::uint64_t PerfShape::pixels() const { return mul(height, width); }

std::string to_string(Variant v) {
  switch (v) {
    case Variant::nl: return "nl";
    case Variant::nl_dot: return "nl-dot";
    case Variant::enl: return "enl";
    case Variant::enl_pos: return "enl-pos";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::nl, Variant::nl_dot, Variant::enl, Variant::enl_pos})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown variant '" + name + "' (expected nl, nl-dot, enl, enl-pos)");
}

PerfReport count_nl(const PerfShape& shape, SimilarityKind kind, std::uint64_t elem_size,
                    Normalization norm) {
  require_positive(shape);
  PerfReport r = base_report(
      kind == SimilarityKind::embedded_gaussian ? Variant::nl : Variant::nl_dot, shape, elem_size);
  const std::uint64_t n2 = mul(shape.pixels(), shape.pixels());
  std::uint64_t flops = plus(mul(mul(2, n2), shape.c_theta), mul(mul(2, n2), shape.c_g));
  if (kind == SimilarityKind::embedded_gaussian)
    flops = plus(flops, mul(4, n2));
  else if (norm == Normalization::one_over_hw)
    flops = plus(flops, n2);
  r.flops = flops;
  r.peak_intermediate_bytes = mul(n2, elem_size);
  r.shape.c_l = 0;
  return r;
}

PerfReport count_enl(const PerfShape& shape, bool with_position, std::uint64_t elem_size,
                     Normalization norm) {
  require_positive(shape);
  if (with_position && shape.c_l == 0)
    throw std::invalid_argument("position term needs C_l >= 1");
  PerfReport r = base_report(with_position ? Variant::enl_pos : Variant::enl, shape, elem_size);
  const std::uint64_t n = shape.pixels();
  const std::uint64_t inner = mul(shape.c_theta, shape.c_g);
  std::uint64_t flops = mul(mul(4, n), inner);
  if (norm == Normalization::one_over_hw) flops = plus(flops, inner);
  std::uint64_t peak = inner;
  if (with_position) {
    const std::uint64_t pos_inner = mul(shape.c_l, shape.c_g);
    flops = plus(flops, mul(mul(4, n), pos_inner));
    peak = std::max(peak, pos_inner);
  } else {
    r.shape.c_l = 0;
  }
  r.flops = flops;
  r.peak_intermediate_bytes = mul(peak, elem_size);
  return r;
}

PerfReport count_variant(Variant v, const PerfShape& shape, std::uint64_t elem_size,
                         Normalization norm) {
  switch (v) {
    case Variant::nl: return count_nl(shape, SimilarityKind::embedded_gaussian, elem_size, norm);
    case Variant::nl_dot: return count_nl(shape, SimilarityKind::dot_product, elem_size, norm);
    case Variant::enl: return count_enl(shape, false, elem_size, norm);
    case Variant::enl_pos: return count_enl(shape, true, elem_size, norm);
  }
  throw std::invalid_argument("unknown variant");
}

std::vector<CountCheck> verify_counts(const PerfShape& shape, const FrequencyMask& mask,
                                      Normalization norm, std::uint64_t seed) {
  using C = Counted<double>;
  static_assert(sizeof(C) == sizeof(double));
  require_positive(shape);
  if (shape.pixels() > kDenseLimit)
    throw SizeError("instrumented runs are limited to HW <= " + std::to_string(kDenseLimit));

  const DctBasis basis = build_basis(shape.height, shape.width, mask);
  PerfShape pos_shape = shape;
  pos_shape.c_l = basis.c_l();

  GaussianSource rng(seed);
  const FeatureMap x = rng.feature_map(shape.height, shape.width, shape.channels);
  const auto w = ModuleWeights::random(shape.channels, shape.c_theta, shape.c_g,
                                       derive_seed(seed, 1), 0.5);
  const Projections<double> pd = project(x, w);
  const Projections<C> p{pd.theta.cast<C>(), pd.phi.cast<C>(), pd.g.cast<C>()};
  const BasicMatrix<C> e_hat = basis.e_hat.cast<C>();

  std::vector<CountCheck> checks;
  for (Variant v : {Variant::nl, Variant::nl_dot, Variant::enl, Variant::enl_pos}) {
    const PerfReport analytic =
        count_variant(v, v == Variant::enl_pos ? pos_shape : shape, sizeof(C), norm);
    BasicMatrix<C> out(shape.pixels(), shape.c_g);
    op_tally() = {};
    CountCheck check{v, analytic.shape};
    {
      AllocationProbe probe;
      switch (v) {
        case Variant::nl:
          nl_aggregate_into(p, SimilarityKind::embedded_gaussian, norm, out);
          break;
        case Variant::nl_dot:
          nl_aggregate_into(p, SimilarityKind::dot_product, norm, out);
          break;
        case Variant::enl:
          enl_aggregate_into<C>(p, norm, nullptr, out);
          break;
        case Variant::enl_pos:
          enl_aggregate_into(p, norm, &e_hat, out);
          break;
      }
      check.instrumented_peak_bytes = probe.largest_bytes();
    }
    check.instrumented_flops = op_tally().flops();
    check.analytic_flops = analytic.flops;
    check.analytic_peak_bytes = analytic.peak_intermediate_bytes;
    if (!check.ok()) {
      throw ContractViolation(
          to_string(v) + " at " + shape_str(shape.height, shape.width) + ": analytic flops " +
          std::to_string(check.analytic_flops) + " vs instrumented " +
          std::to_string(check.instrumented_flops) + ", analytic peak bytes " +
          std::to_string(check.analytic_peak_bytes) + " vs instrumented " +
          std::to_string(check.instrumented_peak_bytes));
    }
    checks.push_back(check);
  }
  return checks;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of no samples");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<PerfReport> benchmark(const BenchRequest& request) {
  if (request.repeats == 0) throw std::invalid_argument("repeats must be >= 1");
  std::vector<PerfReport> reports;
  for (std::size_t si = 0; si < request.shapes.size(); ++si) {
    PerfShape shape = request.shapes[si];
    require_positive(shape);
    const std::uint64_t stream = derive_seed(request.seed, si);
    GaussianSource rng(stream);
    const FeatureMapF x(shape.height, shape.width,
                        rng.matrix(shape.pixels(), shape.channels).cast<float>());
    const auto w = BasicModuleWeights<float>::random(shape.channels, shape.c_theta, shape.c_g,
                                                     derive_seed(stream, 1));
    const EnlConfig cfg{shape.c_theta, shape.c_g, false, Normalization::none};

    // Only built when a positional variant is requested.
    std::optional<DctBasis> basis;
    MatrixF e_hat;
    for (Variant v : request.variants) {
      if (v == Variant::enl_pos && !basis) {
        basis = build_basis(shape.height, shape.width, request.mask);
        e_hat = basis->e_hat.cast<float>();
        shape.c_l = basis->c_l();
      }
    }

    for (Variant v : request.variants) {
      PerfReport r = count_variant(v, shape, sizeof(float));
      const bool dense = v == Variant::nl || v == Variant::nl_dot;
      if (dense && r.peak_intermediate_bytes > request.budget_bytes) {
        r.refused = true;
        r.refusal = "affinity needs " + std::to_string(r.peak_intermediate_bytes) +
                    " bytes, budget is " + std::to_string(request.budget_bytes);
        reports.push_back(std::move(r));
        continue;
      }
      auto run = [&] {
        switch (v) {
          case Variant::nl:
            (void)nl_forward(x, w, SimilarityKind::embedded_gaussian, Normalization::none,
                             Exec::parallel);
            break;
          case Variant::nl_dot:
            (void)nl_forward(x, w, SimilarityKind::dot_product, Normalization::none,
                             Exec::parallel);
            break;
          case Variant::enl:
            (void)enl_forward(x, w, cfg, Exec::parallel);
            break;
          case Variant::enl_pos:
            (void)enl_forward_pos(x, w, cfg, e_hat, Exec::parallel);
            break;
        }
      };
      run();  // warm-up
      for (std::size_t i = 0; i < request.repeats; ++i) r.samples.push_back(time_once(run));
      r.wall_time = median(r.samples);
      r.is_median = r.samples.size() >= kMinMedianRuns;
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

nlohmann::json to_json(const PerfReport& r) {
  nlohmann::json j;
  j["variant"] = to_string(r.variant);
  j["H"] = r.shape.height;
  j["W"] = r.shape.width;
  j["C"] = r.shape.channels;
  j["C_theta"] = r.shape.c_theta;
  j["C_g"] = r.shape.c_g;
  j["C_l"] = r.shape.c_l;
  j["flops"] = r.flops;
  j["peak_bytes"] = r.peak_intermediate_bytes;
  j["wall_time_s"] = r.wall_time ? nlohmann::json(*r.wall_time) : nlohmann::json(nullptr);
  j["samples_s"] = r.samples;
  j["is_median"] = r.is_median;
  j["elem_size"] = r.elem_size;
  j["projection_flops"] = r.projection_flops;
  j["refused"] = r.refused;
  if (r.refused) j["refusal"] = r.refusal;
  return j;
}

void write_csv(std::ostream& out, const std::vector<PerfReport>& reports, const OutputMeta& meta) {
  out << "# version=" << meta.version << " seed=" << meta.seed << "\n";
  out << "variant,H,W,C,C_theta,C_g,C_l,flops,peak_bytes,wall_time_s\n";
  for (const PerfReport& r : reports) {
    out << to_string(r.variant) << ',' << r.shape.height << ',' << r.shape.width << ','
        << r.shape.channels << ',' << r.shape.c_theta << ',' << r.shape.c_g << ',' << r.shape.c_l
        << ',' << r.flops << ',' << r.peak_intermediate_bytes << ',';
    if (r.wall_time) out << *r.wall_time;
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<PerfReport>& reports, const OutputMeta& meta) {
  nlohmann::json doc;
  doc["version"] = meta.version;
  doc["seed"] = meta.seed;
  doc["reports"] = nlohmann::json::array();
  for (const PerfReport& r : reports) doc["reports"].push_back(to_json(r));
  out << doc.dump(2) << '\n';
}

}  // namespace enl
