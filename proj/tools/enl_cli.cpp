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

// enl: oracle checks, benchmarks, filter dumps and the pyramid demo.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "enl/filter_io.hpp"
#include "enl/perf.hpp"
#include "enl/pyramid.hpp"
#include "enl/verify.hpp"
#include "enl/version.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::uint64_t to_count(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v == 0) throw CLI::ValidationError(what, "'" + s + "' is not a positive integer");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

int run_check(bool json, std::uint64_t seed) {
  const auto results = enl::verify::run_oracle_suite(seed);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (json) {
    nlohmann::json doc;
    doc["version"] = enl::kVersion;
    doc["seed"] = seed;
    doc["passed"] = all;
    doc["checks"] = nlohmann::json::array();
    for (const auto& r : results) doc["checks"].push_back(enl::verify::to_json(r));
    std::cout << doc.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << r.metric
                << " tol=" << r.tolerance << " n=" << r.instances << " (" << r.seconds << " s)  "
                << r.detail << '\n';
    }
    std::cout << (all ? "all checks passed" : "some checks FAILED") << '\n';
  }
  return all ? 0 : 1;
}

struct BenchArgs {
  std::string shapes = "32x32x64";
  std::string variants = "nl,enl,enl-pos";
  std::size_t repeats = enl::kMinMedianRuns;
  std::uint64_t budget = enl::kDefaultBudgetBytes;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t mask_h = enl::kDefaultMaskSize;
  std::size_t mask_w = enl::kDefaultMaskSize;
  std::size_t c_theta = 0;
  std::size_t c_g = 0;
};

int run_bench(const BenchArgs& a) {
  enl::BenchRequest req;
  for (const auto& v : split(a.variants, ',')) req.variants.push_back(enl::parse_variant(v));
  for (const auto& s : split(a.shapes, ',')) {
    const auto dims = split(s, 'x');
    if (dims.size() != 3) throw CLI::ValidationError("--shapes", "expected HxWxC, got '" + s + "'");
    enl::PerfShape shape;
    shape.height = to_count(dims[0], "--shapes");
    shape.width = to_count(dims[1], "--shapes");
    shape.channels = to_count(dims[2], "--shapes");
    const auto half = enl::EnlConfig::for_channels(shape.channels);
    shape.c_theta = a.c_theta ? a.c_theta : half.c_theta;
    shape.c_g = a.c_g ? a.c_g : half.c_g;
    req.shapes.push_back(shape);
  }
  req.mask = enl::FrequencyMask{a.mask_h, a.mask_w, {}};
  req.repeats = a.repeats;
  req.budget_bytes = a.budget;
  req.seed = a.seed;

  const auto reports = enl::benchmark(req);
  const enl::OutputMeta meta{enl::kVersion, a.seed};
  for (const auto& r : reports) {
    std::cerr << enl::to_string(r.variant) << ' ' << r.shape.height << 'x' << r.shape.width << 'x'
              << r.shape.channels << ": ";
    if (r.refused)
      std::cerr << "refused (" << r.refusal << ")\n";
    else
      std::cerr << *r.wall_time << " s" << (r.is_median ? " median" : " (non-median)") << ", "
                << r.flops << " flops, peak " << r.peak_intermediate_bytes << " B\n";
  }
  if (a.out.empty()) {
    enl::write_json(std::cout, reports, meta);
  } else if (ends_with(a.out, ".csv")) {
    auto out = open_out(a.out);
    enl::write_csv(out, reports, meta);
  } else {
    auto out = open_out(a.out);
    enl::write_json(out, reports, meta);
  }
  return 0;
}

int run_filter_dump(std::size_t height, std::size_t width, std::size_t mask_h, std::size_t mask_w,
                    const std::string& center, const std::string& path) {
  const auto hw = split(center, ',');
  if (hw.size() != 2) throw CLI::ValidationError("--center", "expected h,w");
  const std::size_t ch = std::stoul(hw[0]), cw = std::stoul(hw[1]);
  if (ch >= height || cw >= width)
    throw CLI::ValidationError("--center", "center lies outside the map");
  const enl::DctBasis basis = enl::build_basis(height, width, {mask_h, mask_w, {}});
  for (const auto& w : basis.warnings) std::cerr << "warning: " << w << '\n';
  const enl::FeatureMap filter = enl::extract_filter(basis, ch * width + cw);

  std::ostringstream comment;
  comment << "enl " << enl::kVersion << " filter H=" << height << " W=" << width
          << " mask=" << basis.mask.h_freqs << "x" << basis.mask.w_freqs << " center=" << ch
          << "," << cw;
  if (ends_with(path, ".csv")) {
    auto out = open_out(path);
    enl::write_filter_csv(out, filter, comment.str());
  } else {
    auto out = open_out(path, true);
    enl::write_pgm(out, filter, comment.str());
  }
  std::cerr << "wrote " << path << '\n';
  return 0;
}

int run_pyramid(const std::string& base, std::size_t levels, std::size_t channels,
                std::uint64_t seed, bool no_position, bool dense, const std::string& path) {
  const auto dims = split(base, 'x');
  if (dims.size() != 2) throw CLI::ValidationError("--base", "expected HxW");
  const auto cfg = enl::PyramidConfig::make(to_count(dims[0], "--base"),
                                            to_count(dims[1], "--base"), levels, channels, seed,
                                            !no_position);
  const auto trace = enl::pyramid_forward(
      enl::synth_laterals(cfg), cfg,
      dense ? enl::PyramidMode::dense_reference : enl::PyramidMode::efficient);
  nlohmann::json doc = enl::to_json(trace, cfg);
  doc["version"] = enl::kVersion;
  doc["mode"] = dense ? "dense_reference" : "efficient";
  if (path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
  }
  for (const auto& level : trace.levels)
    std::cerr << "level " << level.scale << ": " << level.output.height() << "x"
              << level.output.width() << "x" << level.output.channels() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Efficient non-local block: oracle checks, benchmarks and demos"};
  app.set_version_flag("--version", enl::kVersion);
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Run the oracle suite; exit code 0 when all pass");
  bool check_json = false;
  std::uint64_t check_seed = 2024;
  check->add_flag("--json", check_json, "Machine-readable results");
  check->add_option("--seed", check_seed, "Base seed")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Time block variants in 32-bit parallel mode");
  BenchArgs bench_args;
  bench->add_option("--shapes", bench_args.shapes, "Comma-separated HxWxC list")->capture_default_str();
  bench->add_option("--variants", bench_args.variants, "nl, nl-dot, enl, enl-pos")->capture_default_str();
  bench->add_option("--repeats", bench_args.repeats, "Timed runs per variant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--budget-bytes", bench_args.budget, "Largest affinity a dense variant may allocate")
      ->capture_default_str();
  bench->add_option("--out", bench_args.out, "report.json or report.csv (default: JSON on stdout)");
  bench->add_option("--seed", bench_args.seed, "Input seed")->capture_default_str();
  bench->add_option("--mask-h", bench_args.mask_h, "Vertical DCT frequencies")->capture_default_str();
  bench->add_option("--mask-w", bench_args.mask_w, "Horizontal DCT frequencies")->capture_default_str();
  bench->add_option("--c-theta", bench_args.c_theta, "Embedding width (default C/2)");
  bench->add_option("--c-g", bench_args.c_g, "Value width (default C/2)");

  auto* filter = app.add_subcommand("filter-dump", "Write the spatial kernel of the position term");
  std::size_t f_h = 16, f_w = 16, f_mh = enl::kDefaultMaskSize, f_mw = enl::kDefaultMaskSize;
  std::string f_center = "8,8", f_out = "filter.pgm";
  filter->add_option("--height", f_h)->check(CLI::PositiveNumber)->capture_default_str();
  filter->add_option("--width", f_w)->check(CLI::PositiveNumber)->capture_default_str();
  filter->add_option("--mask-h", f_mh)->check(CLI::PositiveNumber)->capture_default_str();
  filter->add_option("--mask-w", f_mw)->check(CLI::PositiveNumber)->capture_default_str();
  filter->add_option("--center", f_center, "Pixel as h,w")->capture_default_str();
  filter->add_option("--out", f_out, "filter.pgm or filter.csv")->capture_default_str();

  auto* pyramid = app.add_subcommand("pyramid-demo", "Run the coarse-to-fine top-down stream");
  std::string p_base = "32x32", p_out;
  std::size_t p_levels = 3, p_channels = 256;
  std::uint64_t p_seed = 42;
  bool p_no_position = false, p_dense = false;
  pyramid->add_option("--base", p_base, "Finest level HxW")->capture_default_str();
  pyramid->add_option("--levels", p_levels)->check(CLI::PositiveNumber)->capture_default_str();
  pyramid->add_option("--channels", p_channels)->check(CLI::PositiveNumber)->capture_default_str();
  pyramid->add_option("--seed", p_seed)->capture_default_str();
  pyramid->add_option("--out", p_out, "trace.json (default: stdout)");
  pyramid->add_flag("--no-position", p_no_position, "Drop the DCT position term");
  pyramid->add_flag("--dense", p_dense, "Use the dense reference block at every level");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return run_check(check_json, check_seed);
    if (*bench) return run_bench(bench_args);
    if (*filter) return run_filter_dump(f_h, f_w, f_mh, f_mw, f_center, f_out);
    if (*pyramid)
      return run_pyramid(p_base, p_levels, p_channels, p_seed, p_no_position, p_dense, p_out);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
