// Copyright 2026 The vsa-tensor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails or exceeds its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "vsa/binding.hpp"
#include "vsa/capacity.hpp"
#include "vsa/cli.hpp"
#include "vsa/codebook.hpp"
#include "vsa/rng.hpp"

namespace {

using namespace vsa;

struct Verdict {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Verdict exact_tensor_unbinding() {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 8, 8, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      const Embedding pair[] = {cb[i], cb[j]};
      const BoundRep t = tensor_bind(pair);
      worst = std::max(worst, max_abs_diff(tensor_unbind_left(cb[i], t).values(), cb[j].values()));
      worst = std::max(worst, max_abs_diff(tensor_unbind_right(t, cb[j]).values(), cb[i].values()));
    }
  }
  return {worst <= 1e-12, fmt("max residual %.3g over 64 pairs", worst)};
}

Verdict spurious_decomposition() {
  Rng rng(2, StreamPurpose::kVerify);
  auto draw = [&] {
    std::vector<double> v(16);
    for (double& x : v) x = rng.normal();
    return Embedding(std::move(v));
  };
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Embedding u = draw(), v = draw(), w = draw();
    double uv = 0.0;
    for (std::size_t i = 0; i < 16; ++i) uv += u[i] * v[i];
    std::vector<double> expected(16);
    for (std::size_t i = 0; i < 16; ++i) expected[i] = uv * w[i];
    const Embedding pair[] = {v, w};
    worst = std::max(worst, max_abs_diff(tensor_unbind_left(u, tensor_bind(pair)).values(), expected));
  }
  return {worst <= 1e-10, fmt("max residual %.3g over 1000 triples", worst)};
}

Verdict iterated_impossibility() {
  constexpr std::size_t d = 256;
  std::string detail;
  bool ok = true;
  for (Backend b : {Backend::kHadamard, Backend::kConvolution}) {
    int large = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Codebook cb = generate(CodebookKind::kRademacher, d, 3, s);
      large += spurious_unbind_residual(b, cb[0], cb[1], cb[2]) > 0.5 * std::sqrt(d) ? 1 : 0;
    }
    ok = ok && large >= 99;
    detail += std::string(to_string(b)) + fmt(" %d/100 ", large);
  }
  return {ok, detail + "seeds above 0.5*sqrt(d)"};
}

Verdict detection_rank_cells() {
  bool ok = true;
  std::string detail;
  for (auto [d, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {3, 3}, {4, 2}}) {
    const Codebook ortho = generate(CodebookKind::kOrthonormal, d, d, 4);
    const Codebook rad = generate(CodebookKind::kRademacher, d, d, 4);
    const std::size_t tensor = detection_rank(ortho, Backend::kTensor, n);
    const std::size_t had = std::max(detection_rank(ortho, Backend::kHadamard, n),
                                     detection_rank(rad, Backend::kHadamard, n));
    const auto ref = static_cast<std::size_t>(std::pow(d, n));
    ok = ok && tensor == ref && had <= d;
    detail += fmt("(%zu,%zu) tensor %zu/%zu hadamard %zu; ", d, n, tensor, ref, had);
  }
  return {ok, detail};
}

Verdict rademacher_statistics() {
  const DotStatistics s = dot_statistics(100, 100000, 5);
  const DotStatistics h = dot_statistics(16, 100000, 0);
  const ChiSquareResult chi = chi_square_binomial(h.histogram);
  const bool ok = s.sample_variance >= 0.0085 && s.sample_variance <= 0.0115 && chi.p_value >= 0.01;
  return {ok, fmt("variance %.5f, chi-square %.2f on %zu df, p = %.3f", s.sample_variance, chi.statistic,
                  chi.degrees_of_freedom, chi.p_value)};
}

Verdict hadamard_moments() {
  // Match noise is a sum of d(k - 1) = 768 signs; measured on the first run.
  constexpr double kMatchNoiseTerms = 768.0;
  ExperimentConfig cfg;
  cfg.d = 256;
  cfg.k = 4;
  cfg.m = 15;
  cfg.trials = 20000;
  cfg.seed = 6;
  const ScoreMoments mo = score_moments(cfg);
  const bool ok = std::abs(mo.match_mean - 256.0) <= 0.03 * 256.0 &&
                  std::abs(mo.match_var - kMatchNoiseTerms) <= 0.10 * kMatchNoiseTerms;
  return {ok, fmt("match mean %.2f, match variance %.1f (expected %.0f), spurious variance %.1f", mo.match_mean,
                  mo.match_var, kMatchNoiseTerms, mo.spurious_var)};
}

Verdict tensor_capacity() {
  bool ok = true;
  std::string detail;
  for (std::size_t k : {2, 4, 8}) {
    ExperimentConfig cfg;
    cfg.backend = Backend::kTensor;
    cfg.d = 32;
    cfg.k = k;
    cfg.m = 15;
    cfg.trials = 1000;
    cfg.seed = 7;
    const ExperimentResult r = run_experiment(cfg);
    ok = ok && r.accuracy >= r.bound - 3.0 * r.standard_error();
    detail += fmt("k=%zu acc %.3f bound %.6f; ", k, r.accuracy, r.bound);
  }
  return {ok, detail};
}

Verdict hadamard_capacity_shape() {
  const std::size_t ds[] = {256, 512, 1024};
  const std::size_t ks[] = {8, 16, 32};
  std::vector<ExperimentResult> rs;
  for (std::size_t d : ds) {
    for (std::size_t k : ks) {
      ExperimentConfig cfg;
      cfg.d = d;
      cfg.k = k;
      cfg.m = 15;
      cfg.trials = 1000;
      cfg.seed = 8;
      rs.push_back(run_experiment(cfg));
    }
  }
  auto at = [&](std::size_t di, std::size_t ki) -> const ExperimentResult& { return rs[di * 3 + ki]; };
  auto no_rise = [](const ExperimentResult& lo, const ExperimentResult& hi) {
    return hi.accuracy <= lo.accuracy + 2.0 * std::hypot(lo.standard_error(), hi.standard_error());
  };
  bool monotone = true;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j + 1 < 3; ++j) {
      monotone = monotone && no_rise(at(i, j), at(i, j + 1));
      monotone = monotone && no_rise(at(j + 1, i), at(j, i));
    }
  }
  std::string detail = "accuracy";
  for (const auto& r : rs) detail += fmt(" %.3f", r.accuracy);
  try {
    const CapacityFit fit = fit_capacity_constant(rs);
    detail += fmt("; C = %.4f, relative residual %.3f over %zu cells", fit.c, fit.relative_residual, fit.cells_used);
    return {monotone && fit.c > 0.0 && fit.relative_residual < 0.5, detail};
  } catch (const std::exception& e) {
    return {false, detail + "; fit failed: " + e.what()};
  }
}

Verdict memory_capacity_ratio() {
  const MemoryCapacityReport r = memory_capacity_report(4096, 2, 15, 500, 9, 0.95);
  std::printf("    %-10s %6s %10s\n", "backend", "dim", "k at 95%");
  std::printf("    %-10s %6zu %10zu\n", "hadamard", r.hadamard_dim, r.hadamard.k);
  std::printf("    %-10s %6zu %10zu\n", "tensor", r.tensor_dim, r.tensor.k);
  const bool ok = r.tensor.k > 0 && r.ratio >= 0.125 && r.ratio <= 8.0;
  return {ok, fmt("hadamard k=%zu, tensor k=%zu, ratio %.3f", r.hadamard.k, r.tensor.k, r.ratio)};
}

Verdict capacity_reproducibility() {
  cli::SweepSpec spec;
  spec.backends = {Backend::kHadamard, Backend::kTensor};
  spec.d = {16, 32};
  spec.k = {2, 8};
  spec.m = {5};
  spec.trials = 300;
  spec.seed = 10;
  std::string runs[2];
  for (std::string& text : runs) {
    std::ostringstream os, err;
    if (cli::cmd_capacity(spec, os, err) != cli::kSuccess) return {false, "cmd_capacity failed: " + err.str()};
    text = os.str();
  }
  const auto rows = std::count(runs[0].begin(), runs[0].end(), '\n');
  return {runs[0] == runs[1], fmt("%ld lines compared", static_cast<long>(rows))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact tensor unbinding", 1.0, exact_tensor_unbinding},
      {2, "spurious unbind decomposition", 1.0, spurious_decomposition},
      {3, "iterated unbinding residual", 5.0, iterated_impossibility},
      {4, "detection rank", 10.0, detection_rank_cells},
      {5, "rademacher statistics", 10.0, rademacher_statistics},
      {6, "hadamard score moments", 30.0, hadamard_moments},
      {7, "tensor capacity", 120.0, tensor_capacity},
      {8, "hadamard capacity shape", 300.0, hadamard_capacity_shape},
      {9, "memory capacity ratio", 300.0, memory_capacity_ratio},
      {10, "capacity reproducibility", 60.0, capacity_reproducibility},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool passed = v.passed && in_time;
    failed += passed ? 0 : 1;
    std::printf("%s %2d %s (%.2f s of %.0f s): %s%s\n", passed ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                c.budget_seconds, v.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
  }
  std::printf("criteria: %zu, passed: %zu, failed: %d\n", criteria.size(), criteria.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
