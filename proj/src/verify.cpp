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

#include "vsa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vsa/binding.hpp"
#include "vsa/capacity.hpp"
#include "vsa/cli.hpp"
#include "vsa/codebook.hpp"
#include "vsa/memory.hpp"
#include "vsa/rng.hpp"

namespace vsa {
namespace {

using BindFn = std::function<BoundRep(Backend, std::span<const Embedding>)>;

constexpr Backend kAllBackends[] = {Backend::kTensor, Backend::kHadamard, Backend::kConvolution};

Embedding gaussian(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.normal();
  return Embedding(std::move(v));
}

Embedding signs(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  rng.fill_signs(v);
  return Embedding(std::move(v));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << x;
  return os.str();
}

CheckResult make(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

// codebook -----------------------------------------------------------------

CheckResult codebook_determinism(std::uint64_t seed) {
  bool ok = true;
  for (auto kind : {CodebookKind::kRademacher, CodebookKind::kOrthonormal}) {
    const Codebook a = generate(kind, 64, 16, seed);
    const Codebook b = generate(kind, 64, 16, seed);
    ok = ok && a == b && codebook_from_json(to_json(a)) == a;
  }
  return make("codebook.determinism", ok, "regeneration from (kind, d, m, seed) is bit-identical");
}

CheckResult codebook_orthonormal_gram(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 16, 16, seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      const double g = dot(cb[i].values(), cb[j].values());
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return make("codebook.orthonormal_gram", worst <= 1e-10, "max |G - I| = " + fmt(worst));
}

CheckResult codebook_rademacher_mean(std::uint64_t seed) {
  constexpr std::size_t d = 64;
  constexpr std::size_t pairs = 20000;
  const DotStatistics s = dot_statistics(d, pairs, seed);
  const double limit = 4.0 * std::sqrt(1.0 / (d * static_cast<double>(pairs)));
  return make("codebook.rademacher_mean", std::abs(s.sample_mean) <= limit,
              "|mean Z| = " + fmt(std::abs(s.sample_mean)) + " <= " + fmt(limit));
}

CheckResult codebook_binomial_support(std::uint64_t seed) {
  constexpr std::size_t d = 33;
  Rng rng(seed, StreamPurpose::kVerify, 4);
  bool ok = true;
  for (int p = 0; p < 2000 && ok; ++p) {
    const Embedding u = signs(rng, d);
    const Embedding v = signs(rng, d);
    const double agreements = static_cast<double>(d) * (normalized_dot(u, v, true) + 1.0) / 2.0;
    ok = std::abs(agreements - std::round(agreements)) < 1e-9 && agreements >= -1e-9 &&
         agreements <= static_cast<double>(d) + 1e-9;
  }
  const DotStatistics s = dot_statistics(d, 2000, seed);
  std::uint64_t total = 0;
  for (auto c : s.histogram) total += c;
  ok = ok && total == 2000 && s.histogram.size() == d + 1;
  return make("codebook.binomial_support", ok, "d(Z+1)/2 is an integer in [0, d] for every sample");
}

// binding ------------------------------------------------------------------

CheckResult binding_multilinearity(std::uint64_t seed, const BindFn& bind_fn) {
  constexpr std::size_t d = 5;
  constexpr std::size_t n = 3;
  Rng rng(seed, StreamPurpose::kVerify, 5);
  double worst = 0.0;
  for (Backend b : kAllBackends) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<Embedding> vs;
      for (std::size_t j = 0; j < n; ++j) vs.push_back(gaussian(rng, d));
      const Embedding x = gaussian(rng, d);
      const Embedding y = gaussian(rng, d);
      const double alpha = rng.uniform(-2.0, 2.0);
      const double beta = rng.uniform(-2.0, 2.0);
      const auto slot = static_cast<std::size_t>(rng.uniform() * n);

      auto with = [&](const Embedding& e) {
        auto copy = vs;
        copy[slot] = e;
        return bind_fn(b, copy);
      };
      BoundRep expected = with(x).scale(alpha);
      expected.add_scaled(beta, with(y));
      const BoundRep got = with(combine(alpha, x, beta, y));
      worst = std::max(worst, max_abs_diff(got.values(), expected.values()));
    }
  }
  return make("binding.multilinearity", worst <= 1e-10, "max deviation = " + fmt(worst));
}

CheckResult binding_unbind_linearity(std::uint64_t seed) {
  constexpr std::size_t d = 6;
  Rng rng(seed, StreamPurpose::kVerify, 6);
  double worst = 0.0;
  for (Backend b : kAllBackends) {
    for (int rep = 0; rep < 50; ++rep) {
      const Embedding vs[] = {gaussian(rng, d), gaussian(rng, d), gaussian(rng, d)};
      const BoundRep r = bind(b, vs);
      const Embedding x = gaussian(rng, d);
      const Embedding y = gaussian(rng, d);
      const double alpha = rng.uniform(-2.0, 2.0);
      const double beta = rng.uniform(-2.0, 2.0);
      const Embedding mix = combine(alpha, x, beta, y);

      BoundRep left = unbind_left(x, r).scale(alpha);
      left.add_scaled(beta, unbind_left(y, r));
      BoundRep right = unbind_right(r, x).scale(alpha);
      right.add_scaled(beta, unbind_right(r, y));
      worst = std::max(worst, max_abs_diff(unbind_left(mix, r).values(), left.values()));
      worst = std::max(worst, max_abs_diff(unbind_right(r, mix).values(), right.values()));
    }
  }
  return make("binding.unbind_linearity", worst <= 1e-10, "max deviation = " + fmt(worst));
}

CheckResult binding_tensor_roundtrip(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 8, 8, seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      const Embedding pair[] = {cb[i], cb[j]};
      const BoundRep t = tensor_bind(pair);
      worst = std::max(worst, max_abs_diff(tensor_unbind_left(cb[i], t).values(), cb[j].values()));
      worst = std::max(worst, max_abs_diff(tensor_unbind_right(t, cb[j]).values(), cb[i].values()));
    }
  }
  return make("binding.tensor_roundtrip", worst <= 1e-12, "max residual = " + fmt(worst));
}

CheckResult binding_spurious_decomposition(std::uint64_t seed) {
  constexpr std::size_t d = 16;
  Rng rng(seed, StreamPurpose::kVerify, 8);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const Embedding u = gaussian(rng, d);
    const Embedding v = gaussian(rng, d);
    const Embedding w = gaussian(rng, d);
    const Embedding pair[] = {v, w};
    const BoundRep got = tensor_unbind_left(u, tensor_bind(pair));
    const double a = dot(u.values(), v.values());
    std::vector<double> expected(d);
    for (std::size_t i = 0; i < d; ++i) expected[i] = a * w[i];
    worst = std::max(worst, max_abs_diff(got.values(), expected));
  }
  return make("binding.spurious_decomposition", worst <= 1e-12,
              "max |unbind(u, v(x)w) - <u,v>w| = " + fmt(worst));
}

CheckResult binding_iterated_impossibility(std::uint64_t seed) {
  constexpr std::size_t d = 64;
  constexpr int seeds = 100;
  const double threshold = 0.5 * std::sqrt(static_cast<double>(d));
  std::string detail;
  bool ok = true;
  for (Backend b : {Backend::kHadamard, Backend::kConvolution}) {
    int hits = 0;
    for (int s = 0; s < seeds; ++s) {
      const Codebook cb = generate(CodebookKind::kRademacher, d, 3, derive_seed(seed, StreamPurpose::kVerify, 900 + s));
      hits += spurious_unbind_residual(b, cb[0], cb[1], cb[2]) > threshold ? 1 : 0;
    }
    ok = ok && hits >= 99;
    detail += std::string(to_string(b)) + " " + std::to_string(hits) + "/100 ";
  }
  return make("binding.iterated_impossibility", ok, detail + "seeds with residual > 0.5 sqrt(d)");
}

CheckResult binding_detection_calibration(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 3, 3, seed);
  double worst_match = 0.0;
  double worst_other = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const BoundRep stored = bind(Backend::kTensor, cb, TupleIndex{{a, b}});
      for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
          const double s = detect(cb, TupleIndex{{x, y}}, stored);
          if (x == a && y == b) {
            worst_match = std::max(worst_match, std::abs(s - 1.0));
          } else {
            worst_other = std::max(worst_other, std::abs(s));
          }
        }
      }
    }
  }
  return make("binding.detection_calibration", worst_match <= 1e-10 && worst_other <= 1e-10,
              "max |D - 1| = " + fmt(worst_match) + ", max |D| off-tuple = " + fmt(worst_other));
}

CheckResult binding_factorization(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kRademacher, 4, 4, seed);
  double worst = 0.0;
  for (std::size_t n : {2u, 3u}) {
    std::size_t count = 1;
    for (std::size_t j = 0; j < n; ++j) count *= cb.size();
    for (std::size_t code = 0; code < count; ++code) {
      TupleIndex t{std::vector<std::size_t>(n)};
      std::size_t c = code;
      for (std::size_t j = n; j-- > 0;) {
        t.indices[j] = c % cb.size();
        c /= cb.size();
      }
      const BoundRep diag = hadamard_from_tensor(bind(Backend::kTensor, cb, t));
      worst = std::max(worst, max_abs_diff(diag.values(), bind(Backend::kHadamard, cb, t).values()));
    }
  }
  return make("binding.factorization", worst <= 1e-12, "max |diag(tensor) - hadamard| = " + fmt(worst));
}

// memory -------------------------------------------------------------------

CheckResult memory_superposition(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kRademacher, 8, 12, seed);
  const std::vector<TupleIndex> t1 = {{{0, 1}}, {{2, 3}}, {{4, 5}}};
  const std::vector<TupleIndex> t2 = {{{6, 7}}, {{8, 9}}};
  std::vector<TupleIndex> both = t1;
  both.insert(both.end(), t2.begin(), t2.end());
  double worst = 0.0;
  for (Backend b : kAllBackends) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      const BoundRep whole = query_unbind(bundle(cb, both, b), cb[10], side);
      BoundRep parts = query_unbind(bundle(cb, t1, b), cb[10], side);
      parts.add_scaled(1.0, query_unbind(bundle(cb, t2, b), cb[10], side));
      worst = std::max(worst, max_abs_diff(whole.values(), parts.values()));
    }
  }
  return make("memory.superposition", worst <= 1e-10, "max deviation = " + fmt(worst));
}

CheckResult memory_scale_equivariance(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kRademacher, 32, 10, seed);
  const std::vector<TupleIndex> stored = {{{0, 1}}, {{2, 3}}, {{4, 5}}};
  const std::vector<TupleIndex> candidates = {{{0, 1}}, {{6, 7}}, {{8, 9}}, {{2, 3}}};
  Rng rng(seed, StreamPurpose::kVerify, 13);
  bool ok = true;
  double worst = 0.0;
  for (Backend b : kAllBackends) {
    const DetectionResult base = query_detect(bundle(cb, stored, b), candidates, cb);
    for (int rep = 0; rep < 10; ++rep) {
      const double alpha = rng.uniform(0.1, 3.0);
      const std::vector<double> w(stored.size(), alpha);
      const DetectionResult scaled = query_detect(bundle(cb, stored, w, b), candidates, cb);
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double diff = std::abs(scaled.scores[i] - alpha * base.scores[i]);
        worst = std::max(worst, diff / std::max(1.0, std::abs(base.scores[i])));
      }
      ok = ok && scaled.argmax == base.argmax;
    }
  }
  ok = ok && worst <= 1e-10;
  return make("memory.scale_equivariance", ok, "max relative deviation = " + fmt(worst));
}

CheckResult memory_tensor_exactness(std::uint64_t seed) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 4, 4, seed);
  std::vector<TupleIndex> all;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) all.push_back(TupleIndex{{a, b}});
  }
  double worst = 0.0;
  std::size_t memories = 0;
  // Every set of 1..4 distinct stored tuples.
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pick.empty()) {
      std::vector<TupleIndex> stored;
      for (auto p : pick) stored.push_back(all[p]);
      const DetectionResult r = query_detect(bundle(cb, stored, Backend::kTensor), all, cb);
      for (std::size_t i = 0; i < all.size(); ++i) {
        const bool is_stored = std::find(pick.begin(), pick.end(), i) != pick.end();
        worst = std::max(worst, std::abs(r.scores[i] - (is_stored ? 1.0 : 0.0)));
      }
      ++memories;
    }
    if (pick.size() == 4) return;
    for (std::size_t i = start; i < all.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return make("memory.tensor_exactness", worst <= 1e-10,
              std::to_string(memories) + " memories, max deviation = " + fmt(worst));
}

// capacity -----------------------------------------------------------------

CheckResult capacity_determinism(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.d = 64;
  cfg.k = 8;
  cfg.trials = 100;
  cfg.seed = seed;
  bool ok = true;
  for (Backend b : {Backend::kHadamard, Backend::kTensor}) {
    cfg.backend = b;
    cfg.d = b == Backend::kTensor ? 8 : 64;
    const ExperimentResult r1 = run_experiment(cfg);
    const ExperimentResult r2 = run_experiment(cfg);
    ok = ok && cli::csv_row(r1) == cli::csv_row(r2) && r1.wins == r2.wins;
  }
  return make("capacity.determinism", ok, "identical config and seed give identical results");
}

CheckResult capacity_tensor_bound(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.backend = Backend::kTensor;
  cfg.d = 16;
  cfg.n = 2;
  cfg.m = 15;
  cfg.trials = 200;
  cfg.seed = seed;
  bool ok = true;
  std::string detail;
  for (std::size_t k : {2u, 8u, 32u}) {
    cfg.k = k;
    const ExperimentResult r = run_experiment(cfg);
    ok = ok && r.accuracy >= r.bound - 3.0 * r.standard_error();
    detail += "k=" + std::to_string(k) + ": " + fmt(r.accuracy) + " vs " + fmt(r.bound) + "; ";
  }
  return make("capacity.tensor_bound", ok, detail);
}

CheckResult capacity_hadamard_fitted_bound(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.backend = Backend::kHadamard;
  cfg.n = 2;
  cfg.m = 15;
  cfg.trials = 300;
  std::vector<ExperimentResult> results;
  std::uint64_t cell = 0;
  for (std::size_t d : {64u, 128u, 256u}) {
    for (std::size_t k : {4u, 8u, 16u}) {
      cfg.d = d;
      cfg.k = k;
      cfg.seed = derive_seed(seed, StreamPurpose::kVerify, 1700 + cell++);
      results.push_back(run_experiment(cfg));
    }
  }
  const CapacityFit fit = fit_capacity_constant(results);
  bool ok = fit.c > 0.0;
  double worst = 0.0;
  for (const auto& r : results) {
    const double b = bound_hadamard(static_cast<double>(r.config.d), static_cast<double>(r.config.k),
                                    static_cast<double>(r.config.m), fit.c);
    const double shortfall = b - r.accuracy;
    const double se = r.standard_error();
    worst = std::max(worst, shortfall);
    ok = ok && shortfall <= 3.0 * se;
  }
  return make("capacity.hadamard_fitted_bound", ok,
              "C = " + fmt(fit.c) + " over " + std::to_string(fit.cells_used) +
                  " cells, worst shortfall = " + fmt(worst));
}

CheckResult capacity_memory_ratio(std::uint64_t seed) {
  const MemoryCapacityReport rep = memory_capacity_report(256, 2, 15, 200, seed, 0.95);
  const bool ok = rep.ratio >= 1.0 / 8.0 && rep.ratio <= 8.0;
  return make("capacity.memory_ratio", ok,
              "k95 hadamard(D=256) = " + std::to_string(rep.hadamard.k) + ", tensor(d=16) = " +
                  std::to_string(rep.tensor.k) + ", ratio = " + fmt(rep.ratio));
}

// cli ----------------------------------------------------------------------

cli::SweepSpec small_sweep(std::uint64_t seed) {
  cli::SweepSpec spec;
  spec.backends = {Backend::kHadamard, Backend::kTensor};
  spec.d = {8, 16};
  spec.n = {2};
  spec.k = {2, 4};
  spec.m = {3};
  spec.trials = 50;
  spec.seed = seed;
  return spec;
}

CheckResult cli_csv_schema(std::uint64_t seed) {
  std::ostringstream data;
  cli::run_sweep(small_sweep(seed), data);
  std::istringstream in(data.str());
  std::string line;
  std::getline(in, line);
  bool ok = line == cli::csv_header();
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(fields, field, ',')) {
      if (col > 0) {
        char* end = nullptr;
        const double x = std::strtod(field.c_str(), &end);
        ok = ok && end != field.c_str() && *end == '\0' && std::isfinite(x);
      }
      ++col;
    }
    ok = ok && col == cli::csv_columns().size();
  }
  ok = ok && rows == 8;
  return make("cli.csv_schema", ok, std::to_string(rows) + " rows parsed against the fixed header");
}

CheckResult cli_reproducibility(std::uint64_t seed) {
  std::ostringstream a;
  std::ostringstream b;
  cli::run_sweep(small_sweep(seed), a);
  cli::run_sweep(small_sweep(seed), b);
  return make("cli.reproducibility", a.str() == b.str(), "two identical sweeps produce identical bytes");
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options) {
  const std::uint64_t seed = options.seed;
  BindFn bind_fn = [](Backend b, std::span<const Embedding> vs) { return bind(b, vs); };
  if (options.corrupt_binding) {
    bind_fn = [](Backend b, std::span<const Embedding> vs) {
      BoundRep r = bind(b, vs);
      std::vector<double> v(r.values().begin(), r.values().end());
      v[0] += 0.5;
      return BoundRep(r.backend(), r.order(), r.dim(), std::move(v));
    };
  }

  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks = {
      {"codebook.determinism", [&] { return codebook_determinism(seed); }},
      {"codebook.orthonormal_gram", [&] { return codebook_orthonormal_gram(seed); }},
      {"codebook.rademacher_mean", [&] { return codebook_rademacher_mean(seed); }},
      {"codebook.binomial_support", [&] { return codebook_binomial_support(seed); }},
      {"binding.multilinearity", [&] { return binding_multilinearity(seed, bind_fn); }},
      {"binding.unbind_linearity", [&] { return binding_unbind_linearity(seed); }},
      {"binding.tensor_roundtrip", [&] { return binding_tensor_roundtrip(seed); }},
      {"binding.spurious_decomposition", [&] { return binding_spurious_decomposition(seed); }},
      {"binding.iterated_impossibility", [&] { return binding_iterated_impossibility(seed); }},
      {"binding.detection_calibration", [&] { return binding_detection_calibration(seed); }},
      {"binding.factorization", [&] { return binding_factorization(seed); }},
      {"memory.superposition", [&] { return memory_superposition(seed); }},
      {"memory.scale_equivariance", [&] { return memory_scale_equivariance(seed); }},
      {"memory.tensor_exactness", [&] { return memory_tensor_exactness(seed); }},
      {"capacity.determinism", [&] { return capacity_determinism(seed); }},
      {"capacity.tensor_bound", [&] { return capacity_tensor_bound(seed); }},
      {"capacity.hadamard_fitted_bound", [&] { return capacity_hadamard_fitted_bound(seed); }},
      {"capacity.memory_ratio", [&] { return capacity_memory_ratio(seed); }},
      {"cli.csv_schema", [&] { return cli_csv_schema(seed); }},
      {"cli.reproducibility", [&] { return cli_reproducibility(seed); }},
  };

  std::vector<CheckResult> results;
  results.reserve(checks.size());
  for (const auto& [name, check] : checks) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return results;
}

void print_report(const std::vector<CheckResult>& results, std::ostream& os) {
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(34) << r.name << r.detail << '\n';
  }
  os << "checks run: " << results.size() << ", passed: " << passed
     << ", failed: " << results.size() - passed << '\n';
}

}  // namespace vsa
