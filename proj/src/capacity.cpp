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

#include "vsa/capacity.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "vsa/memory.hpp"

namespace vsa {
namespace {

std::size_t needed_entries(const ExperimentConfig& cfg) { return (cfg.k + cfg.m) * cfg.n; }

struct Welford {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.backend == Backend::kConvolution) {
    throw std::invalid_argument("capacity experiments support the hadamard and tensor backends");
  }
  if (cfg.d == 0) throw std::invalid_argument("d must be >= 1");
  if (cfg.n < 2) throw std::invalid_argument("n must be >= 2");
  if (cfg.k == 0) throw std::invalid_argument("k must be >= 1");
  if (cfg.m == 0) throw std::invalid_argument("m must be >= 1");
  if (cfg.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (cfg.codebook_size != 0 && cfg.codebook_size < needed_entries(cfg)) {
    throw std::invalid_argument("codebook_size must be at least (k + m) * n");
  }
  if (!(cfg.hadamard_c > 0.0)) throw std::invalid_argument("hadamard constant C must be > 0");
  if (cfg.backend == Backend::kTensor &&
      std::pow(static_cast<double>(cfg.d), static_cast<double>(cfg.n)) > kTensorValueGuard) {
    throw std::length_error("tensor cell exceeds the d^n <= 2^24 guard");
  }
}

TrialOutcome run_trial(const ExperimentConfig& cfg, Rng& trial_rng) {
  validate(cfg);
  const std::size_t needed = needed_entries(cfg);
  const std::size_t cb_size = cfg.codebook_size == 0 ? needed : cfg.codebook_size;
  const Codebook cb = generate(CodebookKind::kRademacher, cfg.d, cb_size, trial_rng.next_u64());

  // Slot s of the trial uses codebook entry slots[s]; with a larger codebook
  // the entries are a uniformly drawn subset.
  std::vector<std::size_t> slots(cb_size);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  if (cb_size > needed) {
    for (std::size_t i = 0; i < needed; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(trial_rng.uniform() * static_cast<double>(cb_size - i));
      std::swap(slots[i], slots[std::min(j, cb_size - 1)]);
    }
  }

  auto make_tuple = [&](std::size_t t) {
    TupleIndex tuple{std::vector<std::size_t>(cfg.n)};
    for (std::size_t j = 0; j < cfg.n; ++j) tuple.indices[j] = slots[t * cfg.n + j];
    return tuple;
  };
  std::vector<TupleIndex> stored;
  stored.reserve(cfg.k);
  for (std::size_t i = 0; i < cfg.k; ++i) stored.push_back(make_tuple(i));

  // Candidate 0 is the first stored tuple; the rest are spurious.
  std::vector<TupleIndex> candidates;
  candidates.reserve(cfg.m + 1);
  candidates.push_back(stored.front());
  for (std::size_t i = 0; i < cfg.m; ++i) candidates.push_back(make_tuple(cfg.k + i));

  const Memory mem = bundle(cb, stored, cfg.backend);
  const DetectionResult det = query_detect(mem, candidates, cb);

  TrialOutcome out;
  out.match_score = det.scores.front();
  out.spurious_scores.assign(det.scores.begin() + 1, det.scores.end());
  out.max_spurious = out.spurious_scores.front();
  for (double s : out.spurious_scores) out.max_spurious = std::max(out.max_spurious, s);
  out.won = out.match_score > out.max_spurious;
  out.tied = out.match_score == out.max_spurious;
  return out;
}

double ExperimentResult::standard_error() const {
  return std::sqrt(accuracy * (1.0 - accuracy) / static_cast<double>(config.trials));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.config = cfg;
  Welford match;
  Welford spurious;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, StreamPurpose::kTrial, t);
    const TrialOutcome o = run_trial(cfg, rng);
    result.wins += o.won ? 1 : 0;
    result.ties += o.tied ? 1 : 0;
    match.add(o.match_score);
    for (double s : o.spurious_scores) spurious.add(s);
  }

  const auto trials = static_cast<double>(cfg.trials);
  result.accuracy = static_cast<double>(result.wins) / trials;
  result.tie_rate = static_cast<double>(result.ties) / trials;
  result.match_mean = match.mean;
  result.match_var = match.variance();
  result.spurious_mean = spurious.mean;
  result.spurious_var = spurious.variance();
  const auto d = static_cast<double>(cfg.d);
  const auto k = static_cast<double>(cfg.k);
  const auto m = static_cast<double>(cfg.m);
  if (cfg.backend == Backend::kHadamard) {
    // With one stored tuple there is no noise term; the bound's limit is 1.
    result.bound = cfg.k >= 2 ? bound_hadamard(d, k, m, cfg.hadamard_c) : 1.0;
  } else {
    result.bound = bound_tensor(d, static_cast<double>(cfg.n), k, m);
  }
  result.score_scale = score_scale(cfg.backend, CodebookKind::kRademacher, cfg.d, cfg.n);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double bound_hadamard(double d, double k, double m, double c) {
  if (k < 2.0) throw std::invalid_argument("the Hadamard bound needs k >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("the Hadamard bound needs C > 0");
  return 1.0 - m * std::exp(-c * d / (k - 1.0));
}

double bound_tensor(double d, double n, double k, double m) {
  if (k < 1.0) throw std::invalid_argument("the tensor bound needs k >= 1");
  if (m < 0.0) throw std::invalid_argument("the tensor bound needs m >= 0");
  if (m == 0.0) return 1.0;
  return 1.0 - m * std::exp(-std::pow(d, n) / (2.0 * k - 1.0));
}

CapacityFit fit_capacity_constant(std::span<const ExperimentResult> results) {
  double sxy = 0.0;
  double sxx = 0.0;
  std::vector<std::pair<double, double>> points;
  for (const auto& r : results) {
    const auto& cfg = r.config;
    if (cfg.backend != Backend::kHadamard || cfg.k < 2) continue;
    if (!(r.accuracy > 0.0 && r.accuracy < 1.0)) continue;
    const double x = static_cast<double>(cfg.d) / static_cast<double>(cfg.k - 1);
    const double y = std::log1p(-r.accuracy) - std::log(static_cast<double>(cfg.m));
    points.emplace_back(x, y);
    sxy += x * y;
    sxx += x * x;
  }
  if (points.size() < 3) {
    throw std::invalid_argument("capacity fit needs at least three unsaturated Hadamard cells");
  }

  CapacityFit fit;
  fit.c = -sxy / sxx;
  fit.cells_used = points.size();
  double rss = 0.0;
  double yy = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y + fit.c * x;
    rss += r * r;
    yy += y * y;
  }
  fit.relative_residual = yy > 0.0 ? std::sqrt(rss / yy) : 0.0;
  return fit;
}

ScoreMoments score_moments(const ExperimentConfig& cfg) {
  if (cfg.backend != Backend::kHadamard) {
    throw std::invalid_argument("score_moments is defined for the Hadamard backend");
  }
  const ExperimentResult r = run_experiment(cfg);
  return {r.match_mean, r.match_var, r.spurious_mean, r.spurious_var};
}

CapacityPoint capacity_at_accuracy(ExperimentConfig cfg, double target,
                                   std::size_t k_max) {
  if (k_max == 0) throw std::invalid_argument("k_max must be >= 1");
  std::map<std::size_t, double> cache;
  CapacityPoint point;
  auto accuracy = [&](std::size_t k) {
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    cfg.k = k;
    const double acc = run_experiment(cfg).accuracy;
    ++point.evaluations;
    cache.emplace(k, acc);
    return acc;
  };

  if (accuracy(1) < target) {
    point.accuracy_above_k = cache[1];
    return point;
  }
  std::size_t lo = 1;  // passes
  std::size_t hi = 0;  // fails, 0 while unknown
  while (hi == 0) {
    const std::size_t next = std::min(lo * 2, k_max);
    if (next == lo) break;
    if (accuracy(next) >= target) {
      lo = next;
    } else {
      hi = next;
    }
  }
  if (hi != 0) {
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (accuracy(mid) >= target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    point.accuracy_above_k = cache[hi];
  }
  point.k = lo;
  point.accuracy_at_k = cache[lo];
  return point;
}

MemoryCapacityReport memory_capacity_report(std::size_t parameters,
                                            std::size_t n, std::size_t m,
                                            std::size_t trials,
                                            std::uint64_t seed, double target) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  const auto d = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(parameters), 1.0 / static_cast<double>(n))));
  if (std::pow(static_cast<double>(d), static_cast<double>(n)) != static_cast<double>(parameters)) {
    throw std::invalid_argument("parameter budget must be a perfect n-th power");
  }

  MemoryCapacityReport report;
  report.parameters = parameters;
  report.n = n;
  report.hadamard_dim = parameters;
  report.tensor_dim = d;

  ExperimentConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.trials = trials;
  cfg.seed = seed;
  // Capacity is O(parameters) for both; 4x leaves room above either.
  const std::size_t k_max = 4 * parameters;

  cfg.backend = Backend::kHadamard;
  cfg.d = parameters;
  report.hadamard = capacity_at_accuracy(cfg, target, k_max);

  cfg.backend = Backend::kTensor;
  cfg.d = d;
  report.tensor = capacity_at_accuracy(cfg, target, k_max);

  report.ratio = report.tensor.k == 0
                     ? 0.0
                     : static_cast<double>(report.hadamard.k) / static_cast<double>(report.tensor.k);
  return report;
}

}  // namespace vsa
