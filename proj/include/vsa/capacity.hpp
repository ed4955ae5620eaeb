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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vsa/binding.hpp"
#include "vsa/rng.hpp"

namespace vsa {

/// Largest tensor representation (d^n values) a capacity cell may use.
inline constexpr double kTensorValueGuard = 16777216.0;  // 2^24

/// Default constant for the Hadamard bound. With (2k-1)d Rademacher terms in
/// the score difference, Hoeffding gives exp(-d / (2(2k-1))), which is at most
/// exp(-C d / (k-1)) for every k >= 2 when C = 1/6.
inline constexpr double kDefaultHadamardC = 1.0 / 6.0;

struct ExperimentConfig {
  Backend backend = Backend::kHadamard;
  std::size_t d = 256;
  std::size_t n = 2;
  /// Number of superposed tuples.
  std::size_t k = 4;
  /// Number of spurious candidate tuples.
  std::size_t m = 15;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// Entries drawn per trial; 0 means exactly (k + m) * n.
  std::size_t codebook_size = 0;
  double hadamard_c = kDefaultHadamardC;
};

/// Throws std::invalid_argument for k, m, trials or d of zero, n < 2, a
/// convolution backend, or a codebook smaller than (k + m) * n; throws
/// std::length_error when a tensor cell exceeds kTensorValueGuard.
void validate(const ExperimentConfig& cfg);

struct TrialOutcome {
  bool won = false;
  bool tied = false;
  double match_score = 0.0;
  double max_spurious = 0.0;
  std::vector<double> spurious_scores;
};

/// One detection trial: a fresh Rademacher codebook, k stored tuples and m
/// spurious tuples on disjoint entries, all m + 1 candidates scored against
/// the bundle. Scores are unscaled. `won` requires a strict maximum.
TrialOutcome run_trial(const ExperimentConfig& cfg, Rng& trial_rng);

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t wins = 0;
  std::size_t ties = 0;
  double accuracy = 0.0;
  double tie_rate = 0.0;
  double match_mean = 0.0;
  double match_var = 0.0;
  double spurious_mean = 0.0;
  double spurious_var = 0.0;
  /// Theoretical lower bound on accuracy; may be negative.
  double bound = 0.0;
  /// Multiply raw scores by this to reach unit scale.
  double score_scale = 1.0;
  double wall_time_seconds = 0.0;

  /// Binomial standard error of `accuracy`.
  double standard_error() const;
};

/// Runs cfg.trials trials; trial t draws from the (seed, kTrial, t) stream.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// 1 - m exp(-C d / (k - 1)). Requires k >= 2 and C > 0.
double bound_hadamard(double d, double k, double m, double c);
/// 1 - m exp(-d^n / (2k - 1)). Requires k >= 1.
double bound_tensor(double d, double n, double k, double m);

struct CapacityFit {
  double c = 0.0;
  /// ||residual|| / ||y|| of the fit.
  double relative_residual = 0.0;
  std::size_t cells_used = 0;
};

/// Least-squares C in log(1 - accuracy) - log(m) = -C d / (k - 1) over
/// Hadamard cells with k >= 2 and accuracy strictly inside (0, 1). Throws
/// std::invalid_argument with fewer than three such cells.
CapacityFit fit_capacity_constant(std::span<const ExperimentResult> results);

struct ScoreMoments {
  double match_mean = 0.0;
  double match_var = 0.0;
  double spurious_mean = 0.0;
  double spurious_var = 0.0;
};

/// Empirical moments of unscaled Hadamard detection scores.
ScoreMoments score_moments(const ExperimentConfig& cfg);

struct CapacityPoint {
  /// Largest k found with accuracy >= target (0 if even k = 1 fails).
  std::size_t k = 0;
  double accuracy_at_k = 0.0;
  double accuracy_above_k = 0.0;
  std::size_t evaluations = 0;
};

/// Searches k in [1, k_max] by doubling then bisection, assuming accuracy
/// is non-increasing in k. cfg.k is ignored.
CapacityPoint capacity_at_accuracy(ExperimentConfig cfg, double target,
                                   std::size_t k_max);

struct MemoryCapacityReport {
  std::size_t parameters = 0;
  std::size_t n = 0;
  std::size_t hadamard_dim = 0;
  std::size_t tensor_dim = 0;
  CapacityPoint hadamard;
  CapacityPoint tensor;
  /// hadamard.k / tensor.k
  double ratio = 0.0;
};

/// Compares the capacity of a Hadamard rep of dimension `parameters` with
/// a tensor rep of the same number of values (d^n == parameters).
MemoryCapacityReport memory_capacity_report(std::size_t parameters,
                                            std::size_t n, std::size_t m,
                                            std::size_t trials,
                                            std::uint64_t seed, double target);

}  // namespace vsa
