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
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "vsa/binding.hpp"
#include "vsa/capacity.hpp"
#include "vsa/codebook.hpp"

namespace vsa::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailure = 1, kInvalidArguments = 2, kInterrupted = 130 };

enum class OutputFormat { kCsv, kJson };

inline constexpr std::size_t kMaxSweepCells = 10000;

struct SweepSpec {
  std::vector<Backend> backends{Backend::kHadamard};
  std::vector<std::size_t> d{256, 1024};
  std::vector<std::size_t> n{2};
  std::vector<std::size_t> k{4, 16, 64};
  std::vector<std::size_t> m{15};
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// Empty means standard output.
  std::string out;
  OutputFormat format = OutputFormat::kCsv;
  double hadamard_c = kDefaultHadamardC;
};

/// Cells in output order: backend, then d, n, k, m (last fastest). Cell i
/// runs with seed derive_seed(spec.seed, kSweepCell, i).
std::vector<ExperimentConfig> expand(const SweepSpec& spec);

const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const ExperimentResult& r);
nlohmann::json to_json(const ExperimentResult& r);

/// Shortest decimal text that round-trips to `x`.
std::string format_number(double x);

struct SweepOutcome {
  std::vector<ExperimentResult> results;
  std::vector<std::string> warnings;
  bool interrupted = false;
};

/// Runs every cell, writing each data row to `data` as soon as it finishes.
/// Tensor cells over the d^n guard are skipped and reported in `warnings`.
SweepOutcome run_sweep(const SweepSpec& spec, std::ostream& data);

int cmd_stats(std::size_t d, std::size_t n_pairs, std::uint64_t seed,
              const std::string& out, OutputFormat format, std::ostream& os,
              std::ostream& err);
int cmd_capacity(const SweepSpec& spec, std::ostream& os, std::ostream& err);
int cmd_verify(std::uint64_t seed, bool corrupt_binding, std::ostream& os,
               std::ostream& err);
int cmd_rank(std::size_t d, std::size_t n, Backend backend, CodebookKind kind,
             std::uint64_t seed, OutputFormat format, std::ostream& os,
             std::ostream& err);

/// Parses `args` (program name first) and dispatches to a command.
int run(const std::vector<std::string>& args, std::ostream& os, std::ostream& err);

}  // namespace vsa::cli
