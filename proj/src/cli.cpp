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

#include "vsa/cli.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "vsa/rng.hpp"
#include "vsa/verify.hpp"

namespace vsa::cli {
namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

// Installs the SIGINT handler for the lifetime of a sweep.
class InterruptGuard {
 public:
  InterruptGuard() : previous_(std::signal(SIGINT, on_interrupt)) { g_interrupted.store(false); }
  ~InterruptGuard() { std::signal(SIGINT, previous_); }
  InterruptGuard(const InterruptGuard&) = delete;
  InterruptGuard& operator=(const InterruptGuard&) = delete;

 private:
  void (*previous_)(int);
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string describe(const ExperimentConfig& cfg) {
  return "backend=" + std::string(to_string(cfg.backend)) + " d=" + std::to_string(cfg.d) +
         " n=" + std::to_string(cfg.n) + " k=" + std::to_string(cfg.k) + " m=" + std::to_string(cfg.m);
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown format: " + s);
}

// Opens `path` for writing, or returns nullptr for standard output.
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*f) throw std::invalid_argument("cannot open output file: " + path);
  return f;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<ExperimentConfig> expand(const SweepSpec& spec) {
  if (spec.backends.empty() || spec.d.empty() || spec.n.empty() || spec.k.empty() || spec.m.empty()) {
    throw std::invalid_argument("sweep value lists must not be empty");
  }
  const std::size_t cells =
      spec.backends.size() * spec.d.size() * spec.n.size() * spec.k.size() * spec.m.size();
  if (cells > kMaxSweepCells) {
    throw std::length_error("sweep has " + std::to_string(cells) + " cells; the limit is " +
                            std::to_string(kMaxSweepCells));
  }
  std::vector<ExperimentConfig> out;
  out.reserve(cells);
  for (Backend b : spec.backends) {
    for (std::size_t d : spec.d) {
      for (std::size_t n : spec.n) {
        for (std::size_t k : spec.k) {
          for (std::size_t m : spec.m) {
            ExperimentConfig cfg;
            cfg.backend = b;
            cfg.d = d;
            cfg.n = n;
            cfg.k = k;
            cfg.m = m;
            cfg.trials = spec.trials;
            cfg.hadamard_c = spec.hadamard_c;
            cfg.seed = derive_seed(spec.seed, StreamPurpose::kSweepCell, out.size());
            out.push_back(cfg);
          }
        }
      }
    }
  }
  return out;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "backend", "d",     "n",        "k",     "m",          "trials",    "seed",
      "accuracy", "tie_rate", "bound", "match_mean", "match_var", "spurious_var"};
  return columns;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : csv_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string csv_row(const ExperimentResult& r) {
  const auto& c = r.config;
  std::string out(to_string(c.backend));
  for (std::size_t v : {c.d, c.n, c.k, c.m, c.trials}) out += ',' + std::to_string(v);
  out += ',' + std::to_string(c.seed);
  for (double v : {r.accuracy, r.tie_rate, r.bound, r.match_mean, r.match_var, r.spurious_var}) {
    out += ',' + format_number(v);
  }
  return out;
}

nlohmann::json to_json(const ExperimentResult& r) {
  const auto& c = r.config;
  return {{"backend", to_string(c.backend)},
          {"d", c.d},
          {"n", c.n},
          {"k", c.k},
          {"m", c.m},
          {"trials", c.trials},
          {"seed", c.seed},
          {"accuracy", r.accuracy},
          {"tie_rate", r.tie_rate},
          {"bound", r.bound},
          {"match_mean", r.match_mean},
          {"match_var", r.match_var},
          {"spurious_var", r.spurious_var}};
}

SweepOutcome run_sweep(const SweepSpec& spec, std::ostream& data) {
  const std::vector<ExperimentConfig> cells = expand(spec);
  // Reject malformed cells before any work; only the tensor size guard is
  // handled per cell.
  for (const auto& cfg : cells) {
    try {
      validate(cfg);
    } catch (const std::length_error&) {
    }
  }

  SweepOutcome outcome;
  if (spec.format == OutputFormat::kCsv) data << csv_header() << '\n' << std::flush;
  for (const auto& cfg : cells) {
    if (g_interrupted.load()) {
      outcome.interrupted = true;
      break;
    }
    try {
      validate(cfg);
    } catch (const std::length_error& e) {
      outcome.warnings.push_back("skipped " + describe(cfg) + ": " + e.what());
      continue;
    }
    outcome.results.push_back(run_experiment(cfg));
    if (spec.format == OutputFormat::kCsv) data << csv_row(outcome.results.back()) << '\n' << std::flush;
  }
  if (spec.format == OutputFormat::kJson) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : outcome.results) rows.push_back(to_json(r));
    data << rows.dump(2) << '\n' << std::flush;
  }
  return outcome;
}

int cmd_stats(std::size_t d, std::size_t n_pairs, std::uint64_t seed,
              const std::string& out, OutputFormat format, std::ostream& os,
              std::ostream& err) {
  try {
    const DotStatistics stats = dot_statistics(d, n_pairs, seed);
    const ChiSquareResult chi = chi_square_binomial(stats.histogram);
    auto file = open_output(out);
    std::ostream& sink = file ? *file : os;
    if (format == OutputFormat::kJson) {
      nlohmann::json j = to_json(stats);
      j["seed"] = seed;
      j["chi_square"] = {{"statistic", chi.statistic},
                         {"degrees_of_freedom", chi.degrees_of_freedom},
                         {"p_value", chi.p_value}};
      sink << j.dump(2) << '\n';
    } else {
      sink << "d,n_pairs,seed,sample_mean,sample_variance,max_abs_offdiag,chi_square,"
              "chi_square_df,chi_square_p\n"
           << d << ',' << n_pairs << ',' << seed << ',' << format_number(stats.sample_mean) << ','
           << format_number(stats.sample_variance) << ',' << format_number(stats.max_abs_offdiag)
           << ',' << format_number(chi.statistic) << ',' << chi.degrees_of_freedom << ','
           << format_number(chi.p_value) << '\n';
    }
    sink.flush();
    if (!sink) throw std::runtime_error("failed writing output");
    return kSuccess;
  } catch (const std::exception& e) {
    err << "stats: " << e.what() << '\n';
    return kInvalidArguments;
  }
}

int cmd_capacity(const SweepSpec& spec, std::ostream& os, std::ostream& err) {
  const std::string started = utc_now();
  SweepOutcome outcome;
  try {
    expand(spec);
    auto file = open_output(spec.out);
    InterruptGuard guard;
    outcome = run_sweep(spec, file ? *file : os);
  } catch (const std::exception& e) {
    err << "capacity: " << e.what() << '\n';
    return kInvalidArguments;
  }

  if (spec.out.empty()) {
    for (const auto& w : outcome.warnings) err << "warning: " << w << '\n';
  } else {
    std::ofstream log(spec.out + ".log", std::ios::trunc);
    for (const auto& w : outcome.warnings) log << "warning: " << w << '\n';

    nlohmann::json meta = {{"started_at", started},
                           {"finished_at", utc_now()},
                           {"cells_completed", outcome.results.size()},
                           {"cells_skipped", outcome.warnings.size()},
                           {"interrupted", outcome.interrupted}};
    nlohmann::json times = nlohmann::json::array();
    for (const auto& r : outcome.results) {
      times.push_back({{"cell", describe(r.config)}, {"wall_time_seconds", r.wall_time_seconds}});
    }
    meta["cells"] = std::move(times);
    std::ofstream(spec.out + ".meta.json", std::ios::trunc) << meta.dump(2) << '\n';
  }
  if (outcome.interrupted) {
    err << "capacity: interrupted; completed rows were flushed\n";
    return kInterrupted;
  }
  return kSuccess;
}

int cmd_verify(std::uint64_t seed, bool corrupt_binding, std::ostream& os,
               std::ostream& err) {
  const auto results = run_invariant_suite({seed, corrupt_binding});
  print_report(results, os);
  std::string failed;
  for (const auto& r : results) {
    if (!r.passed) failed += (failed.empty() ? "" : ", ") + r.name;
  }
  if (failed.empty()) return kSuccess;
  err << "failed checks: " << failed << '\n';
  return kCheckFailure;
}

int cmd_rank(std::size_t d, std::size_t n, Backend backend, CodebookKind kind,
             std::uint64_t seed, OutputFormat format, std::ostream& os,
             std::ostream& err) {
  try {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    const Codebook cb = generate(kind, d, d, seed);
    const std::size_t rank = detection_rank(cb, backend, n);
    const std::size_t reference = BoundRep::storage_size(Backend::kTensor, n, d);
    if (format == OutputFormat::kJson) {
      os << nlohmann::json{{"d", d},
                           {"n", n},
                           {"backend", to_string(backend)},
                           {"kind", to_string(kind)},
                           {"seed", seed},
                           {"rank", rank},
                           {"reference", reference}}
                .dump(2)
         << '\n';
    } else {
      os << "rank: " << rank << "\nreference: " << reference << '\n';
    }
    return kSuccess;
  } catch (const std::exception& e) {
    err << "rank: " << e.what() << '\n';
    return kInvalidArguments;
  }
}

int run(const std::vector<std::string>& args, std::ostream& os, std::ostream& err) {
  CLI::App app{"Tensor-product and Hadamard binding experiments", "vsa"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";

  std::size_t stats_d = 100;
  std::size_t stats_pairs = 100000;
  auto* stats = app.add_subcommand("stats", "Dot-product statistics of Rademacher codes");
  stats->add_option("--d", stats_d, "Code dimension")->capture_default_str();
  stats->add_option("--pairs", stats_pairs, "Number of sampled pairs")->capture_default_str();

  SweepSpec spec;
  std::vector<std::string> backend_names{"hadamard"};
  double hadamard_c = kDefaultHadamardC;
  auto* capacity = app.add_subcommand("capacity", "Monte Carlo capacity sweep");
  capacity->add_option("--backend", backend_names, "hadamard,tensor")->delimiter(',');
  capacity->add_option("--d", spec.d, "Dimensions")->delimiter(',');
  capacity->add_option("--n", spec.n, "Binding orders")->delimiter(',');
  capacity->add_option("--k", spec.k, "Stored tuple counts")->delimiter(',');
  capacity->add_option("--m", spec.m, "Spurious candidate counts")->delimiter(',');
  capacity->add_option("--trials", spec.trials, "Trials per cell")->capture_default_str();
  capacity->add_option("--hadamard-c", hadamard_c, "Constant C of the Hadamard bound");

  bool corrupt = false;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_flag("--corrupt-binding", corrupt, "Test hook: break binding multilinearity");

  std::size_t rank_d = 3;
  std::size_t rank_n = 2;
  std::string rank_backend = "tensor";
  std::string rank_kind = "orthonormal";
  auto* rank = app.add_subcommand("rank", "Numerical rank of the detection functionals");
  rank->add_option("--d", rank_d, "Code dimension (codebook size m = d)")->capture_default_str();
  rank->add_option("--n", rank_n, "Binding order")->capture_default_str();
  rank->add_option("--backend", rank_backend, "tensor|hadamard|convolution")
      ->check(CLI::IsMember({"tensor", "hadamard", "convolution"}));
  rank->add_option("--kind", rank_kind, "orthonormal|rademacher")
      ->check(CLI::IsMember({"orthonormal", "rademacher"}));

  for (auto* sub : {stats, capacity, verify, rank}) {
    sub->add_option("--seed", seed, "Random seed (u64)");
    sub->add_option("--out", out, "Output path (default: standard output)");
    sub->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    os << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalidArguments;
  }

  try {
    if (*stats) {
      const bool json = format == "json" || !stats->count("--format");
      return cmd_stats(stats_d, stats_pairs, seed, out, json ? OutputFormat::kJson : OutputFormat::kCsv,
                       os, err);
    }
    if (*capacity) {
      spec.backends.clear();
      for (const auto& b : backend_names) spec.backends.push_back(parse_backend(b));
      spec.seed = seed;
      spec.out = out;
      spec.format = parse_format(format);
      spec.hadamard_c = hadamard_c;
      return cmd_capacity(spec, os, err);
    }
    if (*verify) {
      if (!out.empty()) {
        std::ofstream f(out, std::ios::trunc);
        if (!f) throw std::invalid_argument("cannot open output file: " + out);
        return cmd_verify(seed, corrupt, f, err);
      }
      return cmd_verify(seed, corrupt, os, err);
    }
    if (*rank) {
      const OutputFormat f = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
      if (!out.empty()) {
        std::ofstream file(out, std::ios::trunc);
        if (!file) throw std::invalid_argument("cannot open output file: " + out);
        return cmd_rank(rank_d, rank_n, parse_backend(rank_backend), parse_codebook_kind(rank_kind),
                        seed, f, file, err);
      }
      return cmd_rank(rank_d, rank_n, parse_backend(rank_backend), parse_codebook_kind(rank_kind),
                      seed, f, os, err);
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kInvalidArguments;
  }
  return kInvalidArguments;
}

}  // namespace vsa::cli
