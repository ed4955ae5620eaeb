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

#include "vsa/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "vsa/rng.hpp"

namespace vsa {
namespace {

constexpr double kUnitNormTol = 1e-12;
constexpr double kOrthogonalTol = 1e-10;

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void check_rademacher(const Embedding& e) {
  for (double x : e.values()) {
    if (x != 1.0 && x != -1.0) {
      throw std::invalid_argument("Rademacher embedding entries must be +1 or -1");
    }
  }
}

void check_orthonormal(std::span<const Embedding> es) {
  if (!es.empty() && es.size() > es.front().dim()) {
    throw std::invalid_argument("orthonormal codebook requires m <= d");
  }
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (std::abs(norm2(es[i].values()) - 1.0) > kUnitNormTol) {
      throw std::invalid_argument("orthonormal embedding must have unit norm");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(dot(es[i].values(), es[j].values())) > kOrthogonalTol) {
        throw std::invalid_argument("orthonormal embeddings must be pairwise orthogonal");
      }
    }
  }
}

// Two passes of modified Gram-Schmidt over the columns of a Gaussian draw.
std::vector<Embedding> orthonormal_columns(std::size_t d, std::size_t m,
                                           std::uint64_t seed) {
  Rng rng(seed, StreamPurpose::kOrthonormalCodebook);
  std::vector<std::vector<double>> cols(m, std::vector<double>(d));
  for (auto& col : cols) {
    for (double& x : col) x = rng.normal();
  }
  for (std::size_t j = 0; j < m; ++j) {
    auto& q = cols[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double r = dot(cols[i], q);
        for (std::size_t t = 0; t < d; ++t) q[t] -= r * cols[i][t];
      }
    }
    const double nrm = norm2(q);
    if (!(nrm > 0.0)) {
      throw std::runtime_error("degenerate Gaussian draw during orthonormalization");
    }
    for (double& x : q) x /= nrm;
  }
  std::vector<Embedding> out;
  out.reserve(m);
  for (auto& col : cols) out.emplace_back(std::move(col));
  return out;
}

}  // namespace

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("embedding dimension must be >= 1");
  for (double x : values_) {
    if (!std::isfinite(x)) throw std::invalid_argument("embedding entries must be finite");
  }
}

Embedding combine(double a, const Embedding& x, double b, const Embedding& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("embedding dimension mismatch");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return Embedding(std::move(out));
}

Embedding basis_vector(std::size_t d, std::size_t i) {
  if (i >= d) throw std::out_of_range("basis index out of range");
  std::vector<double> v(d, 0.0);
  v[i] = 1.0;
  return Embedding(std::move(v));
}

std::string_view to_string(CodebookKind kind) {
  switch (kind) {
    case CodebookKind::kRademacher:
      return "rademacher";
    case CodebookKind::kOrthonormal:
      return "orthonormal";
  }
  return "unknown";
}

CodebookKind parse_codebook_kind(std::string_view name) {
  if (name == "rademacher") return CodebookKind::kRademacher;
  if (name == "orthonormal") return CodebookKind::kOrthonormal;
  throw std::invalid_argument("unknown codebook kind: " + std::string(name));
}

Codebook::Codebook(CodebookKind kind, std::vector<Embedding> embeddings,
                   std::uint64_t seed)
    : kind_(kind), seed_(seed), embeddings_(std::move(embeddings)) {
  if (embeddings_.empty()) throw std::invalid_argument("codebook must not be empty");
  dim_ = embeddings_.front().dim();
  for (const auto& e : embeddings_) {
    if (e.dim() != dim_) throw std::invalid_argument("codebook embeddings differ in dimension");
    if (e.dim() == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  }
  if (kind_ == CodebookKind::kRademacher) {
    for (const auto& e : embeddings_) check_rademacher(e);
  } else {
    check_orthonormal(embeddings_);
  }
}

const Embedding& Codebook::at(std::size_t i) const {
  if (i >= embeddings_.size()) throw std::out_of_range("codebook index out of range");
  return embeddings_[i];
}

Codebook generate(CodebookKind kind, std::size_t d, std::size_t m,
                  std::uint64_t seed, GenerateOptions options) {
  if (d == 0) throw std::invalid_argument("codebook dimension d must be >= 1");
  if (m == 0) throw std::invalid_argument("codebook size m must be >= 1");
  if (kind == CodebookKind::kOrthonormal && m > d) {
    throw std::invalid_argument("orthonormal codebook requires m <= d");
  }

  Codebook cb;
  cb.kind_ = kind;
  cb.seed_ = seed;
  cb.dim_ = d;
  cb.generated_ = true;
  cb.embeddings_.reserve(m);
  if (kind == CodebookKind::kRademacher) {
    Rng rng(seed, StreamPurpose::kRademacherCodebook);
    std::vector<double> buf(d);
    for (std::size_t i = 0; i < m; ++i) {
      rng.fill_signs(buf);
      cb.embeddings_.emplace_back(buf);
    }
  } else if (options.canonical_basis) {
    cb.canonical_ = true;
    for (std::size_t i = 0; i < m; ++i) cb.embeddings_.push_back(basis_vector(d, i));
  } else {
    cb.embeddings_ = orthonormal_columns(d, m, seed);
  }
  return cb;
}

nlohmann::json to_json(const Codebook& cb) {
  if (!cb.regenerable()) {
    throw std::logic_error("only generated codebooks can be serialized");
  }
  nlohmann::json j = {{"kind", to_string(cb.kind())},
                      {"d", cb.dim()},
                      {"m", cb.size()},
                      {"seed", cb.seed()}};
  if (cb.canonical_basis()) j["canonical"] = true;
  return j;
}

Codebook codebook_from_json(const nlohmann::json& j) {
  GenerateOptions options;
  options.canonical_basis = j.value("canonical", false);
  return generate(parse_codebook_kind(j.at("kind").get<std::string>()),
                  j.at("d").get<std::size_t>(), j.at("m").get<std::size_t>(),
                  j.at("seed").get<std::uint64_t>(), options);
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("dimension mismatch in dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double normalized_dot(const Embedding& u, const Embedding& v, bool scaled) {
  const double s = dot(u.values(), v.values());
  return scaled ? s / static_cast<double>(u.dim()) : s;
}

DotStatistics dot_statistics(std::size_t d, std::size_t n_pairs,
                             std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("d must be >= 1");
  if (n_pairs == 0) throw std::invalid_argument("n_pairs must be >= 1");

  DotStatistics stats;
  stats.d = d;
  stats.n_pairs = n_pairs;
  stats.histogram.assign(d + 1, 0);

  Rng rng(seed, StreamPurpose::kDotPairs);
  std::vector<double> u(d), v(d);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t p = 0; p < n_pairs; ++p) {
    rng.fill_signs(u);
    rng.fill_signs(v);
    // <u,v> = agreements - disagreements, so d(Z+1)/2 counts agreements.
    const double raw = dot(u, v);
    const auto agreements = static_cast<std::size_t>((raw + static_cast<double>(d)) / 2.0);
    ++stats.histogram[agreements];

    const double z = raw / static_cast<double>(d);
    const double delta = z - mean;
    mean += delta / static_cast<double>(p + 1);
    m2 += delta * (z - mean);
    stats.max_abs_offdiag = std::max(stats.max_abs_offdiag, std::abs(z));
  }
  stats.sample_mean = mean;
  stats.sample_variance = n_pairs > 1 ? m2 / static_cast<double>(n_pairs - 1) : 0.0;
  return stats;
}

double max_coherence(const Codebook& cb) {
  if (cb.size() < 2) throw std::invalid_argument("coherence needs at least two embeddings");
  const bool scaled = cb.kind() == CodebookKind::kRademacher;
  double best = 0.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    for (std::size_t j = i + 1; j < cb.size(); ++j) {
      best = std::max(best, std::abs(normalized_dot(cb[i], cb[j], scaled)));
    }
  }
  return best;
}

double binomial_pmf(std::size_t d, std::size_t j, double p) {
  if (j > d) return 0.0;
  const double n = static_cast<double>(d);
  const double k = static_cast<double>(j);
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

ChiSquareResult chi_square_binomial(std::span<const std::uint64_t> histogram,
                                    double min_expected) {
  if (histogram.empty()) throw std::invalid_argument("histogram must not be empty");
  const std::size_t d = histogram.size() - 1;
  double total = 0.0;
  for (auto c : histogram) total += static_cast<double>(c);
  if (total <= 0.0) throw std::invalid_argument("histogram has no samples");

  std::vector<double> observed;
  std::vector<double> expected;
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  for (std::size_t j = 0; j <= d; ++j) {
    obs_acc += static_cast<double>(histogram[j]);
    exp_acc += total * binomial_pmf(d, j, 0.5);
    if (exp_acc >= min_expected) {
      observed.push_back(obs_acc);
      expected.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (expected.empty()) {
      observed.push_back(obs_acc);
      expected.push_back(exp_acc);
    } else {
      observed.back() += obs_acc;
      expected.back() += exp_acc;
    }
  }

  ChiSquareResult result;
  result.bins = expected.size();
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    result.statistic += diff * diff / expected[i];
  }
  result.degrees_of_freedom = result.bins > 1 ? result.bins - 1 : 0;
  if (result.degrees_of_freedom == 0) {
    result.p_value = 1.0;
  } else {
    const boost::math::chi_squared dist(static_cast<double>(result.degrees_of_freedom));
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  }
  return result;
}

nlohmann::json to_json(const DotStatistics& s) {
  return {{"d", s.d},
          {"n_pairs", s.n_pairs},
          {"sample_mean", s.sample_mean},
          {"sample_variance", s.sample_variance},
          {"max_abs_offdiag", s.max_abs_offdiag},
          {"histogram", s.histogram}};
}

}  // namespace vsa
