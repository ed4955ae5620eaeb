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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vsa {

/// Dense real code vector of dimension d. Entries are always finite.
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::vector<double> values);
  Embedding(std::initializer_list<double> values)
      : Embedding(std::vector<double>(values)) {}

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<double> values_;
};

/// Linear combination a*x + b*y of two embeddings of equal dimension.
Embedding combine(double a, const Embedding& x, double b, const Embedding& y);

/// Unit basis vector e_i of dimension d.
Embedding basis_vector(std::size_t d, std::size_t i);

enum class CodebookKind { kRademacher, kOrthonormal };

std::string_view to_string(CodebookKind kind);
CodebookKind parse_codebook_kind(std::string_view name);

struct GenerateOptions {
  /// Orthonormal kind only: use the first m standard basis vectors instead of
  /// an orthonormalized Gaussian draw.
  bool canonical_basis = false;
};

/// An ordered, immutable set of m embeddings of dimension d.
///
/// Rademacher codebooks hold raw +1/-1 entries; the 1/d normalization is
/// applied by normalized_dot and by score scaling, never stored.
class Codebook {
 public:
  /// Wraps explicit embeddings. Checks the invariants of `kind`; the seed is
  /// recorded but the codebook cannot be serialized.
  Codebook(CodebookKind kind, std::vector<Embedding> embeddings,
           std::uint64_t seed = 0);

  CodebookKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return embeddings_.size(); }
  bool canonical_basis() const { return canonical_; }
  bool regenerable() const { return generated_; }

  const Embedding& operator[](std::size_t i) const { return embeddings_[i]; }
  const Embedding& at(std::size_t i) const;
  std::span<const Embedding> embeddings() const { return embeddings_; }

  friend bool operator==(const Codebook& a, const Codebook& b) {
    return a.kind_ == b.kind_ && a.embeddings_ == b.embeddings_;
  }

 private:
  friend Codebook generate(CodebookKind, std::size_t, std::size_t,
                           std::uint64_t, GenerateOptions);
  Codebook() = default;

  CodebookKind kind_ = CodebookKind::kRademacher;
  std::uint64_t seed_ = 0;
  std::size_t dim_ = 0;
  bool canonical_ = false;
  bool generated_ = false;
  std::vector<Embedding> embeddings_;
};

/// Deterministic codebook of m embeddings of dimension d.
///
/// Rademacher entries are drawn from the (seed, kRademacherCodebook) stream.
/// Orthonormal codebooks orthonormalize a standard Gaussian d x m draw with
/// two passes of modified Gram-Schmidt. Throws std::invalid_argument for
/// d == 0, m == 0, or m > d with the orthonormal kind.
Codebook generate(CodebookKind kind, std::size_t d, std::size_t m,
                  std::uint64_t seed, GenerateOptions options = {});

/// {kind, d, m, seed} (plus "canonical": true when set). Throws
/// std::logic_error for codebooks built from explicit embeddings.
nlohmann::json to_json(const Codebook& cb);
Codebook codebook_from_json(const nlohmann::json& j);

/// <u,v>/d when `scaled`, else the plain inner product.
double normalized_dot(const Embedding& u, const Embedding& v, bool scaled);

double dot(std::span<const double> u, std::span<const double> v);

struct DotStatistics {
  std::size_t d = 0;
  std::size_t n_pairs = 0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double max_abs_offdiag = 0.0;
  /// counts[j] = number of pairs with d(Z+1)/2 == j, j in [0, d].
  std::vector<std::uint64_t> histogram;
};

/// Samples n_pairs independent Rademacher pairs and summarizes Z = <u,v>/d.
DotStatistics dot_statistics(std::size_t d, std::size_t n_pairs,
                             std::uint64_t seed);

/// Largest |normalized dot| over distinct pairs; Rademacher codebooks are
/// scaled by 1/d, orthonormal ones are not. Requires m >= 2.
double max_coherence(const Codebook& cb);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 0.0;
  std::size_t bins = 0;
};

/// Binomial(d, p) probability mass at j.
double binomial_pmf(std::size_t d, std::size_t j, double p);

/// Pearson goodness-of-fit of `histogram` against Binomial(d, 1/2), where
/// d = histogram.size() - 1. Adjacent cells are pooled left to right until
/// every pooled expected count is at least `min_expected`.
ChiSquareResult chi_square_binomial(std::span<const std::uint64_t> histogram,
                                    double min_expected = 5.0);

nlohmann::json to_json(const DotStatistics& s);

}  // namespace vsa
