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
#include <span>
#include <string_view>
#include <vector>

#include "vsa/codebook.hpp"

namespace vsa {

enum class Backend { kTensor, kHadamard, kConvolution };

std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view name);

/// A bound representation of an n-tuple.
///
/// Tensor reps hold d^n values stored row-major (last index fastest).
/// Hadamard and convolution reps hold d values and carry n as metadata.
class BoundRep {
 public:
  BoundRep(Backend backend, std::size_t order, std::size_t dim,
           std::vector<double> values);

  static BoundRep zeros(Backend backend, std::size_t order, std::size_t dim);

  /// Number of values a rep with this shape must hold.
  static std::size_t storage_size(Backend backend, std::size_t order, std::size_t dim);

  Backend backend() const { return backend_; }
  std::size_t order() const { return order_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool same_shape(const BoundRep& other) const {
    return backend_ == other.backend_ && order_ == other.order_ && dim_ == other.dim_;
  }

  /// this += alpha * other. Shapes must match.
  BoundRep& add_scaled(double alpha, const BoundRep& other);
  BoundRep& scale(double alpha);

  std::span<double> mutable_values() { return values_; }

  /// Values as an embedding; valid for order-1 tensors and for every
  /// Hadamard/convolution rep.
  Embedding to_embedding() const;

  double norm() const;

  friend bool operator==(const BoundRep&, const BoundRep&) = default;

 private:
  Backend backend_;
  std::size_t order_;
  std::size_t dim_;
  std::vector<double> values_;
};

/// Ordered indices of an n-tuple of codebook entries.
struct TupleIndex {
  std::vector<std::size_t> indices;

  std::size_t order() const { return indices.size(); }
  friend bool operator==(const TupleIndex&, const TupleIndex&) = default;
};

/// Throws unless every index is < cb.size() and the tuple is non-empty.
void validate(const TupleIndex& tuple, const Codebook& cb);

// Tensor product representation.

/// Order-n outer product; values[i1..in] = prod_j vs[j][i_j].
BoundRep tensor_bind(std::span<const Embedding> vs);
/// Contracts u against the first mode. Requires order >= 2.
BoundRep tensor_unbind_left(const Embedding& u, const BoundRep& t);
/// Contracts u against the last mode. Requires order >= 2.
BoundRep tensor_unbind_right(const BoundRep& t, const Embedding& u);
/// Full contraction of t with every query embedding.
double tensor_detect(std::span<const Embedding> vs, const BoundRep& t);

// Iterated Hadamard representation.

BoundRep hadamard_bind(std::span<const Embedding> vs);
/// Entrywise product u * h, order n-1. Exact inverse of binding for +1/-1
/// codes only. Requires order >= 2.
BoundRep hadamard_unbind(const Embedding& u, const BoundRep& h);
/// Unbinds every query embedding and sums the coordinates (unscaled).
double hadamard_detect(std::span<const Embedding> vs, const BoundRep& h);

// Iterated circular convolution representation.

/// vs[0] (*) (vs[1] (*) (... (*) vs[n-1])), (a (*) b)[k] = sum_i a[i] b[k-i mod d].
BoundRep conv_bind(std::span<const Embedding> vs);
/// Circular correlation, out[k] = sum_i u[i] c[i+k mod d]. Requires order >= 2.
BoundRep conv_unbind(const Embedding& u, const BoundRep& c);
/// <conv_bind(vs), c>.
double conv_detect(std::span<const Embedding> vs, const BoundRep& c);

/// Main diagonal T[i,i,...,i] of a tensor rep, tagged Hadamard. This is the
/// linear map that takes tensor_bind(vs) to hadamard_bind(vs).
BoundRep hadamard_from_tensor(const BoundRep& t);

// Backend dispatch. Every detection functional equals <bind(vs), rep>.

BoundRep bind(Backend backend, std::span<const Embedding> vs);
BoundRep unbind_left(const Embedding& u, const BoundRep& rep);
BoundRep unbind_right(const BoundRep& rep, const Embedding& u);
double detect(std::span<const Embedding> vs, const BoundRep& rep);

BoundRep bind(Backend backend, const Codebook& cb, const TupleIndex& tuple);
double detect(const Codebook& cb, const TupleIndex& tuple, const BoundRep& rep);

/// detect(cb, candidates[c], rep) for every candidate. Tensor reps are
/// contracted for all candidates in a single pass over the first mode.
std::vector<double> detect_all(const Codebook& cb,
                               std::span<const TupleIndex> candidates,
                               const BoundRep& rep);

/// acc += weight * bind(acc.backend(), tuple), without materializing the
/// bound tuple for the tensor and Hadamard backends.
void accumulate_bind(BoundRep& acc, double weight, const Codebook& cb,
                     const TupleIndex& tuple);

/// Factor that maps raw detection scores to unit scale: 1 for tensor reps
/// over orthonormal codes, d^-n otherwise (one 1/d per unbinding step or
/// per Rademacher dot product).
double score_scale(Backend backend, CodebookKind kind, std::size_t d, std::size_t n);

/// Error left after removing the projection term from a left unbind.
///
/// Writes u = a v + u_perp with a = <u,v>/<v,v>; returns
/// || s * unbind_left(u, bind(v, w)) - a w ||_2, where s = 1/<v,v> for
/// tensor and convolution reps and s = 1 for Hadamard reps (so that
/// unbinding v itself recovers w up to noise). Zero for an errorless unbind.
double spurious_unbind_residual(Backend backend, const Embedding& u,
                                const Embedding& v, const Embedding& w);

/// Largest bound-space size detection_rank accepts (rows and columns).
inline constexpr std::size_t kDetectionRankGuard = 4096;

/// Numerical rank of the detection functionals D_s, one per n-tuple s of
/// codebook entries, written in coordinates of the bound space. Singular
/// values at or below 1e-8 times the largest are treated as zero.
std::size_t detection_rank(const Codebook& cb, Backend backend, std::size_t n);

/// Rows of the matrix whose rank detection_rank reports, tuple-major with
/// the last tuple slot fastest.
std::vector<std::vector<double>> detection_functionals(const Codebook& cb,
                                                       Backend backend,
                                                       std::size_t n);

}  // namespace vsa
