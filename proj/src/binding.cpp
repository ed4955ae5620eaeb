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

#include "vsa/binding.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vsa {
namespace {

constexpr double kRankRelTol = 1e-8;

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) {
      throw std::length_error("tensor size overflows");
    }
    out *= base;
  }
  return out;
}

// The kernels below read the tuple through `at(j)` so that codebook tuples
// can be bound without copying embeddings.

template <typename At>
std::size_t common_dim(std::size_t n, At at) {
  if (n == 0) throw std::invalid_argument("binding needs at least one embedding");
  const std::size_t d = at(0).dim();
  if (d == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  for (std::size_t j = 1; j < n; ++j) {
    if (at(j).dim() != d) throw std::invalid_argument("embedding dimension mismatch");
  }
  return d;
}

template <typename At>
BoundRep tensor_bind_impl(std::size_t n, At at) {
  const std::size_t d = common_dim(n, at);
  const std::size_t total = checked_pow(d, n);
  std::vector<double> values(total);
  std::size_t len = d;
  const auto first = at(0).values();
  std::copy(first.begin(), first.end(), values.begin());
  for (std::size_t j = 1; j < n; ++j) {
    const auto v = at(j).values();
    // Expand in place from the back so that no source entry is overwritten
    // before it is read.
    for (std::size_t r = len; r-- > 0;) {
      const double a = values[r];
      double* out = values.data() + r * d;
      for (std::size_t i = 0; i < d; ++i) out[i] = a * v[i];
    }
    len *= d;
  }
  return BoundRep(Backend::kTensor, n, d, std::move(values));
}

template <typename At>
BoundRep hadamard_bind_impl(std::size_t n, At at) {
  const std::size_t d = common_dim(n, at);
  const auto first = at(0).values();
  std::vector<double> values(first.begin(), first.end());
  for (std::size_t j = 1; j < n; ++j) {
    const auto v = at(j).values();
    for (std::size_t i = 0; i < d; ++i) values[i] *= v[i];
  }
  return BoundRep(Backend::kHadamard, n, d, std::move(values));
}

void circular_convolve(std::span<const double> a, std::span<const double> b,
                       std::span<double> out) {
  const std::size_t d = a.size();
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i <= k; ++i) s += a[i] * b[k - i];
    for (std::size_t i = k + 1; i < d; ++i) s += a[i] * b[k + d - i];
    out[k] = s;
  }
}

template <typename At>
BoundRep conv_bind_impl(std::size_t n, At at) {
  const std::size_t d = common_dim(n, at);
  const auto last = at(n - 1).values();
  std::vector<double> acc(last.begin(), last.end());
  std::vector<double> tmp(d);
  for (std::size_t j = n - 1; j-- > 0;) {
    circular_convolve(at(j).values(), acc, tmp);
    acc.swap(tmp);
  }
  return BoundRep(Backend::kConvolution, n, d, std::move(acc));
}

template <typename At>
void check_query(std::size_t n, At at, const BoundRep& rep) {
  const std::size_t d = common_dim(n, at);
  if (n != rep.order()) throw std::invalid_argument("query order does not match representation order");
  if (d != rep.dim()) throw std::invalid_argument("query dimension does not match representation");
}

template <typename At>
double tensor_detect_impl(std::size_t n, At at, const BoundRep& t) {
  if (t.backend() != Backend::kTensor) throw std::invalid_argument("expected a tensor representation");
  check_query(n, at, t);
  const std::size_t d = t.dim();
  // Contract the first mode repeatedly; each pass shrinks the data by d.
  std::span<const double> src = t.values();
  std::vector<double> work;
  std::vector<double> next;
  for (std::size_t j = 0; j < n; ++j) {
    const auto u = at(j).values();
    const std::size_t stride = src.size() / d;
    next.assign(stride, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      const double ui = u[i];
      if (ui == 0.0) continue;
      const double* row = src.data() + i * stride;
      for (std::size_t r = 0; r < stride; ++r) next[r] += ui * row[r];
    }
    work.swap(next);
    src = work;
  }
  return work[0];
}

template <typename At>
double hadamard_detect_impl(std::size_t n, At at, const BoundRep& h) {
  if (h.backend() != Backend::kHadamard) throw std::invalid_argument("expected a Hadamard representation");
  check_query(n, at, h);
  double total = 0.0;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    double p = h[i];
    for (std::size_t j = 0; j < n; ++j) p *= at(j)[i];
    total += p;
  }
  return total;
}

template <typename At>
double conv_detect_impl(std::size_t n, At at, const BoundRep& c) {
  if (c.backend() != Backend::kConvolution) throw std::invalid_argument("expected a convolution representation");
  check_query(n, at, c);
  return dot(conv_bind_impl(n, at).values(), c.values());
}

template <typename At>
BoundRep bind_impl(Backend backend, std::size_t n, At at) {
  switch (backend) {
    case Backend::kTensor:
      return tensor_bind_impl(n, at);
    case Backend::kHadamard:
      return hadamard_bind_impl(n, at);
    case Backend::kConvolution:
      return conv_bind_impl(n, at);
  }
  throw std::invalid_argument("unknown backend");
}

template <typename At>
double detect_impl(std::size_t n, At at, const BoundRep& rep) {
  switch (rep.backend()) {
    case Backend::kTensor:
      return tensor_detect_impl(n, at, rep);
    case Backend::kHadamard:
      return hadamard_detect_impl(n, at, rep);
    case Backend::kConvolution:
      return conv_detect_impl(n, at, rep);
  }
  throw std::invalid_argument("unknown backend");
}

auto span_accessor(std::span<const Embedding> vs) {
  return [vs](std::size_t j) -> const Embedding& { return vs[j]; };
}

auto tuple_accessor(const Codebook& cb, const TupleIndex& tuple) {
  validate(tuple, cb);
  return [&cb, &tuple](std::size_t j) -> const Embedding& { return cb[tuple.indices[j]]; };
}

void check_unbind(const Embedding& u, const BoundRep& rep, Backend expected) {
  if (rep.backend() != expected) throw std::invalid_argument("unbind applied to the wrong backend");
  if (rep.order() < 2) throw std::invalid_argument("unbinding requires order >= 2; use detect for order 1");
  if (u.dim() != rep.dim()) throw std::invalid_argument("unbind dimension mismatch");
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::kTensor:
      return "tensor";
    case Backend::kHadamard:
      return "hadamard";
    case Backend::kConvolution:
      return "convolution";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "tensor") return Backend::kTensor;
  if (name == "hadamard") return Backend::kHadamard;
  if (name == "convolution") return Backend::kConvolution;
  throw std::invalid_argument("unknown backend: " + std::string(name));
}

std::size_t BoundRep::storage_size(Backend backend, std::size_t order, std::size_t dim) {
  return backend == Backend::kTensor ? checked_pow(dim, order) : dim;
}

BoundRep::BoundRep(Backend backend, std::size_t order, std::size_t dim,
                   std::vector<double> values)
    : backend_(backend), order_(order), dim_(dim), values_(std::move(values)) {
  if (order_ < 1) throw std::invalid_argument("representation order must be >= 1");
  if (dim_ < 1) throw std::invalid_argument("representation dimension must be >= 1");
  if (values_.size() != storage_size(backend_, order_, dim_)) {
    throw std::invalid_argument("representation has the wrong number of values");
  }
}

BoundRep BoundRep::zeros(Backend backend, std::size_t order, std::size_t dim) {
  return BoundRep(backend, order, dim,
                  std::vector<double>(storage_size(backend, order, dim), 0.0));
}

BoundRep& BoundRep::add_scaled(double alpha, const BoundRep& other) {
  if (!same_shape(other)) throw std::invalid_argument("cannot add representations of different shape");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += alpha * other.values_[i];
  return *this;
}

BoundRep& BoundRep::scale(double alpha) {
  for (double& x : values_) x *= alpha;
  return *this;
}

Embedding BoundRep::to_embedding() const {
  if (backend_ == Backend::kTensor && order_ != 1) {
    throw std::invalid_argument("only order-1 tensors convert to embeddings");
  }
  return Embedding(values_);
}

double BoundRep::norm() const { return std::sqrt(dot(values_, values_)); }

void validate(const TupleIndex& tuple, const Codebook& cb) {
  if (tuple.indices.empty()) throw std::invalid_argument("tuple must not be empty");
  for (std::size_t i : tuple.indices) {
    if (i >= cb.size()) throw std::out_of_range("tuple index outside the codebook");
  }
}

BoundRep tensor_bind(std::span<const Embedding> vs) {
  return tensor_bind_impl(vs.size(), span_accessor(vs));
}

BoundRep tensor_unbind_left(const Embedding& u, const BoundRep& t) {
  check_unbind(u, t, Backend::kTensor);
  const std::size_t d = t.dim();
  const std::size_t stride = t.values().size() / d;
  std::vector<double> out(stride, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double ui = u[i];
    const double* row = t.values().data() + i * stride;
    for (std::size_t r = 0; r < stride; ++r) out[r] += ui * row[r];
  }
  return BoundRep(Backend::kTensor, t.order() - 1, d, std::move(out));
}

BoundRep tensor_unbind_right(const BoundRep& t, const Embedding& u) {
  check_unbind(u, t, Backend::kTensor);
  const std::size_t d = t.dim();
  const std::size_t rows = t.values().size() / d;
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot(t.values().subspan(r * d, d), u.values());
  }
  return BoundRep(Backend::kTensor, t.order() - 1, d, std::move(out));
}

double tensor_detect(std::span<const Embedding> vs, const BoundRep& t) {
  return tensor_detect_impl(vs.size(), span_accessor(vs), t);
}

BoundRep hadamard_bind(std::span<const Embedding> vs) {
  return hadamard_bind_impl(vs.size(), span_accessor(vs));
}

BoundRep hadamard_unbind(const Embedding& u, const BoundRep& h) {
  check_unbind(u, h, Backend::kHadamard);
  std::vector<double> out(h.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] * h[i];
  return BoundRep(Backend::kHadamard, h.order() - 1, h.dim(), std::move(out));
}

double hadamard_detect(std::span<const Embedding> vs, const BoundRep& h) {
  return hadamard_detect_impl(vs.size(), span_accessor(vs), h);
}

BoundRep conv_bind(std::span<const Embedding> vs) {
  return conv_bind_impl(vs.size(), span_accessor(vs));
}

BoundRep conv_unbind(const Embedding& u, const BoundRep& c) {
  check_unbind(u, c, Backend::kConvolution);
  const std::size_t d = c.dim();
  std::vector<double> out(d);
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += u[i] * c[(i + k) % d];
    out[k] = s;
  }
  return BoundRep(Backend::kConvolution, c.order() - 1, d, std::move(out));
}

double conv_detect(std::span<const Embedding> vs, const BoundRep& c) {
  return conv_detect_impl(vs.size(), span_accessor(vs), c);
}

BoundRep hadamard_from_tensor(const BoundRep& t) {
  if (t.backend() != Backend::kTensor) throw std::invalid_argument("hadamard_from_tensor needs a tensor representation");
  const std::size_t d = t.dim();
  // Flat offset of (i, i, ..., i) is i * (1 + d + ... + d^(n-1)).
  std::size_t step = 0;
  std::size_t power = 1;
  for (std::size_t j = 0; j < t.order(); ++j) {
    step += power;
    power *= d;
  }
  std::vector<double> diag(d);
  for (std::size_t i = 0; i < d; ++i) diag[i] = t[i * step];
  return BoundRep(Backend::kHadamard, t.order(), d, std::move(diag));
}

BoundRep bind(Backend backend, std::span<const Embedding> vs) {
  return bind_impl(backend, vs.size(), span_accessor(vs));
}

BoundRep unbind_left(const Embedding& u, const BoundRep& rep) {
  switch (rep.backend()) {
    case Backend::kTensor:
      return tensor_unbind_left(u, rep);
    case Backend::kHadamard:
      return hadamard_unbind(u, rep);
    case Backend::kConvolution:
      return conv_unbind(u, rep);
  }
  throw std::invalid_argument("unknown backend");
}

BoundRep unbind_right(const BoundRep& rep, const Embedding& u) {
  // Hadamard and circular convolution are commutative, so only the tensor
  // backend distinguishes the two sides.
  if (rep.backend() == Backend::kTensor) return tensor_unbind_right(rep, u);
  return unbind_left(u, rep);
}

double detect(std::span<const Embedding> vs, const BoundRep& rep) {
  return detect_impl(vs.size(), span_accessor(vs), rep);
}

BoundRep bind(Backend backend, const Codebook& cb, const TupleIndex& tuple) {
  return bind_impl(backend, tuple.order(), tuple_accessor(cb, tuple));
}

double detect(const Codebook& cb, const TupleIndex& tuple, const BoundRep& rep) {
  return detect_impl(tuple.order(), tuple_accessor(cb, tuple), rep);
}

std::vector<double> detect_all(const Codebook& cb,
                               std::span<const TupleIndex> candidates,
                               const BoundRep& rep) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  if (rep.backend() != Backend::kTensor || rep.order() < 2) {
    for (const auto& c : candidates) scores.push_back(detect(cb, c, rep));
    return scores;
  }

  const std::size_t d = rep.dim();
  const std::size_t n = rep.order();
  for (const auto& c : candidates) check_query(c.order(), tuple_accessor(cb, c), rep);

  // First mode for every candidate at once: each row of the rep is read once
  // and reused from cache across candidates.
  const std::size_t stride = rep.values().size() / d;
  std::vector<std::vector<double>> partial(candidates.size(), std::vector<double>(stride, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    const double* row = rep.values().data() + i * stride;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double ui = cb[candidates[c].indices[0]][i];
      if (ui == 0.0) continue;
      double* acc = partial[c].data();
      for (std::size_t r = 0; r < stride; ++r) acc[r] += ui * row[r];
    }
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& idx = candidates[c].indices;
    const BoundRep rest(Backend::kTensor, n - 1, d, std::move(partial[c]));
    scores.push_back(tensor_detect_impl(
        n - 1, [&cb, &idx](std::size_t j) -> const Embedding& { return cb[idx[j + 1]]; }, rest));
  }
  return scores;
}

void accumulate_bind(BoundRep& acc, double weight, const Codebook& cb,
                     const TupleIndex& tuple) {
  auto at = tuple_accessor(cb, tuple);
  const std::size_t n = tuple.order();
  common_dim(n, at);
  if (n != acc.order() || cb.dim() != acc.dim()) {
    throw std::invalid_argument("accumulated tuple does not match the representation shape");
  }
  const std::size_t d = acc.dim();
  auto out = acc.mutable_values();
  switch (acc.backend()) {
    case Backend::kHadamard:
      for (std::size_t i = 0; i < d; ++i) {
        double p = weight;
        for (std::size_t j = 0; j < n; ++j) p *= at(j)[i];
        out[i] += p;
      }
      return;
    case Backend::kTensor: {
      if (n == 1) {
        for (std::size_t i = 0; i < d; ++i) out[i] += weight * at(0)[i];
        return;
      }
      // Outer product of the first n-1 factors (scaled by the weight), then
      // the last factor is streamed straight into the accumulator.
      std::vector<double> prefix{weight};
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto v = at(j).values();
        std::vector<double> next(prefix.size() * d);
        for (std::size_t r = 0; r < prefix.size(); ++r) {
          for (std::size_t i = 0; i < d; ++i) next[r * d + i] = prefix[r] * v[i];
        }
        prefix.swap(next);
      }
      const auto last = at(n - 1).values();
      for (std::size_t r = 0; r < prefix.size(); ++r) {
        const double a = prefix[r];
        double* row = out.data() + r * d;
        for (std::size_t i = 0; i < d; ++i) row[i] += a * last[i];
      }
      return;
    }
    case Backend::kConvolution:
      acc.add_scaled(weight, bind_impl(Backend::kConvolution, n, at));
      return;
  }
}

double score_scale(Backend backend, CodebookKind kind, std::size_t d, std::size_t n) {
  if (backend == Backend::kTensor && kind == CodebookKind::kOrthonormal) return 1.0;
  return std::pow(static_cast<double>(d), -static_cast<double>(n));
}

double spurious_unbind_residual(Backend backend, const Embedding& u,
                                const Embedding& v, const Embedding& w) {
  const double vv = dot(v.values(), v.values());
  if (!(vv > 0.0)) throw std::invalid_argument("bound embedding must be non-zero");
  const double alpha = dot(u.values(), v.values()) / vv;
  const Embedding pair[] = {v, w};
  BoundRep out = unbind_left(u, bind(backend, pair));
  out.scale(backend == Backend::kHadamard ? 1.0 : 1.0 / vv);
  double sq = 0.0;
  for (std::size_t i = 0; i < w.dim(); ++i) {
    const double r = out[i] - alpha * w[i];
    sq += r * r;
  }
  return std::sqrt(sq);
}

std::vector<std::vector<double>> detection_functionals(const Codebook& cb,
                                                       Backend backend,
                                                       std::size_t n) {
  if (n == 0) throw std::invalid_argument("order must be >= 1");
  const std::size_t d = cb.dim();
  const std::size_t m = cb.size();
  const std::size_t cols = BoundRep::storage_size(backend, n, d);
  const std::size_t rows = checked_pow(m, n);
  if (cols > kDetectionRankGuard || rows > kDetectionRankGuard) {
    throw std::length_error("detection rank matrix exceeds the size guard");
  }

  std::vector<std::vector<double>> out;
  out.reserve(rows);
  TupleIndex tuple{std::vector<std::size_t>(n, 0)};
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t code = r;
    for (std::size_t j = n; j-- > 0;) {
      tuple.indices[j] = code % m;
      code /= m;
    }
    // detect(s, .) is the inner product with bind(s), so its coordinates
    // are exactly the bound values.
    const BoundRep b = bind(backend, cb, tuple);
    out.emplace_back(b.values().begin(), b.values().end());
  }
  return out;
}

std::size_t detection_rank(const Codebook& cb, Backend backend, std::size_t n) {
  const auto rows = detection_functionals(cb, backend, n);
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd a(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = rows[i][j];
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double tol = kRankRelTol * sv(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

}  // namespace vsa
