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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "vsa/rng.hpp"

namespace vsa {
namespace {

constexpr Backend kAllBackends[] = {Backend::kTensor, Backend::kHadamard, Backend::kConvolution};

std::vector<double> vec(const BoundRep& r) { return {r.values().begin(), r.values().end()}; }
std::vector<double> vec(const Embedding& e) { return {e.values().begin(), e.values().end()}; }

Embedding gaussian(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.normal();
  return Embedding(std::move(v));
}

void expect_near(std::span<const double> got, std::span<const double> want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "at " << i;
}

// tensor --------------------------------------------------------------------

TEST(TensorBind, StandardBasisOuterProduct) {
  const Embedding vs[] = {{1, 0}, {0, 1}};
  const BoundRep t = tensor_bind(vs);
  EXPECT_EQ(t.order(), 2u);
  EXPECT_EQ(vec(t), (std::vector<double>{0, 1, 0, 0}));
}

TEST(TensorBind, OrderOneIsTheEmbedding) {
  const Embedding v{0.5, -2.0, 3.0};
  const Embedding vs[] = {v};
  const BoundRep t = tensor_bind(vs);
  EXPECT_EQ(t.order(), 1u);
  EXPECT_EQ(t.to_embedding(), v);
}

TEST(TensorBind, OrderThreeMatchesCoordinateProducts) {
  const Embedding vs[] = {{1, 1}, {1, -1}, {1, 1}};
  const BoundRep t = tensor_bind(vs);
  ASSERT_EQ(t.values().size(), 8u);
  // Entry (0,1,0) is at offset 0*4 + 1*2 + 0.
  EXPECT_EQ(t[2], -1.0);
  for (std::size_t off = 0; off < 8; ++off) {
    const auto idx = testing::unflatten(off, 2, 3);
    EXPECT_EQ(t[off], vs[0][idx[0]] * vs[1][idx[1]] * vs[2][idx[2]]);
  }
}

TEST(TensorBind, RandomEntriesMatchBruteForce) {
  Rng rng(1, StreamPurpose::kVerify);
  const Embedding vs[] = {gaussian(rng, 3), gaussian(rng, 3), gaussian(rng, 3), gaussian(rng, 3)};
  const BoundRep t = tensor_bind(vs);
  for (std::size_t off = 0; off < t.values().size(); ++off) {
    const auto idx = testing::unflatten(off, 3, 4);
    double p = 1.0;
    for (std::size_t j = 0; j < 4; ++j) p *= vs[j][idx[j]];
    EXPECT_NEAR(t[off], p, 1e-14);
  }
}

TEST(TensorBind, Errors) {
  EXPECT_THROW(tensor_bind(std::span<const Embedding>{}), std::invalid_argument);
  const Embedding mixed[] = {{1, 0}, {1, 0, 0}};
  EXPECT_THROW(tensor_bind(mixed), std::invalid_argument);
}

TEST(TensorUnbind, LeftExamples) {
  const Embedding e1 = basis_vector(2, 0), e2 = basis_vector(2, 1);
  const Embedding pair[] = {e1, e2};
  const BoundRep t = tensor_bind(pair);
  EXPECT_EQ(tensor_unbind_left(e1, t).to_embedding(), e2);
  EXPECT_EQ(vec(tensor_unbind_left(e2, t)), (std::vector<double>{0, 0}));
}

TEST(TensorUnbind, LeftProjectionTerm) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 5, 3, 17);
  const Embedding& v = cb[0];
  const Embedding& q = cb[1];
  const Embedding& w = cb[2];
  const Embedding u = combine(1.0 / std::sqrt(2.0), v, 1.0 / std::sqrt(2.0), q);
  const Embedding pair[] = {v, w};
  std::vector<double> expected = vec(w);
  for (double& x : expected) x /= std::sqrt(2.0);
  expect_near(tensor_unbind_left(u, tensor_bind(pair)).values(), expected, 1e-12);
}

TEST(TensorUnbind, RightExamples) {
  const Embedding e1 = basis_vector(2, 0), e2 = basis_vector(2, 1);
  const Embedding pair[] = {e1, e2};
  const BoundRep t = tensor_bind(pair);
  EXPECT_EQ(tensor_unbind_right(t, e2).to_embedding(), e1);
  EXPECT_EQ(vec(tensor_unbind_right(t, e1)), (std::vector<double>{0, 0}));

  const double a = 0.3, b = -1.7;
  const Embedding mix = combine(a, e1, b, e2);
  const Embedding mixed_pair[] = {mix, e2};
  expect_near(tensor_unbind_right(tensor_bind(mixed_pair), e2).values(), vec(mix), 1e-15);
}

TEST(TensorUnbind, HigherOrderContractsOuterModes) {
  Rng rng(2, StreamPurpose::kVerify);
  const Embedding a = gaussian(rng, 3), b = gaussian(rng, 3), c = gaussian(rng, 3), u = gaussian(rng, 3);
  const Embedding abc[] = {a, b, c};
  const Embedding bc[] = {b, c};
  const Embedding ab[] = {a, b};
  const BoundRep t = tensor_bind(abc);
  BoundRep left = tensor_bind(bc);
  left.scale(dot(u.values(), a.values()));
  BoundRep right = tensor_bind(ab);
  right.scale(dot(u.values(), c.values()));
  expect_near(tensor_unbind_left(u, t).values(), left.values(), 1e-12);
  expect_near(tensor_unbind_right(t, u).values(), right.values(), 1e-12);
  EXPECT_EQ(tensor_unbind_left(u, t).order(), 2u);
}

TEST(TensorUnbind, Errors) {
  const Embedding v{1, 0};
  const Embedding single[] = {v};
  EXPECT_THROW(tensor_unbind_left(v, tensor_bind(single)), std::invalid_argument);
  const Embedding pair[] = {v, v};
  EXPECT_THROW(tensor_unbind_left(Embedding{1, 0, 0}, tensor_bind(pair)), std::invalid_argument);
  EXPECT_THROW(tensor_unbind_right(tensor_bind(pair), Embedding{1}), std::invalid_argument);
  EXPECT_THROW(tensor_unbind_left(v, hadamard_bind(pair)), std::invalid_argument);
}

TEST(TensorDetect, Examples) {
  const Embedding e1 = basis_vector(2, 0), e2 = basis_vector(2, 1);
  const Embedding stored[] = {e1, e2};
  const BoundRep t = tensor_bind(stored);
  const Embedding swapped[] = {e2, e1};
  EXPECT_DOUBLE_EQ(tensor_detect(stored, t), 1.0);
  EXPECT_DOUBLE_EQ(tensor_detect(swapped, t), 0.0);
}

TEST(TensorDetect, EqualsProductOfDotsByBruteForce) {
  Rng rng(3, StreamPurpose::kVerify);
  for (int rep = 0; rep < 20; ++rep) {
    const Embedding u1 = gaussian(rng, 4), u2 = gaussian(rng, 4);
    const Embedding v1 = gaussian(rng, 4), v2 = gaussian(rng, 4);
    const Embedding vs[] = {v1, v2};
    const Embedding us[] = {u1, u2};
    const BoundRep t = tensor_bind(vs);
    double brute = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) brute += t[i * 4 + j] * u1[i] * u2[j];
    }
    EXPECT_NEAR(tensor_detect(us, t), brute, 1e-12);
    EXPECT_NEAR(brute, dot(u1.values(), v1.values()) * dot(u2.values(), v2.values()), 1e-12);
  }
}

TEST(TensorDetect, Errors) {
  const Embedding pair[] = {{1, 0}, {0, 1}};
  const Embedding triple[] = {{1, 0}, {0, 1}, {1, 1}};
  EXPECT_THROW(tensor_detect(triple, tensor_bind(pair)), std::invalid_argument);
  const Embedding wide[] = {{1, 0, 0}, {0, 1, 0}};
  EXPECT_THROW(tensor_detect(wide, tensor_bind(pair)), std::invalid_argument);
}

// hadamard ------------------------------------------------------------------

TEST(HadamardBind, Examples) {
  const Embedding a[] = {{1, -1}, {1, 1}};
  EXPECT_EQ(vec(hadamard_bind(a)), (std::vector<double>{1, -1}));
  const Embedding b[] = {{1, -1}, {1, -1}};
  EXPECT_EQ(vec(hadamard_bind(b)), (std::vector<double>{1, 1}));
  const Embedding c[] = {{1, -1, 1, -1}, {1, 1, -1, -1}, {-1, 1, 1, -1}};
  // Per coordinate: 1*1*-1, -1*1*1, 1*-1*1, -1*-1*-1.
  const BoundRep h = hadamard_bind(c);
  EXPECT_EQ(vec(h), (std::vector<double>{-1, -1, -1, -1}));
  EXPECT_EQ(h.order(), 3u);
  const Embedding bad[] = {{1, 1}, {1}};
  EXPECT_THROW(hadamard_bind(bad), std::invalid_argument);
}

TEST(HadamardUnbind, ExactForSignCodes) {
  const Codebook cb = generate(CodebookKind::kRademacher, 64, 3, 8);
  const Embedding vw[] = {cb[0], cb[1]};
  const BoundRep h = hadamard_bind(vw);
  EXPECT_EQ(hadamard_unbind(cb[0], h).to_embedding(), cb[1]);
  EXPECT_EQ(hadamard_unbind(cb[0], h).order(), 1u);
  const Embedding vv[] = {cb[0], cb[0]};
  EXPECT_EQ(hadamard_unbind(cb[0], hadamard_bind(vv)).to_embedding(), cb[0]);
}

TEST(HadamardUnbind, SpuriousUnbindIsFullMagnitudeNoise) {
  const Codebook cb = generate(CodebookKind::kRademacher, 256, 3, 9);
  const Embedding vw[] = {cb[0], cb[1]};
  const BoundRep r = hadamard_unbind(cb[2], hadamard_bind(vw));
  for (double x : r.values()) EXPECT_TRUE(x == 1.0 || x == -1.0);
  EXPECT_DOUBLE_EQ(r.norm(), 16.0);
}

TEST(HadamardUnbind, Errors) {
  const Embedding one[] = {{1, 1}};
  EXPECT_THROW(hadamard_unbind(Embedding{1, 1}, hadamard_bind(one)), std::invalid_argument);
  const Embedding two[] = {{1, 1}, {1, -1}};
  EXPECT_THROW(hadamard_unbind(Embedding{1, 1, 1}, hadamard_bind(two)), std::invalid_argument);
}

TEST(HadamardDetect, Examples) {
  const Embedding v{1, -1}, w{-1, -1};
  const Embedding pair[] = {v, w};
  EXPECT_DOUBLE_EQ(hadamard_detect(pair, hadamard_bind(pair)), 2.0);

  const Codebook cb = generate(CodebookKind::kRademacher, 32, 2, 1);
  const Embedding stored[] = {cb[0], combine(-1.0, cb[1], 0.0, cb[1])};
  const Embedding query[] = {cb[0], cb[1]};
  EXPECT_DOUBLE_EQ(hadamard_detect(query, hadamard_bind(stored)), -32.0);
  const Embedding wrong_order[] = {cb[0]};
  EXPECT_THROW(hadamard_detect(wrong_order, hadamard_bind(stored)), std::invalid_argument);
}

TEST(HadamardDetect, SpuriousScoreIsSumOfDSigns) {
  constexpr std::size_t d = 1024;
  int small = 0;
  for (int t = 0; t < 1000; ++t) {
    const Codebook cb = generate(CodebookKind::kRademacher, d, 4, derive_seed(5, StreamPurpose::kVerify, t));
    const Embedding stored[] = {cb[0], cb[1]};
    const Embedding query[] = {cb[2], cb[3]};
    small += std::abs(hadamard_detect(query, hadamard_bind(stored))) < 4.0 * std::sqrt(d) ? 1 : 0;
  }
  // P(|N(0,1)| > 4) ~ 6e-5 per trial.
  EXPECT_GE(small, 990);
}

// convolution ---------------------------------------------------------------

TEST(Convolution, DeltaExamples) {
  const Embedding vs[] = {{1, 0, 0}, {0, 1, 0}};
  EXPECT_EQ(vec(conv_bind(vs)), (std::vector<double>{0, 1, 0}));
  const BoundRep c(Backend::kConvolution, 2, 3, {0, 1, 0});
  EXPECT_EQ(vec(conv_unbind(Embedding{1, 0, 0}, c)), (std::vector<double>{0, 1, 0}));
}

TEST(Convolution, MatchesDefinition) {
  Rng rng(4, StreamPurpose::kVerify);
  const Embedding a = gaussian(rng, 7), b = gaussian(rng, 7), c = gaussian(rng, 7);
  const Embedding abc[] = {a, b, c};
  const auto expected = testing::convolve(vec(a), testing::convolve(vec(b), vec(c)));
  expect_near(conv_bind(abc).values(), expected, 1e-12);

  const Embedding ab[] = {a, b};
  const BoundRep bound = conv_bind(ab);
  const BoundRep un = conv_unbind(c, bound);
  for (std::size_t k = 0; k < 7; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 7; ++i) s += c[i] * bound[(i + k) % 7];
    EXPECT_NEAR(un[k], s, 1e-12);
  }
  EXPECT_NEAR(conv_detect(ab, bound), dot(bound.values(), bound.values()), 1e-12);
}

TEST(Convolution, UnbindLeavesResidual) {
  constexpr std::size_t d = 256;
  const Codebook cb = generate(CodebookKind::kRademacher, d, 2, 21);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  const Embedding v = combine(s, cb[0], 0.0, cb[0]);
  const Embedding w = combine(s, cb[1], 0.0, cb[1]);
  const Embedding vw[] = {v, w};
  const BoundRep out = conv_unbind(v, conv_bind(vw));
  double residual = 0.0;
  for (std::size_t i = 0; i < d; ++i) residual += (out[i] - w[i]) * (out[i] - w[i]);
  EXPECT_GT(std::sqrt(residual), 0.0);
}

TEST(Convolution, Errors) {
  const Embedding bad[] = {{1, 0}, {1, 0, 0}};
  EXPECT_THROW(conv_bind(bad), std::invalid_argument);
  const Embedding ok[] = {{1, 0}, {0, 1}};
  EXPECT_THROW(conv_unbind(Embedding{1, 0, 0}, conv_bind(ok)), std::invalid_argument);
}

// tensor to hadamard --------------------------------------------------------

TEST(HadamardFromTensor, DiagonalExtraction) {
  const BoundRep t(Backend::kTensor, 2, 2, {1.5, 2.0, 3.0, -4.0});
  const BoundRep h = hadamard_from_tensor(t);
  EXPECT_EQ(h.backend(), Backend::kHadamard);
  EXPECT_EQ(vec(h), (std::vector<double>{1.5, -4.0}));
  EXPECT_THROW(hadamard_from_tensor(BoundRep(Backend::kHadamard, 2, 2, {1, 2})), std::invalid_argument);
}

TEST(HadamardFromTensor, FactorizesBinding) {
  Rng rng(6, StreamPurpose::kVerify);
  for (int rep = 0; rep < 20; ++rep) {
    const Embedding vs[] = {gaussian(rng, 5), gaussian(rng, 5)};
    expect_near(hadamard_from_tensor(tensor_bind(vs)).values(), hadamard_bind(vs).values(), 1e-12);
  }
}

TEST(HadamardFromTensor, IsLinear) {
  Rng rng(7, StreamPurpose::kVerify);
  const Embedding a[] = {gaussian(rng, 3), gaussian(rng, 3), gaussian(rng, 3)};
  const Embedding b[] = {gaussian(rng, 3), gaussian(rng, 3), gaussian(rng, 3)};
  BoundRep sum = tensor_bind(a);
  sum.add_scaled(2.0, tensor_bind(b));
  BoundRep expected = hadamard_from_tensor(tensor_bind(a));
  expected.add_scaled(2.0, hadamard_from_tensor(tensor_bind(b)));
  expect_near(hadamard_from_tensor(sum).values(), expected.values(), 1e-12);
}

TEST(HadamardFromTensor, ExhaustiveOnCodebook) {
  const Codebook cb = generate(CodebookKind::kRademacher, 4, 4, 3);
  for (std::size_t n : {2u, 3u}) {
    const std::size_t count = n == 2 ? 16 : 64;
    for (std::size_t code = 0; code < count; ++code) {
      const TupleIndex t{testing::unflatten(code, 4, n)};
      expect_near(hadamard_from_tensor(bind(Backend::kTensor, cb, t)).values(),
                  bind(Backend::kHadamard, cb, t).values(), 1e-12);
    }
  }
}

// detection rank ------------------------------------------------------------

TEST(DetectionRank, TensorOrthonormalIsFull) {
  EXPECT_EQ(detection_rank(generate(CodebookKind::kOrthonormal, 2, 2, 1), Backend::kTensor, 2), 4u);
  EXPECT_EQ(detection_rank(generate(CodebookKind::kOrthonormal, 3, 3, 1), Backend::kTensor, 3), 27u);
}

TEST(DetectionRank, AgreesWithElimination) {
  for (Backend b : kAllBackends) {
    for (auto kind : {CodebookKind::kOrthonormal, CodebookKind::kRademacher}) {
      for (auto [d, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {3, 3}, {4, 2}}) {
        const Codebook cb = generate(kind, d, d, 10 + d);
        const std::size_t oracle = testing::elimination_rank(detection_functionals(cb, b, n));
        EXPECT_EQ(detection_rank(cb, b, n), oracle)
            << to_string(b) << " " << to_string(kind) << " d=" << d << " n=" << n;
      }
    }
  }
}

TEST(DetectionRank, CompressedBackendsAreBoundedByD) {
  const Codebook cb = generate(CodebookKind::kRademacher, 4, 4, 5);
  EXPECT_LE(detection_rank(cb, Backend::kHadamard, 2), 4u);
  EXPECT_LE(detection_rank(cb, Backend::kConvolution, 2), 4u);
  EXPECT_EQ(detection_rank(generate(CodebookKind::kOrthonormal, 1, 1, 0), Backend::kTensor, 5), 1u);
}

TEST(DetectionRank, FunctionalsEvaluateDetectOnBasis) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 3, 3, 2);
  for (Backend b : kAllBackends) {
    const auto rows = detection_functionals(cb, b, 2);
    ASSERT_EQ(rows.size(), 9u);
    const std::size_t cols = BoundRep::storage_size(b, 2, 3);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const TupleIndex t{testing::unflatten(r, 3, 2)};
      for (std::size_t c = 0; c < cols; ++c) {
        std::vector<double> basis(cols, 0.0);
        basis[c] = 1.0;
        EXPECT_NEAR(rows[r][c], detect(cb, t, BoundRep(b, 2, 3, basis)), 1e-12);
      }
    }
  }
}

TEST(DetectionRank, SizeGuard) {
  EXPECT_THROW(detection_rank(generate(CodebookKind::kOrthonormal, 5, 5, 0), Backend::kTensor, 6),
               std::length_error);
}

// properties ----------------------------------------------------------------

TEST(BindingProperties, Multilinear) {
  Rng rng(100, StreamPurpose::kVerify);
  for (Backend b : kAllBackends) {
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 3);
      std::vector<Embedding> vs;
      for (std::size_t j = 0; j < n; ++j) vs.push_back(gaussian(rng, 4));
      const Embedding x = gaussian(rng, 4), y = gaussian(rng, 4);
      const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
      const auto slot = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
      auto with = [&](const Embedding& e) {
        auto c = vs;
        c[slot] = e;
        return bind(b, c);
      };
      BoundRep expected = with(x).scale(alpha);
      expected.add_scaled(beta, with(y));
      expect_near(with(combine(alpha, x, beta, y)).values(), expected.values(), 1e-10);
    }
  }
}

TEST(BindingProperties, UnbindIsLinear) {
  Rng rng(101, StreamPurpose::kVerify);
  for (Backend b : kAllBackends) {
    for (int rep = 0; rep < 100; ++rep) {
      const Embedding vs[] = {gaussian(rng, 5), gaussian(rng, 5)};
      const BoundRep r = bind(b, vs);
      const Embedding x = gaussian(rng, 5), y = gaussian(rng, 5);
      const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
      const Embedding mix = combine(alpha, x, beta, y);
      BoundRep left = unbind_left(x, r).scale(alpha);
      left.add_scaled(beta, unbind_left(y, r));
      expect_near(unbind_left(mix, r).values(), left.values(), 1e-10);
      BoundRep right = unbind_right(r, x).scale(alpha);
      right.add_scaled(beta, unbind_right(r, y));
      expect_near(unbind_right(r, mix).values(), right.values(), 1e-10);
    }
  }
}

TEST(BindingProperties, DetectIsInnerProductWithBinding) {
  Rng rng(102, StreamPurpose::kVerify);
  for (Backend b : kAllBackends) {
    const Embedding stored[] = {gaussian(rng, 6), gaussian(rng, 6), gaussian(rng, 6)};
    const Embedding query[] = {gaussian(rng, 6), gaussian(rng, 6), gaussian(rng, 6)};
    const BoundRep r = bind(b, stored);
    EXPECT_NEAR(detect(query, r), dot(bind(b, query).values(), r.values()), 1e-10);
  }
}

TEST(BindingProperties, ExactTensorRoundTripOnOrthonormalCodes) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 8, 8, 55);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      const Embedding pair[] = {cb[i], cb[j]};
      const BoundRep t = tensor_bind(pair);
      expect_near(tensor_unbind_left(cb[i], t).values(), cb[j].values(), 1e-12);
      expect_near(tensor_unbind_right(t, cb[j]).values(), cb[i].values(), 1e-12);
    }
  }
}

TEST(BindingProperties, SpuriousTensorUnbindIsProjection) {
  Rng rng(103, StreamPurpose::kVerify);
  for (int rep = 0; rep < 200; ++rep) {
    const Embedding u = gaussian(rng, 16), v = gaussian(rng, 16), w = gaussian(rng, 16);
    const Embedding pair[] = {v, w};
    std::vector<double> expected = vec(w);
    for (double& x : expected) x *= dot(u.values(), v.values());
    expect_near(tensor_unbind_left(u, tensor_bind(pair)).values(), expected, 1e-12);
    EXPECT_LE(spurious_unbind_residual(Backend::kTensor, u, v, w), 1e-12);
  }
}

TEST(BindingProperties, IteratedBackendsCannotUnbindCleanly) {
  constexpr std::size_t d = 64;
  for (Backend b : {Backend::kHadamard, Backend::kConvolution}) {
    int large = 0;
    for (int s = 0; s < 100; ++s) {
      const Codebook cb = generate(CodebookKind::kRademacher, d, 3, s);
      large += spurious_unbind_residual(b, cb[0], cb[1], cb[2]) > 0.5 * std::sqrt(d) ? 1 : 0;
    }
    EXPECT_GE(large, 99) << to_string(b);
  }
}

TEST(BindingProperties, CorrectUnbindHasNoResidualForHadamardSigns) {
  const Codebook cb = generate(CodebookKind::kRademacher, 32, 2, 4);
  EXPECT_EQ(spurious_unbind_residual(Backend::kHadamard, cb[0], cb[0], cb[1]), 0.0);
}

TEST(BindingProperties, TensorDetectionIsCalibrated) {
  const Codebook cb = generate(CodebookKind::kOrthonormal, 3, 3, 77);
  for (std::size_t s = 0; s < 9; ++s) {
    const TupleIndex stored{testing::unflatten(s, 3, 2)};
    const BoundRep r = bind(Backend::kTensor, cb, stored);
    for (std::size_t q = 0; q < 9; ++q) {
      const double score = detect(cb, TupleIndex{testing::unflatten(q, 3, 2)}, r);
      if (q == s) {
        EXPECT_NEAR(score, 1.0, 1e-10);
      } else {
        EXPECT_LE(std::abs(score), 1e-10);
      }
    }
  }
}

TEST(BindingProperties, BatchedDetectionMatchesSingle) {
  const Codebook cb = generate(CodebookKind::kRademacher, 5, 12, 8);
  std::vector<TupleIndex> candidates;
  for (std::size_t i = 0; i < 4; ++i) candidates.push_back(TupleIndex{{i, i + 4, i + 8}});
  for (Backend b : kAllBackends) {
    BoundRep r = bind(b, cb, candidates[0]);
    r.add_scaled(-0.5, bind(b, cb, candidates[2]));
    const auto all = detect_all(cb, candidates, r);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      EXPECT_NEAR(all[c], detect(cb, candidates[c], r), 1e-10);
    }
  }
}

TEST(BindingProperties, AccumulateMatchesAddScaled) {
  const Codebook cb = generate(CodebookKind::kRademacher, 4, 9, 8);
  const TupleIndex t{{1, 5, 7}};
  for (Backend b : kAllBackends) {
    BoundRep acc = bind(b, cb, TupleIndex{{0, 2, 3}});
    BoundRep ref = acc;
    accumulate_bind(acc, -1.25, cb, t);
    ref.add_scaled(-1.25, bind(b, cb, t));
    expect_near(acc.values(), ref.values(), 1e-12);
  }
}

TEST(BoundRep, ShapeChecks) {
  EXPECT_THROW(BoundRep(Backend::kTensor, 2, 2, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(BoundRep(Backend::kHadamard, 0, 2, {1, 2}), std::invalid_argument);
  BoundRep a = BoundRep::zeros(Backend::kTensor, 2, 2);
  EXPECT_THROW(a.add_scaled(1.0, BoundRep::zeros(Backend::kHadamard, 2, 2)), std::invalid_argument);
  EXPECT_THROW(a.to_embedding(), std::invalid_argument);
  EXPECT_EQ(parse_backend("convolution"), Backend::kConvolution);
  EXPECT_THROW(parse_backend("rotation"), std::invalid_argument);
}

}  // namespace
}  // namespace vsa
