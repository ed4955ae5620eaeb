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
#include <vector>

#include "vsa/binding.hpp"
#include "vsa/codebook.hpp"

namespace vsa {

struct StoredTuple {
  TupleIndex tuple;
  double weight = 1.0;
};

/// Weighted superposition of bound tuples. The stored list is kept as
/// ground truth; `rep` is the elementwise sum of weight * bind(tuple).
class Memory {
 public:
  Memory(BoundRep rep, std::vector<StoredTuple> stored)
      : rep_(std::move(rep)), stored_(std::move(stored)) {}

  const BoundRep& rep() const { return rep_; }
  std::span<const StoredTuple> stored() const { return stored_; }
  Backend backend() const { return rep_.backend(); }
  std::size_t order() const { return rep_.order(); }
  std::size_t dim() const { return rep_.dim(); }

 private:
  BoundRep rep_;
  std::vector<StoredTuple> stored_;
};

/// Throws std::invalid_argument on an empty tuple list, a weight count that
/// differs from the tuple count, or tuples of mixed order. Repeated tuples
/// are allowed.
Memory bundle(const Codebook& cb, std::span<const TupleIndex> tuples,
              std::span<const double> weights, Backend backend);
Memory bundle(const Codebook& cb, std::span<const TupleIndex> tuples,
              Backend backend);

/// Recomputes the superposition from the stored tuples.
BoundRep reconstruct(const Memory& mem, const Codebook& cb);

enum class Side { kLeft, kRight };

BoundRep query_unbind(const Memory& mem, const Embedding& u, Side side);

struct DetectionResult {
  std::vector<double> scores;
  /// Lowest index among the maximal scores.
  std::size_t argmax = 0;
  /// More than one candidate attains the maximum.
  bool tie = false;
};

DetectionResult query_detect(const Memory& mem,
                             std::span<const TupleIndex> candidates,
                             const Codebook& cb);

}  // namespace vsa
