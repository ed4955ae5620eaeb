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

#include "vsa/memory.hpp"

#include <stdexcept>

namespace vsa {

Memory bundle(const Codebook& cb, std::span<const TupleIndex> tuples,
              std::span<const double> weights, Backend backend) {
  if (tuples.empty()) throw std::invalid_argument("bundle needs at least one tuple");
  if (weights.size() != tuples.size()) {
    throw std::invalid_argument("bundle needs one weight per tuple");
  }
  const std::size_t order = tuples.front().order();
  for (const auto& t : tuples) {
    if (t.order() != order) throw std::invalid_argument("bundled tuples must share one order");
    validate(t, cb);
  }

  BoundRep rep = bind(backend, cb, tuples[0]);
  if (weights[0] != 1.0) rep.scale(weights[0]);
  std::vector<StoredTuple> stored;
  stored.reserve(tuples.size());
  stored.push_back({tuples[0], weights[0]});
  for (std::size_t i = 1; i < tuples.size(); ++i) {
    accumulate_bind(rep, weights[i], cb, tuples[i]);
    stored.push_back({tuples[i], weights[i]});
  }
  return Memory(std::move(rep), std::move(stored));
}

Memory bundle(const Codebook& cb, std::span<const TupleIndex> tuples,
              Backend backend) {
  const std::vector<double> ones(tuples.size(), 1.0);
  return bundle(cb, tuples, ones, backend);
}

BoundRep reconstruct(const Memory& mem, const Codebook& cb) {
  BoundRep rep = BoundRep::zeros(mem.backend(), mem.order(), mem.dim());
  for (const auto& s : mem.stored()) {
    rep.add_scaled(s.weight, bind(mem.backend(), cb, s.tuple));
  }
  return rep;
}

BoundRep query_unbind(const Memory& mem, const Embedding& u, Side side) {
  return side == Side::kLeft ? unbind_left(u, mem.rep()) : unbind_right(mem.rep(), u);
}

DetectionResult query_detect(const Memory& mem,
                             std::span<const TupleIndex> candidates,
                             const Codebook& cb) {
  if (candidates.empty()) throw std::invalid_argument("query_detect needs candidates");
  if (cb.dim() != mem.dim()) throw std::invalid_argument("codebook dimension does not match memory");

  for (const auto& c : candidates) {
    if (c.order() != mem.order()) throw std::invalid_argument("candidate order does not match memory");
  }
  DetectionResult result;
  result.scores = detect_all(cb, candidates, mem.rep());
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    if (result.scores[i] > result.scores[result.argmax]) result.argmax = i;
  }
  const double best = result.scores[result.argmax];
  std::size_t at_best = 0;
  for (double s : result.scores) at_best += (s == best) ? 1 : 0;
  result.tie = at_best > 1;
  return result;
}

}  // namespace vsa
