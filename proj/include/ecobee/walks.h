/*
 * Copyright 2026 The Eco-Bee Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ECOBEE_WALKS_H_
#define ECOBEE_WALKS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ecobee/graph.h"

namespace ecobee {

struct WalkParams {
  double p = 1.0;  // return parameter
  double q = 0.5;  // in-out parameter
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 20;  // nodes per walk
  std::uint64_t seed = 0;
};

using Walk = std::vector<NodeIndex>;
using WalkCorpus = std::vector<Walk>;

// Unnormalised second-order transition weights out of `current` given the
// previous node: w/p back to `previous`, w to common neighbours, w/q
// otherwise. Index-aligned with graph.neighbours(current).
std::vector<double> TransitionWeights(const WeightedGraph& graph,
                                      NodeIndex previous, NodeIndex current,
                                      double p, double q);

// node2vec biased walks: `walks_per_node` rounds, each starting one walk at
// every node (node order shuffled per round). The first step is first-order
// (proportional to edge weight). A walk from an isolated node is just that
// node. Throws kInvalidParameter for p <= 0, q <= 0 or walk_length < 2.
WalkCorpus generate_walks(const WeightedGraph& graph, const WalkParams& params);

}  // namespace ecobee

#endif  // ECOBEE_WALKS_H_
