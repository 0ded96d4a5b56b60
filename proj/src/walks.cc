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

#include "ecobee/walks.h"

#include <cmath>
#include <numeric>

#include "ecobee/error.h"
#include "ecobee/random.h"

namespace ecobee {
namespace {

// Index drawn proportionally to `weights` (total > 0).
std::size_t Sample(const std::vector<double>& weights, Rng& rng) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double target = rng.Uniform() * total;
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    if (target < running) return i;
  }
  return weights.size() - 1;
}

}  // namespace

std::vector<double> TransitionWeights(const WeightedGraph& graph,
                                      NodeIndex previous, NodeIndex current,
                                      double p, double q) {
  const auto& edges = graph.neighbours(current);
  std::vector<double> weights;
  weights.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.to == previous) {
      weights.push_back(e.weight / p);
    } else if (graph.HasEdge(e.to, previous)) {
      weights.push_back(e.weight);
    } else {
      weights.push_back(e.weight / q);
    }
  }
  return weights;
}

WalkCorpus generate_walks(const WeightedGraph& graph, const WalkParams& params) {
  if (!(params.p > 0.0) || !std::isfinite(params.p) || !(params.q > 0.0) ||
      !std::isfinite(params.q)) {
    throw Error(ErrorCode::kInvalidParameter, "p and q must be positive");
  }
  if (params.walk_length < 2) {
    throw Error(ErrorCode::kInvalidParameter, "walk_length must be at least 2");
  }

  Rng rng(params.seed);
  std::vector<NodeIndex> order(graph.node_count());
  std::iota(order.begin(), order.end(), NodeIndex{0});

  WalkCorpus corpus;
  corpus.reserve(params.walks_per_node * graph.node_count());
  std::vector<double> first_step;
  for (std::size_t round = 0; round < params.walks_per_node; ++round) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.Below(i)]);
    }
    for (NodeIndex start : order) {
      Walk walk;
      walk.reserve(params.walk_length);
      walk.push_back(start);
      while (walk.size() < params.walk_length) {
        NodeIndex current = walk.back();
        const auto& edges = graph.neighbours(current);
        if (edges.empty()) break;
        std::size_t pick;
        if (walk.size() == 1) {
          first_step.clear();
          for (const Edge& e : edges) first_step.push_back(e.weight);
          pick = Sample(first_step, rng);
        } else {
          pick = Sample(TransitionWeights(graph, walk[walk.size() - 2], current,
                                          params.p, params.q),
                        rng);
        }
        walk.push_back(edges[pick].to);
      }
      corpus.push_back(std::move(walk));
    }
  }
  return corpus;
}

}  // namespace ecobee
