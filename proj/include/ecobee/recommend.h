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

#ifndef ECOBEE_RECOMMEND_H_
#define ECOBEE_RECOMMEND_H_

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "ecobee/action_graph.h"
#include "ecobee/boundary.h"
#include "ecobee/embedding.h"

namespace ecobee {

struct Recommendation {
  std::string action_id;
  double relevance = 0.0;
  // Subset of the user's lowest boundaries, strongest contribution first.
  std::vector<Boundary> target_boundaries;
  std::string rationale;

  bool operator==(const Recommendation&) const = default;
};

struct RankRequest {
  std::set<std::string> feasibility_context;  // e.g. campus codes
  std::set<std::string> current_options;
  std::size_t k_boundaries = 3;
  std::size_t n_recs = 5;
};

// (100 - score) / 100.
double Deficit(double score);

// Tag intersection (empty tag set = feasible anywhere) and
// replaces_option not in current_options.
bool IsFeasible(const Action& action, const RankRequest& request);

// relevance(a) = sum over the k lowest boundaries of
// deficit_b * cosine(vec(a), vec(b)); top n_recs, ties by action id.
// Errors: kInvalidParameter (k or n zero), kModelGraphMismatch,
// kNoFeasibleActions.
std::vector<Recommendation> rank_recommendations(const BoundaryScores& user,
                                                 const ActionGraph& graph,
                                                 const EmbeddingModel& model,
                                                 const RankRequest& request);

// Cold-start ranking with the catalog's boundary_relevance in place of
// cosine similarity. Same filtering and ordering.
std::vector<Recommendation> fallback_rank(const BoundaryScores& user,
                                          const std::vector<Action>& catalog,
                                          const RankRequest& request);

// Throws kModelGraphMismatch unless the model covers exactly the graph's
// nodes in order with finite vectors.
void CheckModelMatchesGraph(const EmbeddingModel& model, const WeightedGraph& graph);

}  // namespace ecobee

#endif  // ECOBEE_RECOMMEND_H_
