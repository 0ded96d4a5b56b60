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

#include "ecobee/recommend.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ecobee/error.h"

namespace ecobee {
namespace {

void CheckRequest(const RankRequest& request) {
  if (request.k_boundaries == 0 || request.n_recs == 0) {
    throw Error(ErrorCode::kInvalidParameter,
                "k_boundaries and n_recs must be at least 1");
  }
}

// Shared scoring/ordering for both ranking paths. `affinity(i, b)` gives the
// per-boundary factor for catalog entry i.
std::vector<Recommendation> Rank(
    const BoundaryScores& user, const std::vector<Action>& catalog,
    const RankRequest& request,
    const std::function<double(std::size_t, Boundary)>& affinity) {
  CheckRequest(request);
  std::vector<Boundary> targets = user.Lowest(request.k_boundaries);

  std::vector<Recommendation> ranked;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const Action& action = catalog[i];
    if (!IsFeasible(action, request)) continue;

    std::vector<std::pair<Boundary, double>> parts;
    double relevance = 0.0;
    for (Boundary b : targets) {
      double part = Deficit(user[b]) * affinity(i, b);
      parts.emplace_back(b, part);
      relevance += part;
    }
    std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return Index(x.first) < Index(y.first);
    });

    Recommendation rec;
    rec.action_id = action.id;
    rec.relevance = relevance;
    for (const auto& part : parts) rec.target_boundaries.push_back(part.first);
    Boundary lead = rec.target_boundaries.front();
    char score_text[32];
    std::snprintf(score_text, sizeof(score_text), "%.1f", user[lead]);
    rec.rationale = action.title + " targets " + std::string(BoundaryCode(lead)) +
                    ", one of your lowest boundary scores (" + score_text + "/100).";
    ranked.push_back(std::move(rec));
  }
  if (ranked.empty()) {
    throw Error(ErrorCode::kNoFeasibleActions,
                "no action is feasible for this context");
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const Recommendation& a, const Recommendation& b) {
              if (a.relevance != b.relevance) return a.relevance > b.relevance;
              return a.action_id < b.action_id;
            });
  if (ranked.size() > request.n_recs) ranked.resize(request.n_recs);
  return ranked;
}

}  // namespace

double Deficit(double score) { return (100.0 - score) / 100.0; }

bool IsFeasible(const Action& action, const RankRequest& request) {
  if (action.replaces_option &&
      request.current_options.contains(*action.replaces_option)) {
    return false;
  }
  if (action.feasibility_tags.empty()) return true;
  return std::any_of(action.feasibility_tags.begin(), action.feasibility_tags.end(),
                     [&](const std::string& tag) {
                       return request.feasibility_context.contains(tag);
                     });
}

void CheckModelMatchesGraph(const EmbeddingModel& model, const WeightedGraph& graph) {
  if (model.nodes != graph.ids()) {
    throw Error(ErrorCode::kModelGraphMismatch,
                "embedding model was trained on a different graph");
  }
  if (model.dimension == 0 ||
      model.vectors.size() != model.nodes.size() * model.dimension) {
    throw Error(ErrorCode::kModelGraphMismatch, "embedding model is malformed");
  }
  for (double v : model.vectors) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kModelGraphMismatch,
                  "embedding model has non-finite values");
    }
  }
}

std::vector<Recommendation> rank_recommendations(const BoundaryScores& user,
                                                 const ActionGraph& graph,
                                                 const EmbeddingModel& model,
                                                 const RankRequest& request) {
  CheckRequest(request);
  CheckModelMatchesGraph(model, graph.graph);
  return Rank(user, graph.actions, request, [&](std::size_t i, Boundary b) {
    return model.Cosine(ActionGraph::ActionNode(i), ActionGraph::BoundaryNode(b));
  });
}

std::vector<Recommendation> fallback_rank(const BoundaryScores& user,
                                          const std::vector<Action>& catalog,
                                          const RankRequest& request) {
  return Rank(user, catalog, request, [&](std::size_t i, Boundary b) {
    return catalog[i].boundary_relevance[Index(b)];
  });
}

}  // namespace ecobee
