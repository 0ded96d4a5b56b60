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

#ifndef ECOBEE_ACTION_GRAPH_H_
#define ECOBEE_ACTION_GRAPH_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecobee/boundary.h"
#include "ecobee/graph.h"

namespace ecobee {

// A behaviour-change action a student can take.
struct Action {
  std::string id;
  std::string domain;
  std::string title;
  // Pressure-reduction potential per boundary; at least one entry > 0.
  PerBoundary boundary_relevance{};
  std::set<std::string> feasibility_tags;  // empty = feasible everywhere
  std::optional<std::string> replaces_option;
};

// Reads `id,domain,title,feasibility_tags,replaces_option,<nine codes>`.
// Tags are semicolon-separated; an empty replaces_option means none.
std::vector<Action> LoadActionCatalog(const std::filesystem::path& path);

inline constexpr double kDefaultSubstitutability = 1.0;

// Boundary nodes occupy indices 0..8 in canonical order (node id = boundary
// code); action i is node 9 + i (node id = action id).
struct ActionGraph {
  WeightedGraph graph;
  std::vector<Action> actions;

  static constexpr NodeIndex BoundaryNode(Boundary b) { return Index(b); }
  static constexpr NodeIndex ActionNode(std::size_t action_index) {
    return kBoundaryCount + action_index;
  }
};

// Action-boundary edges weighted by relevance, plus an action-action edge
// (weight kDefaultSubstitutability) for every same-domain pair.
// Errors: kInvalidArgument (empty catalog), kDuplicateActionId,
// kIsolatedAction, kDisconnectedGraph.
ActionGraph build_action_graph(std::vector<Action> catalog);

}  // namespace ecobee

#endif  // ECOBEE_ACTION_GRAPH_H_
