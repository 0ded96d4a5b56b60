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

#include "ecobee/graph.h"

#include <algorithm>
#include <cmath>

#include "ecobee/error.h"

namespace ecobee {
namespace {

std::vector<Edge>::iterator LowerBound(std::vector<Edge>& edges, NodeIndex to) {
  return std::lower_bound(edges.begin(), edges.end(), to,
                          [](const Edge& e, NodeIndex n) { return e.to < n; });
}

}  // namespace

NodeIndex WeightedGraph::AddNode(std::string id) {
  if (index_.contains(id)) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate node id '" + id + "'");
  }
  NodeIndex n = ids_.size();
  index_.emplace(id, n);
  ids_.push_back(std::move(id));
  adjacency_.emplace_back();
  return n;
}

void WeightedGraph::AddEdge(NodeIndex u, NodeIndex v, double weight) {
  if (u >= ids_.size() || v >= ids_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
  }
  if (u == v) {
    throw Error(ErrorCode::kInvalidArgument, "self-loop on '" + ids_[u] + "'");
  }
  if (!std::isfinite(weight) || weight <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "edge weight must be positive");
  }
  auto insert = [&](NodeIndex a, NodeIndex b) {
    auto& edges = adjacency_[a];
    auto it = LowerBound(edges, b);
    if (it != edges.end() && it->to == b) {
      it->weight = weight;
      return false;
    }
    edges.insert(it, Edge{b, weight});
    return true;
  };
  bool added = insert(u, v);
  insert(v, u);
  if (added) ++edge_count_;
}

std::optional<NodeIndex> WeightedGraph::Find(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool WeightedGraph::HasEdge(NodeIndex u, NodeIndex v) const {
  return EdgeWeight(u, v).has_value();
}

std::optional<double> WeightedGraph::EdgeWeight(NodeIndex u, NodeIndex v) const {
  if (u >= adjacency_.size()) return std::nullopt;
  const auto& edges = adjacency_[u];
  auto it = std::lower_bound(edges.begin(), edges.end(), v,
                             [](const Edge& e, NodeIndex n) { return e.to < n; });
  if (it == edges.end() || it->to != v) return std::nullopt;
  return it->weight;
}

bool WeightedGraph::IsConnected() const {
  std::size_t with_edges = 0;
  std::optional<NodeIndex> start;
  for (NodeIndex n = 0; n < adjacency_.size(); ++n) {
    if (!adjacency_[n].empty()) {
      ++with_edges;
      if (!start) start = n;
    }
  }
  if (!start) return true;
  std::vector<bool> seen(adjacency_.size(), false);
  std::vector<NodeIndex> stack = {*start};
  seen[*start] = true;
  std::size_t reached = 0;
  while (!stack.empty()) {
    NodeIndex n = stack.back();
    stack.pop_back();
    ++reached;
    for (const Edge& e : adjacency_[n]) {
      if (!seen[e.to]) {
        seen[e.to] = true;
        stack.push_back(e.to);
      }
    }
  }
  return reached == with_edges;
}

}  // namespace ecobee
