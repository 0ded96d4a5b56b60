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

#ifndef ECOBEE_GRAPH_H_
#define ECOBEE_GRAPH_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecobee {

using NodeIndex = std::size_t;

struct Edge {
  NodeIndex to = 0;
  double weight = 1.0;
};

// Undirected weighted graph with string node ids. Edge weights are > 0 and
// self-loops are rejected. Neighbour lists are kept sorted by node index.
class WeightedGraph {
 public:
  NodeIndex AddNode(std::string id);
  // Adds (or, if already present, overwrites) the undirected edge u-v.
  void AddEdge(NodeIndex u, NodeIndex v, double weight);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::string& id(NodeIndex n) const { return ids_[n]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<NodeIndex> Find(std::string_view id) const;

  const std::vector<Edge>& neighbours(NodeIndex n) const { return adjacency_[n]; }
  bool HasEdge(NodeIndex u, NodeIndex v) const;
  std::optional<double> EdgeWeight(NodeIndex u, NodeIndex v) const;

  // Connectivity of the subgraph induced by nodes with at least one edge.
  bool IsConnected() const;

 private:
  std::vector<std::string> ids_;
  std::map<std::string, NodeIndex, std::less<>> index_;
  std::vector<std::vector<Edge>> adjacency_;
  std::size_t edge_count_ = 0;
};

}  // namespace ecobee

#endif  // ECOBEE_GRAPH_H_
