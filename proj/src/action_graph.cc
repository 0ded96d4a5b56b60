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

#include "ecobee/action_graph.h"

#include <cmath>

#include "ecobee/csv.h"
#include "ecobee/error.h"

namespace ecobee {

std::vector<Action> LoadActionCatalog(const std::filesystem::path& path) {
  CsvFile csv = CsvFile::Read(path);
  auto where = [&](std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
  };
  const char* required[] = {"id", "domain", "title", "feasibility_tags",
                            "replaces_option"};
  for (const char* name : required) {
    if (!csv.column(name)) {
      throw Error(ErrorCode::kMissingColumn,
                  where(1) + "missing column '" + name + "'");
    }
  }
  std::array<std::size_t, kBoundaryCount> boundary_cols{};
  for (Boundary b : kAllBoundaries) {
    auto col = csv.column(BoundaryCode(b));
    if (!col) {
      throw Error(ErrorCode::kMissingColumn,
                  where(1) + "missing column '" + std::string(BoundaryCode(b)) + "'");
    }
    boundary_cols[Index(b)] = *col;
  }

  std::vector<Action> actions;
  for (const CsvRow& row : csv.rows()) {
    if (row.fields.size() != csv.header().size()) {
      throw Error(ErrorCode::kMalformedCsv, where(row.line) + "wrong field count");
    }
    auto field = [&](const char* name) -> const std::string& {
      return row.fields[*csv.column(name)];
    };
    Action a;
    a.id = field("id");
    a.domain = field("domain");
    a.title = field("title");
    if (!IsLowerSnakeToken(a.id) || !IsLowerSnakeToken(a.domain)) {
      throw Error(ErrorCode::kMalformedCsv,
                  where(row.line) + "id and domain must be lower-snake tokens");
    }
    for (const std::string& tag : SplitCsvLine(field("feasibility_tags"), ';')) {
      if (!tag.empty()) a.feasibility_tags.insert(tag);
    }
    if (!field("replaces_option").empty()) a.replaces_option = field("replaces_option");
    for (Boundary b : kAllBoundaries) {
      auto v = ParseDouble(row.fields[boundary_cols[Index(b)]]);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::kMalformedCsv,
                    where(row.line) + "relevance for " +
                        std::string(BoundaryCode(b)) + " is not a number");
      }
      if (*v < 0.0) {
        throw Error(ErrorCode::kNegativeWeight,
                    where(row.line) + "negative relevance for " +
                        std::string(BoundaryCode(b)));
      }
      a.boundary_relevance[Index(b)] = *v;
    }
    actions.push_back(std::move(a));
  }
  return actions;
}

ActionGraph build_action_graph(std::vector<Action> catalog) {
  if (catalog.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "action catalog is empty");
  }
  ActionGraph out;
  for (Boundary b : kAllBoundaries) out.graph.AddNode(std::string(BoundaryCode(b)));

  for (const Action& a : catalog) {
    if (out.graph.Find(a.id)) {
      throw Error(ErrorCode::kDuplicateActionId,
                  "action id '" + a.id + "' is duplicated or collides with a "
                  "boundary code");
    }
    bool relevant = false;
    for (double r : a.boundary_relevance) relevant = relevant || r > 0.0;
    if (!relevant) {
      throw Error(ErrorCode::kIsolatedAction,
                  "action '" + a.id + "' has no positive boundary relevance");
    }
    out.graph.AddNode(a.id);
  }

  for (std::size_t i = 0; i < catalog.size(); ++i) {
    NodeIndex node = ActionGraph::ActionNode(i);
    for (Boundary b : kAllBoundaries) {
      double r = catalog[i].boundary_relevance[Index(b)];
      if (r > 0.0) out.graph.AddEdge(node, ActionGraph::BoundaryNode(b), r);
    }
    for (std::size_t j = i + 1; j < catalog.size(); ++j) {
      if (catalog[i].domain == catalog[j].domain) {
        out.graph.AddEdge(node, ActionGraph::ActionNode(j), kDefaultSubstitutability);
      }
    }
  }
  if (!out.graph.IsConnected()) {
    throw Error(ErrorCode::kDisconnectedGraph,
                "action graph splits into disconnected components");
  }
  out.actions = std::move(catalog);
  return out;
}

}  // namespace ecobee
