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

#include "ecobee/scoring.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ecobee/error.h"

namespace ecobee {
namespace {

void CheckQuantity(const CanonicalItem& item) {
  if (!std::isfinite(item.quantity) || item.quantity < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "quantity for " + item.domain + "/" + item.option_key +
                    " must be finite and non-negative");
  }
}

bool ContributionBefore(const Contribution& a, const Contribution& b) {
  if (a.pressure != b.pressure) return a.pressure > b.pressure;
  return std::forward_as_tuple(a.domain, a.option_key, BoundaryCode(a.boundary)) <
         std::forward_as_tuple(b.domain, b.option_key, BoundaryCode(b.boundary));
}

}  // namespace

double RoundToTenth(double value) { return std::round(value * 10.0) / 10.0; }

PressureVector accumulate_pressures(std::span<const CanonicalItem> items,
                                    const FactorTable& table) {
  PerBoundary sum{};
  for (const auto& item : items) {
    CheckQuantity(item);
    const PerBoundary& w = table.Weights(item.domain, item.option_key);
    for (std::size_t i = 0; i < kBoundaryCount; ++i) {
      sum[i] += item.quantity * w[i];
    }
  }
  return PressureVector(sum);
}

PerBoundary max_pressures(std::span<const CanonicalItem> items,
                          const FactorTable& table) {
  PerBoundary sum{};
  for (const auto& item : items) {
    CheckQuantity(item);
    const PerBoundary& w = table.DomainMax(item.domain);
    for (std::size_t i = 0; i < kBoundaryCount; ++i) {
      sum[i] += item.quantity * w[i];
    }
  }
  return sum;
}

PerBoundary normalise_scores_exact(const PressureVector& pressures,
                                   std::span<const CanonicalItem> items,
                                   const FactorTable& table) {
  PerBoundary p_max = max_pressures(items, table);
  PerBoundary out{};
  for (std::size_t i = 0; i < kBoundaryCount; ++i) {
    if (p_max[i] == 0.0) {
      out[i] = 100.0;
    } else {
      double s = 100.0 * (1.0 - pressures.values()[i] / p_max[i]);
      out[i] = std::clamp(s, 0.0, 100.0);
    }
  }
  return out;
}

BoundaryScores normalise_scores(const PressureVector& pressures,
                                std::span<const CanonicalItem> items,
                                const FactorTable& table) {
  PerBoundary exact = normalise_scores_exact(pressures, items, table);
  for (double& s : exact) s = RoundToTenth(s);
  return BoundaryScores(exact);
}

void ValidateCompositeWeights(const PerBoundary& weights) {
  bool any_positive = false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidWeights,
                  "composite weights must be finite and non-negative");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw Error(ErrorCode::kInvalidWeights, "composite weights are all zero");
  }
}

double composite_exact(const PerBoundary& scores, const CompositeWeights& weights) {
  if (!weights) {
    double sum = 0.0;
    for (double s : scores) sum += s;
    return std::clamp(sum / static_cast<double>(kBoundaryCount), 0.0, 100.0);
  }
  ValidateCompositeWeights(*weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < kBoundaryCount; ++i) {
    num += (*weights)[i] * scores[i];
    den += (*weights)[i];
  }
  return std::clamp(num / den, 0.0, 100.0);
}

double composite(const BoundaryScores& scores, const CompositeWeights& weights) {
  return RoundToTenth(composite_exact(scores.values(), weights));
}

std::vector<Contribution> explain(std::span<const CanonicalItem> items,
                                  const FactorTable& table, std::size_t top_k) {
  std::vector<Contribution> all;
  PerBoundary totals{};
  for (const auto& item : items) {
    CheckQuantity(item);
    const PerBoundary& w = table.Weights(item.domain, item.option_key);
    for (Boundary b : kAllBoundaries) {
      double pressure = item.quantity * w[Index(b)];
      if (pressure > 0.0) {
        all.push_back(Contribution{item.domain, item.option_key, b, pressure, 0.0});
        totals[Index(b)] += pressure;
      }
    }
  }
  for (auto& c : all) c.share = c.pressure / totals[Index(c.boundary)];
  std::sort(all.begin(), all.end(), ContributionBefore);
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

ScoreResult score(std::span<const CanonicalItem> items, const FactorTable& table,
                  const CompositeWeights& weights, std::size_t top_k) {
  if (items.empty()) {
    throw Error(ErrorCode::kEmptyItems, "nothing to score: no items");
  }
  if (weights) ValidateCompositeWeights(*weights);
  PressureVector pressures = accumulate_pressures(items, table);
  PerBoundary exact = normalise_scores_exact(pressures, items, table);
  PerBoundary rounded = exact;
  for (double& s : rounded) s = RoundToTenth(s);

  ScoreResult result;
  result.boundary_scores = BoundaryScores(rounded);
  result.composite = RoundToTenth(composite_exact(exact, weights));
  result.explanations = explain(items, table, top_k);
  result.items_scored = items.size();
  return result;
}

}  // namespace ecobee
