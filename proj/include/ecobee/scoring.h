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

#ifndef ECOBEE_SCORING_H_
#define ECOBEE_SCORING_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecobee/boundary.h"
#include "ecobee/factor_table.h"

namespace ecobee {

// One (item, boundary) pressure term and its share of that boundary's total.
struct Contribution {
  std::string domain;
  std::string option_key;
  Boundary boundary = Boundary::kClimateChange;
  double pressure = 0.0;
  double share = 0.0;

  bool operator==(const Contribution&) const = default;
};

struct ScoreResult {
  BoundaryScores boundary_scores = BoundaryScores::Uniform(100.0);
  double composite = 100.0;
  std::vector<Contribution> explanations;
  std::size_t items_scored = 0;

  bool operator==(const ScoreResult&) const = default;
};

// Optional per-boundary composite weights; nullopt means equal weights.
using CompositeWeights = std::optional<PerBoundary>;

inline constexpr std::size_t kDefaultExplanations = 5;

double RoundToTenth(double value);

// pressure_b = sum over items of quantity * weight(domain, option, b).
PressureVector accumulate_pressures(std::span<const CanonicalItem> items,
                                    const FactorTable& table);

// Worst-case pressure reachable with the same item set: each item at the
// maximum weight its domain offers on every boundary.
PerBoundary max_pressures(std::span<const CanonicalItem> items,
                          const FactorTable& table);

// Full-precision scores 100 * (1 - p / p_max), 100 where p_max == 0,
// clamped to [0, 100].
PerBoundary normalise_scores_exact(const PressureVector& pressures,
                                   std::span<const CanonicalItem> items,
                                   const FactorTable& table);

// As above, rounded to one decimal place.
BoundaryScores normalise_scores(const PressureVector& pressures,
                                std::span<const CanonicalItem> items,
                                const FactorTable& table);

// Weighted mean; throws kInvalidWeights on negative or all-zero weights.
double composite_exact(const PerBoundary& scores,
                       const CompositeWeights& weights = std::nullopt);
// Weighted mean rounded to one decimal place.
double composite(const BoundaryScores& scores,
                 const CompositeWeights& weights = std::nullopt);

void ValidateCompositeWeights(const PerBoundary& weights);

// Positive (item, boundary) contributions sorted by pressure descending,
// ties by (domain, option_key, boundary code), truncated to top_k.
std::vector<Contribution> explain(std::span<const CanonicalItem> items,
                                  const FactorTable& table, std::size_t top_k);

// accumulate -> normalise -> composite -> explain. Throws kEmptyItems on an
// empty item list; unknown items propagate kUnknownOption/kUnknownDomain.
ScoreResult score(std::span<const CanonicalItem> items, const FactorTable& table,
                  const CompositeWeights& weights = std::nullopt,
                  std::size_t top_k = kDefaultExplanations);

}  // namespace ecobee

#endif  // ECOBEE_SCORING_H_
