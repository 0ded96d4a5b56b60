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

#ifndef ECOBEE_LEADERBOARD_H_
#define ECOBEE_LEADERBOARD_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ecobee/boundary.h"
#include "ecobee/scoring.h"

namespace ecobee {

struct LeaderboardEntry {
  std::string pseudonym;
  std::string campus;
  double composite = 0.0;
  BoundaryScores boundary_scores = BoundaryScores::Uniform(0.0);
  std::int64_t submitted_at = 0;  // UTC seconds

  bool operator==(const LeaderboardEntry&) const = default;
};

struct FeedbackRecord {
  std::string pseudonym;
  std::string body;
  std::int64_t submitted_at = 0;
};

// Aggregates are present iff n >= k_min.
struct LeaderboardSummary {
  std::size_t n = 0;
  std::optional<double> top_composite;
  std::optional<double> mean_composite;
  std::optional<double> sd_composite;  // population SD
  std::optional<PerBoundary> per_boundary_means;
  std::optional<std::string> campus_filter;
};

// The only per-user view that leaves the leaderboard.
struct PublicEntry {
  std::string pseudonym;
  double composite = 0.0;

  bool operator==(const PublicEntry&) const = default;
};

struct SubmitAck {
  bool ok = true;
  std::size_t rank_estimate = 1;
};

inline constexpr std::size_t kDefaultKMin = 5;
inline constexpr double kConsistencyTolerance = 0.1;

// Persistence contract. Implementations serialise writes themselves; the
// Leaderboard adds snapshot isolation on top.
class LeaderboardStore {
 public:
  virtual ~LeaderboardStore() = default;
  // Insert or replace by pseudonym.
  virtual void Upsert(const LeaderboardEntry& entry) = 0;
  virtual void AddFeedback(const FeedbackRecord& record) = 0;
  virtual std::vector<LeaderboardEntry> Entries() const = 0;
  virtual std::size_t FeedbackCount() const = 0;
};

class InMemoryLeaderboardStore : public LeaderboardStore {
 public:
  void Upsert(const LeaderboardEntry& entry) override;
  void AddFeedback(const FeedbackRecord& record) override;
  std::vector<LeaderboardEntry> Entries() const override;
  std::size_t FeedbackCount() const override;

 private:
  std::vector<LeaderboardEntry> entries_;
  std::vector<FeedbackRecord> feedback_;
};

// SQLite-backed store with tables
//   leaderboard(pseudonym PRIMARY KEY, campus, composite, <nine boundary
//               columns>, submitted_at)
//   feedback(pseudonym, body, submitted_at)
class SqliteLeaderboardStore : public LeaderboardStore {
 public:
  explicit SqliteLeaderboardStore(const std::filesystem::path& path);
  ~SqliteLeaderboardStore() override;
  SqliteLeaderboardStore(const SqliteLeaderboardStore&) = delete;
  SqliteLeaderboardStore& operator=(const SqliteLeaderboardStore&) = delete;

  void Upsert(const LeaderboardEntry& entry) override;
  void AddFeedback(const FeedbackRecord& record) override;
  std::vector<LeaderboardEntry> Entries() const override;
  std::size_t FeedbackCount() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Throws kInvalidEntry (pseudonym, bounds) or kConsistencyError (composite
// more than 0.1 from the composite recomputed from boundary_scores).
void ValidateEntry(const LeaderboardEntry& entry, const CompositeWeights& weights);

class Leaderboard {
 public:
  explicit Leaderboard(std::shared_ptr<LeaderboardStore> store,
                       CompositeWeights weights = std::nullopt);

  // Latest submission per pseudonym wins. rank_estimate = 1 + number of
  // entries with a strictly greater composite.
  SubmitAck submit_score(const LeaderboardEntry& entry);
  void submit_feedback(const FeedbackRecord& record);

  LeaderboardSummary summary(const std::optional<std::string>& campus_filter,
                             std::size_t k_min = kDefaultKMin) const;
  // Highest composites first; ties by earlier submitted_at, then pseudonym.
  std::vector<PublicEntry> top_n(std::size_t n,
                                 const std::optional<std::string>& campus_filter =
                                     std::nullopt) const;

  std::size_t size() const;
  std::size_t feedback_count() const;

 private:
  std::shared_ptr<LeaderboardStore> store_;
  CompositeWeights weights_;
  mutable std::shared_mutex mutex_;
};

// Aggregates over an explicit entry set (no suppression).
LeaderboardSummary Summarise(const std::vector<LeaderboardEntry>& entries);

}  // namespace ecobee

#endif  // ECOBEE_LEADERBOARD_H_
