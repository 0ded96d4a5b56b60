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

#include "ecobee/leaderboard.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ecobee/error.h"

namespace ecobee {

void InMemoryLeaderboardStore::Upsert(const LeaderboardEntry& entry) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) {
    return e.pseudonym == entry.pseudonym;
  });
  if (it == entries_.end()) {
    entries_.push_back(entry);
  } else {
    *it = entry;
  }
}

void InMemoryLeaderboardStore::AddFeedback(const FeedbackRecord& record) {
  feedback_.push_back(record);
}

std::vector<LeaderboardEntry> InMemoryLeaderboardStore::Entries() const {
  return entries_;
}

std::size_t InMemoryLeaderboardStore::FeedbackCount() const {
  return feedback_.size();
}

void ValidateEntry(const LeaderboardEntry& entry, const CompositeWeights& weights) {
  if (!IsValidPseudonym(entry.pseudonym)) {
    throw Error(ErrorCode::kInvalidEntry,
                "pseudonym must be non-empty and must not contain '@'");
  }
  if (!(entry.composite >= 0.0 && entry.composite <= 100.0)) {
    throw Error(ErrorCode::kInvalidEntry, "composite must lie in [0, 100]");
  }
  double expected = composite_exact(entry.boundary_scores.values(), weights);
  if (std::abs(expected - entry.composite) > kConsistencyTolerance + 1e-9) {
    throw Error(ErrorCode::kConsistencyError,
                "composite does not match the submitted boundary scores");
  }
}

Leaderboard::Leaderboard(std::shared_ptr<LeaderboardStore> store,
                         CompositeWeights weights)
    : store_(std::move(store)), weights_(weights) {
  if (weights_) ValidateCompositeWeights(*weights_);
}

SubmitAck Leaderboard::submit_score(const LeaderboardEntry& entry) {
  ValidateEntry(entry, weights_);
  std::unique_lock lock(mutex_);
  store_->Upsert(entry);
  SubmitAck ack;
  for (const auto& e : store_->Entries()) {
    if (e.composite > entry.composite) ++ack.rank_estimate;
  }
  return ack;
}

void Leaderboard::submit_feedback(const FeedbackRecord& record) {
  if (!IsValidPseudonym(record.pseudonym)) {
    throw Error(ErrorCode::kInvalidEntry,
                "pseudonym must be non-empty and must not contain '@'");
  }
  std::unique_lock lock(mutex_);
  store_->AddFeedback(record);
}

LeaderboardSummary Summarise(const std::vector<LeaderboardEntry>& entries) {
  LeaderboardSummary s;
  s.n = entries.size();
  if (entries.empty()) return s;
  const double n = static_cast<double>(entries.size());

  double sum = 0.0;
  double top = entries.front().composite;
  PerBoundary boundary_sums{};
  for (const auto& e : entries) {
    sum += e.composite;
    top = std::max(top, e.composite);
    for (std::size_t i = 0; i < kBoundaryCount; ++i) {
      boundary_sums[i] += e.boundary_scores.values()[i];
    }
  }
  double mean = sum / n;
  double squares = 0.0;
  for (const auto& e : entries) {
    double dev = e.composite - mean;
    squares += dev * dev;
  }
  for (double& b : boundary_sums) b /= n;

  s.top_composite = top;
  s.mean_composite = mean;
  s.sd_composite = std::sqrt(squares / n);
  s.per_boundary_means = boundary_sums;
  return s;
}

LeaderboardSummary Leaderboard::summary(
    const std::optional<std::string>& campus_filter, std::size_t k_min) const {
  std::vector<LeaderboardEntry> entries;
  {
    std::shared_lock lock(mutex_);
    entries = store_->Entries();
  }
  if (campus_filter) {
    std::erase_if(entries, [&](const LeaderboardEntry& e) {
      return e.campus != *campus_filter;
    });
  }
  LeaderboardSummary s = Summarise(entries);
  s.campus_filter = campus_filter;
  if (s.n < std::max<std::size_t>(k_min, 1)) {
    s.top_composite.reset();
    s.mean_composite.reset();
    s.sd_composite.reset();
    s.per_boundary_means.reset();
  }
  return s;
}

std::vector<PublicEntry> Leaderboard::top_n(
    std::size_t n, const std::optional<std::string>& campus_filter) const {
  std::vector<LeaderboardEntry> entries;
  {
    std::shared_lock lock(mutex_);
    entries = store_->Entries();
  }
  if (campus_filter) {
    std::erase_if(entries, [&](const LeaderboardEntry& e) {
      return e.campus != *campus_filter;
    });
  }
  std::sort(entries.begin(), entries.end(),
            [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (a.composite != b.composite) return a.composite > b.composite;
              if (a.submitted_at != b.submitted_at) {
                return a.submitted_at < b.submitted_at;
              }
              return a.pseudonym < b.pseudonym;
            });
  std::vector<PublicEntry> out;
  for (std::size_t i = 0; i < entries.size() && i < n; ++i) {
    out.push_back(PublicEntry{entries[i].pseudonym, entries[i].composite});
  }
  return out;
}

std::size_t Leaderboard::size() const {
  std::shared_lock lock(mutex_);
  return store_->Entries().size();
}

std::size_t Leaderboard::feedback_count() const {
  std::shared_lock lock(mutex_);
  return store_->FeedbackCount();
}

}  // namespace ecobee
