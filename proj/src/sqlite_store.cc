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

#include <sqlite3.h>

#include <mutex>

#include "ecobee/error.h"
#include "ecobee/leaderboard.h"

namespace ecobee {
namespace {

struct DbCloser {
  void operator()(sqlite3* db) const { sqlite3_close(db); }
};
struct StmtFinalizer {
  void operator()(sqlite3_stmt* stmt) const { sqlite3_finalize(stmt); }
};
using Db = std::unique_ptr<sqlite3, DbCloser>;
using Stmt = std::unique_ptr<sqlite3_stmt, StmtFinalizer>;

std::string BoundaryColumns() {
  std::string cols;
  for (Boundary b : kAllBoundaries) {
    cols += ", ";
    cols += BoundaryCode(b);
  }
  return cols;
}

}  // namespace

struct SqliteLeaderboardStore::Impl {
  Db db;
  mutable std::mutex mutex;

  void Check(int rc, const char* what) const {
    if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW) {
      throw Error(ErrorCode::kIoError,
                  std::string(what) + ": " + sqlite3_errmsg(db.get()));
    }
  }

  void Exec(const std::string& sql) const {
    char* err = nullptr;
    int rc = sqlite3_exec(db.get(), sql.c_str(), nullptr, nullptr, &err);
    if (rc != SQLITE_OK) {
      std::string message = err ? err : "unknown error";
      sqlite3_free(err);
      throw Error(ErrorCode::kIoError, "sqlite: " + message);
    }
  }

  Stmt Prepare(const std::string& sql) const {
    sqlite3_stmt* raw = nullptr;
    Check(sqlite3_prepare_v2(db.get(), sql.c_str(), -1, &raw, nullptr), "prepare");
    return Stmt(raw);
  }
};

SqliteLeaderboardStore::SqliteLeaderboardStore(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(path.string().c_str(), &raw,
                           SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE |
                               SQLITE_OPEN_FULLMUTEX,
                           nullptr);
  impl_->db.reset(raw);
  if (rc != SQLITE_OK) {
    throw Error(ErrorCode::kIoError, "cannot open leaderboard database " +
                                         path.string());
  }
  std::string columns;
  for (Boundary b : kAllBoundaries) {
    columns += ", " + std::string(BoundaryCode(b)) + " REAL NOT NULL";
  }
  impl_->Exec(
      "CREATE TABLE IF NOT EXISTS leaderboard ("
      "pseudonym TEXT PRIMARY KEY, campus TEXT NOT NULL, "
      "composite REAL NOT NULL" +
      columns + ", submitted_at INTEGER NOT NULL);");
  impl_->Exec(
      "CREATE TABLE IF NOT EXISTS feedback ("
      "pseudonym TEXT NOT NULL, body TEXT NOT NULL, "
      "submitted_at INTEGER NOT NULL);");
}

SqliteLeaderboardStore::~SqliteLeaderboardStore() = default;

void SqliteLeaderboardStore::Upsert(const LeaderboardEntry& entry) {
  std::lock_guard lock(impl_->mutex);
  std::string placeholders;
  std::string updates = "campus = excluded.campus, composite = excluded.composite";
  for (Boundary b : kAllBoundaries) {
    placeholders += ", ?";
    std::string code(BoundaryCode(b));
    updates += ", " + code + " = excluded." + code;
  }
  updates += ", submitted_at = excluded.submitted_at";
  Stmt stmt = impl_->Prepare(
      "INSERT INTO leaderboard (pseudonym, campus, composite" + BoundaryColumns() +
      ", submitted_at) VALUES (?, ?, ?" + placeholders +
      ", ?) ON CONFLICT(pseudonym) DO UPDATE SET " + updates + ";");
  int i = 1;
  sqlite3_bind_text(stmt.get(), i++, entry.pseudonym.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(stmt.get(), i++, entry.campus.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_double(stmt.get(), i++, entry.composite);
  for (double v : entry.boundary_scores.values()) {
    sqlite3_bind_double(stmt.get(), i++, v);
  }
  sqlite3_bind_int64(stmt.get(), i++, entry.submitted_at);
  impl_->Check(sqlite3_step(stmt.get()), "upsert leaderboard");
}

void SqliteLeaderboardStore::AddFeedback(const FeedbackRecord& record) {
  std::lock_guard lock(impl_->mutex);
  Stmt stmt = impl_->Prepare(
      "INSERT INTO feedback (pseudonym, body, submitted_at) VALUES (?, ?, ?);");
  sqlite3_bind_text(stmt.get(), 1, record.pseudonym.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_text(stmt.get(), 2, record.body.c_str(), -1, SQLITE_TRANSIENT);
  sqlite3_bind_int64(stmt.get(), 3, record.submitted_at);
  impl_->Check(sqlite3_step(stmt.get()), "insert feedback");
}

std::vector<LeaderboardEntry> SqliteLeaderboardStore::Entries() const {
  std::lock_guard lock(impl_->mutex);
  Stmt stmt = impl_->Prepare("SELECT pseudonym, campus, composite" +
                             BoundaryColumns() +
                             ", submitted_at FROM leaderboard ORDER BY rowid;");
  std::vector<LeaderboardEntry> out;
  int rc;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    LeaderboardEntry e;
    auto text = [&](int col) {
      const unsigned char* t = sqlite3_column_text(stmt.get(), col);
      return t ? std::string(reinterpret_cast<const char*>(t)) : std::string();
    };
    e.pseudonym = text(0);
    e.campus = text(1);
    e.composite = sqlite3_column_double(stmt.get(), 2);
    PerBoundary scores{};
    for (std::size_t b = 0; b < kBoundaryCount; ++b) {
      scores[b] = sqlite3_column_double(stmt.get(), 3 + static_cast<int>(b));
    }
    e.boundary_scores = BoundaryScores(scores);
    e.submitted_at = sqlite3_column_int64(stmt.get(), 3 + kBoundaryCount);
    out.push_back(std::move(e));
  }
  impl_->Check(rc, "read leaderboard");
  return out;
}

std::size_t SqliteLeaderboardStore::FeedbackCount() const {
  std::lock_guard lock(impl_->mutex);
  Stmt stmt = impl_->Prepare("SELECT COUNT(*) FROM feedback;");
  impl_->Check(sqlite3_step(stmt.get()), "count feedback");
  return static_cast<std::size_t>(sqlite3_column_int64(stmt.get(), 0));
}

}  // namespace ecobee
