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

#ifndef ECOBEE_FACTOR_TABLE_H_
#define ECOBEE_FACTOR_TABLE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecobee/boundary.h"
#include "ecobee/error.h"

namespace ecobee {

struct FactorRow {
  std::string domain;
  std::string option_key;
  PerBoundary weights{};
};

// Curated (domain, option_key) -> per-boundary pressure weights. Immutable
// once built; every weight finite and >= 0, every domain has at least one
// option, no duplicate rows.
class FactorTable {
 public:
  static FactorTable FromRows(std::vector<FactorRow> rows);

  bool HasDomain(std::string_view domain) const;
  bool HasOption(std::string_view domain, std::string_view option_key) const;
  // Throws kUnknownOption (or kUnknownDomain) when absent.
  const PerBoundary& Weights(std::string_view domain,
                             std::string_view option_key) const;
  // Per-boundary maximum over the domain's options.
  const PerBoundary& DomainMax(std::string_view domain) const;

  const std::set<std::string, std::less<>>& domains() const { return domains_; }
  std::vector<std::string> Options(std::string_view domain) const;
  // Rows sorted by (domain, option_key).
  std::vector<FactorRow> Rows() const;
  std::size_t size() const { return rows_.size(); }

  // Content hash (first 12 hex chars of SHA-256 over the canonical rows).
  const std::string& version() const { return version_; }

 private:
  using Key = std::pair<std::string, std::string>;
  std::map<Key, PerBoundary, std::less<>> rows_;
  std::set<std::string, std::less<>> domains_;
  std::map<std::string, PerBoundary, std::less<>> domain_max_;
  std::string version_;
};

// One validation finding, located by file and 1-based line (0 = whole file).
struct FactorDiagnostic {
  std::string file;
  std::size_t line = 0;
  ErrorCode code = ErrorCode::kMalformedCsv;
  std::string message;

  std::string ToString() const;
};

// Expected CSV header: domain,option_key,<nine boundary codes>.
std::vector<std::string> FactorCsvHeader();

// Parses one factors_<domain>.csv text. Findings are appended to
// `diagnostics`; valid rows are returned.
std::vector<FactorRow> ParseFactorCsv(std::string_view text,
                                      const std::string& file_name,
                                      std::string_view expected_domain,
                                      std::vector<FactorDiagnostic>& diagnostics);

// Checks every factors_<domain>.csv in `dir`, reporting all findings.
std::vector<FactorDiagnostic> ValidateFactorDirectory(
    const std::filesystem::path& dir);

// Loads and validates every factors_<domain>.csv in `dir`. Throws the first
// finding as an Error whose message carries file and line.
FactorTable load_factor_tables(const std::filesystem::path& dir);

}  // namespace ecobee

#endif  // ECOBEE_FACTOR_TABLE_H_
