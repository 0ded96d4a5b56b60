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

#include "ecobee/factor_table.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ecobee/csv.h"
#include "ecobee/digest.h"

namespace ecobee {
namespace {

constexpr std::string_view kFilePrefix = "factors_";
constexpr std::string_view kFileSuffix = ".csv";

std::string FormatWeight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

struct FactorFile {
  std::filesystem::path path;
  std::string domain;
};

std::vector<FactorFile> ListFactorFiles(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError,
                "factor directory not found: " + dir.string());
  }
  std::vector<FactorFile> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.size() <= kFilePrefix.size() + kFileSuffix.size()) continue;
    if (!name.starts_with(kFilePrefix) || !name.ends_with(kFileSuffix)) continue;
    std::string domain = name.substr(
        kFilePrefix.size(), name.size() - kFilePrefix.size() - kFileSuffix.size());
    files.push_back(FactorFile{entry.path(), std::move(domain)});
  }
  std::sort(files.begin(), files.end(),
            [](const FactorFile& a, const FactorFile& b) { return a.path < b.path; });
  return files;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

FactorTable FactorTable::FromRows(std::vector<FactorRow> rows) {
  FactorTable table;
  for (auto& row : rows) {
    if (!IsLowerSnakeToken(row.domain) || !IsLowerSnakeToken(row.option_key)) {
      throw Error(ErrorCode::kMalformedCsv,
                  "domain and option_key must be lower-snake tokens: '" +
                      row.domain + "', '" + row.option_key + "'");
    }
    for (Boundary b : kAllBoundaries) {
      double w = row.weights[Index(b)];
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorCode::kNegativeWeight,
                    row.domain + "/" + row.option_key + ": weight for " +
                        std::string(BoundaryCode(b)) +
                        " must be finite and non-negative");
      }
    }
    Key key{row.domain, row.option_key};
    if (table.rows_.contains(key)) {
      throw Error(ErrorCode::kDuplicateRow,
                  "duplicate row " + row.domain + "/" + row.option_key);
    }
    table.domains_.insert(row.domain);
    auto [it, inserted] = table.domain_max_.try_emplace(row.domain, row.weights);
    if (!inserted) {
      for (std::size_t i = 0; i < kBoundaryCount; ++i) {
        it->second[i] = std::max(it->second[i], row.weights[i]);
      }
    }
    table.rows_.emplace(std::move(key), row.weights);
  }
  if (table.rows_.empty()) {
    throw Error(ErrorCode::kEmptyDomain, "factor table has no rows");
  }

  std::string canonical;
  for (const auto& [key, weights] : table.rows_) {
    canonical += key.first + "," + key.second;
    for (double w : weights) canonical += "," + FormatWeight(w);
    canonical += "\n";
  }
  table.version_ = Sha256Hex(canonical).substr(0, 12);
  return table;
}

bool FactorTable::HasDomain(std::string_view domain) const {
  return domains_.find(domain) != domains_.end();
}

bool FactorTable::HasOption(std::string_view domain,
                            std::string_view option_key) const {
  return rows_.find(Key{std::string(domain), std::string(option_key)}) !=
         rows_.end();
}

const PerBoundary& FactorTable::Weights(std::string_view domain,
                                        std::string_view option_key) const {
  auto it = rows_.find(Key{std::string(domain), std::string(option_key)});
  if (it == rows_.end()) {
    if (!HasDomain(domain)) {
      throw Error(ErrorCode::kUnknownDomain,
                  "unknown domain '" + std::string(domain) + "'");
    }
    throw Error(ErrorCode::kUnknownOption,
                "unknown option '" + std::string(option_key) + "' in domain '" +
                    std::string(domain) + "'");
  }
  return it->second;
}

const PerBoundary& FactorTable::DomainMax(std::string_view domain) const {
  auto it = domain_max_.find(domain);
  if (it == domain_max_.end()) {
    throw Error(ErrorCode::kUnknownDomain,
                "unknown domain '" + std::string(domain) + "'");
  }
  return it->second;
}

std::vector<std::string> FactorTable::Options(std::string_view domain) const {
  std::vector<std::string> out;
  for (const auto& [key, weights] : rows_) {
    if (key.first == domain) out.push_back(key.second);
  }
  return out;
}

std::vector<FactorRow> FactorTable::Rows() const {
  std::vector<FactorRow> out;
  out.reserve(rows_.size());
  for (const auto& [key, weights] : rows_) {
    out.push_back(FactorRow{key.first, key.second, weights});
  }
  return out;
}

std::string FactorDiagnostic::ToString() const {
  std::string out = file;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": " + std::string(ErrorCodeName(code)) + ": " + message;
  return out;
}

std::vector<std::string> FactorCsvHeader() {
  std::vector<std::string> header = {"domain", "option_key"};
  for (Boundary b : kAllBoundaries) header.emplace_back(BoundaryCode(b));
  return header;
}

std::vector<FactorRow> ParseFactorCsv(std::string_view text,
                                      const std::string& file_name,
                                      std::string_view expected_domain,
                                      std::vector<FactorDiagnostic>& diagnostics) {
  auto report = [&](std::size_t line, ErrorCode code, std::string message) {
    diagnostics.push_back(FactorDiagnostic{file_name, line, code, std::move(message)});
  };

  CsvFile csv;
  try {
    csv = CsvFile::Parse(text, file_name);
  } catch (const Error& e) {
    report(0, e.code(), e.what());
    return {};
  }

  auto domain_col = csv.column("domain");
  auto option_col = csv.column("option_key");
  std::array<std::size_t, kBoundaryCount> boundary_cols{};
  bool header_ok = true;
  if (!domain_col) {
    report(1, ErrorCode::kMissingColumn, "missing column 'domain'");
    header_ok = false;
  }
  if (!option_col) {
    report(1, ErrorCode::kMissingColumn, "missing column 'option_key'");
    header_ok = false;
  }
  for (Boundary b : kAllBoundaries) {
    auto col = csv.column(BoundaryCode(b));
    if (!col) {
      report(1, ErrorCode::kMissingColumn,
             "missing column '" + std::string(BoundaryCode(b)) + "'");
      header_ok = false;
    } else {
      boundary_cols[Index(b)] = *col;
    }
  }
  if (!header_ok) return {};

  std::vector<FactorRow> rows;
  std::set<std::string> seen_options;
  for (const CsvRow& raw : csv.rows()) {
    if (raw.fields.size() != csv.header().size()) {
      report(raw.line, ErrorCode::kMalformedCsv,
             "expected " + std::to_string(csv.header().size()) + " fields, got " +
                 std::to_string(raw.fields.size()));
      continue;
    }
    FactorRow row;
    row.domain = raw.fields[*domain_col];
    row.option_key = raw.fields[*option_col];
    if (row.domain != expected_domain) {
      report(raw.line, ErrorCode::kMalformedCsv,
             "row domain '" + row.domain + "' does not match file domain '" +
                 std::string(expected_domain) + "'");
      continue;
    }
    if (!IsLowerSnakeToken(row.option_key)) {
      report(raw.line, ErrorCode::kMalformedCsv,
             "option_key '" + row.option_key + "' is not a lower-snake token");
      continue;
    }
    bool row_ok = true;
    for (Boundary b : kAllBoundaries) {
      const std::string& field = raw.fields[boundary_cols[Index(b)]];
      auto value = ParseDouble(field);
      if (!value || !std::isfinite(*value)) {
        report(raw.line, ErrorCode::kMalformedCsv,
               "weight for " + std::string(BoundaryCode(b)) + " is not a number: '" +
                   field + "'");
        row_ok = false;
      } else if (*value < 0.0) {
        report(raw.line, ErrorCode::kNegativeWeight,
               "negative weight " + field + " for " + std::string(BoundaryCode(b)));
        row_ok = false;
      } else {
        row.weights[Index(b)] = *value;
      }
    }
    if (!row_ok) continue;
    if (!seen_options.insert(row.option_key).second) {
      report(raw.line, ErrorCode::kDuplicateRow,
             "duplicate row " + row.domain + "/" + row.option_key);
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (csv.rows().empty()) {
    report(0, ErrorCode::kEmptyDomain,
           "domain '" + std::string(expected_domain) + "' has no options");
  }
  return rows;
}

namespace {

std::vector<FactorRow> ScanDirectory(const std::filesystem::path& dir,
                                     std::vector<FactorDiagnostic>& diagnostics) {
  auto files = ListFactorFiles(dir);
  if (files.empty()) {
    diagnostics.push_back(FactorDiagnostic{dir.string(), 0, ErrorCode::kEmptyDomain,
                                           "no factors_<domain>.csv files found"});
    return {};
  }
  std::vector<FactorRow> all;
  for (const auto& file : files) {
    std::string name = file.path.string();
    if (!IsLowerSnakeToken(file.domain)) {
      diagnostics.push_back(FactorDiagnostic{name, 0, ErrorCode::kMalformedCsv,
                                             "domain '" + file.domain +
                                                 "' is not a lower-snake token"});
      continue;
    }
    auto rows = ParseFactorCsv(ReadFile(file.path), name, file.domain, diagnostics);
    std::move(rows.begin(), rows.end(), std::back_inserter(all));
  }
  return all;
}

}  // namespace

std::vector<FactorDiagnostic> ValidateFactorDirectory(
    const std::filesystem::path& dir) {
  std::vector<FactorDiagnostic> diagnostics;
  try {
    ScanDirectory(dir, diagnostics);
  } catch (const Error& e) {
    diagnostics.push_back(FactorDiagnostic{dir.string(), 0, e.code(), e.what()});
  }
  return diagnostics;
}

FactorTable load_factor_tables(const std::filesystem::path& dir) {
  std::vector<FactorDiagnostic> diagnostics;
  auto rows = ScanDirectory(dir, diagnostics);
  if (!diagnostics.empty()) {
    const auto& first = diagnostics.front();
    throw Error(first.code, first.ToString());
  }
  return FactorTable::FromRows(std::move(rows));
}

}  // namespace ecobee
