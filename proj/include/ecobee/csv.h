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

#ifndef ECOBEE_CSV_H_
#define ECOBEE_CSV_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecobee {

// Minimal reader for the token-only CSV files this service consumes
// (factor tables, catalogs, registries). No quoting; fields are trimmed.
struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

class CsvFile {
 public:
  static CsvFile Read(const std::filesystem::path& path);
  static CsvFile Parse(std::string_view text, std::string source_name);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }
  std::optional<std::size_t> column(std::string_view name) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<CsvRow> rows_;
};

std::vector<std::string> SplitCsvLine(std::string_view line, char sep = ',');
std::string Trim(std::string_view s);
// Strict decimal parse of the whole field; nullopt on trailing garbage.
std::optional<double> ParseDouble(std::string_view s);

}  // namespace ecobee

#endif  // ECOBEE_CSV_H_
