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

#include "ecobee/intake.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ecobee/csv.h"
#include "ecobee/error.h"

namespace ecobee {

void ValidateLabelledItem(const LabelledItem& item) {
  if (!IsLowerSnakeToken(item.domain) || !IsLowerSnakeToken(item.option_key)) {
    throw Error(ErrorCode::kInvalidArgument,
                "labelled item tokens must be lower-snake: '" + item.domain +
                    "', '" + item.option_key + "'");
  }
  if (!(item.confidence >= 0.0 && item.confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "labelled item confidence must lie in [0, 1]");
  }
}

bool IsWellFormedBarcode(std::string_view code) {
  if (code.size() < 8 || code.size() > 14) return false;
  return std::all_of(code.begin(), code.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

BarcodeRegistry::BarcodeRegistry(std::vector<BarcodeRecord> records) {
  for (auto& r : records) {
    if (!IsWellFormedBarcode(r.code)) {
      throw Error(ErrorCode::kMalformedBarcode,
                  "registry barcode '" + r.code + "' is not 8-14 digits");
    }
    if (!IsLowerSnakeToken(r.domain) || !IsLowerSnakeToken(r.option_key)) {
      throw Error(ErrorCode::kMalformedCsv,
                  "registry row for " + r.code + " has non-token fields");
    }
    if (records_.contains(r.code)) {
      throw Error(ErrorCode::kDuplicateRow, "duplicate barcode " + r.code);
    }
    std::string code = r.code;
    records_.emplace(std::move(code), std::move(r));
  }
}

BarcodeRegistry BarcodeRegistry::Load(const std::filesystem::path& path) {
  CsvFile csv = CsvFile::Read(path);
  auto code_col = csv.column("code");
  auto domain_col = csv.column("domain");
  auto option_col = csv.column("option_key");
  if (!code_col || !domain_col || !option_col) {
    throw Error(ErrorCode::kMissingColumn,
                path.string() + ": header must be code,domain,option_key");
  }
  std::vector<BarcodeRecord> records;
  for (const auto& row : csv.rows()) {
    if (row.fields.size() != csv.header().size()) {
      throw Error(ErrorCode::kMalformedCsv,
                  path.string() + ":" + std::to_string(row.line) +
                      ": wrong field count");
    }
    records.push_back(BarcodeRecord{row.fields[*code_col], row.fields[*domain_col],
                                    row.fields[*option_col]});
  }
  return BarcodeRegistry(std::move(records));
}

const BarcodeRecord* BarcodeRegistry::Find(std::string_view code) const {
  auto it = records_.find(code);
  return it == records_.end() ? nullptr : &it->second;
}

std::string NormaliseOptionKey(std::string_view raw) {
  std::string out = Trim(raw);
  for (char& c : out) {
    if (c == ' ' || c == '-') {
      c = '_';
    } else {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::vector<CanonicalItem> canonicalise_quiz(
    const std::map<std::string, std::string>& quiz, const FactorTable& table) {
  std::vector<CanonicalItem> items;
  items.reserve(quiz.size());
  for (const auto& [domain, answer] : quiz) {
    if (!table.HasDomain(domain)) {
      throw Error(ErrorCode::kUnknownDomain, "unknown domain '" + domain + "'");
    }
    std::string key = NormaliseOptionKey(answer);
    if (!table.HasOption(domain, key)) {
      throw Error(ErrorCode::kUnknownOption,
                  "unknown option '" + key + "' in domain '" + domain + "'");
    }
    items.push_back(CanonicalItem{domain, std::move(key), 1.0, ItemSource::kQuiz});
  }
  return items;
}

CanonicalItem normalise_barcode(std::string_view code,
                                const BarcodeRegistry& registry) {
  if (!IsWellFormedBarcode(code)) {
    throw Error(ErrorCode::kMalformedBarcode,
                "barcode '" + std::string(code) + "' is not 8-14 digits");
  }
  const BarcodeRecord* record = registry.Find(code);
  if (record == nullptr) {
    throw Error(ErrorCode::kUnknownBarcode,
                "barcode '" + std::string(code) + "' is not in the registry");
  }
  return CanonicalItem{record->domain, record->option_key, 1.0,
                       ItemSource::kBarcode};
}

MergeResult merge_items(std::span<const CanonicalItem> quiz_items,
                        std::span<const LabelledItem> labelled_items,
                        double min_confidence) {
  MergeResult result;
  result.items.assign(quiz_items.begin(), quiz_items.end());
  for (const auto& label : labelled_items) {
    if (!(label.confidence >= min_confidence)) {
      ++result.dropped_low_confidence;
      continue;
    }
    bool duplicate = std::any_of(
        quiz_items.begin(), quiz_items.end(), [&](const CanonicalItem& q) {
          return q.domain == label.domain && q.option_key == label.option_key;
        });
    if (duplicate) {
      ++result.dropped_duplicates;
      continue;
    }
    result.items.push_back(
        CanonicalItem{label.domain, label.option_key, 1.0, ItemSource::kVision});
  }
  return result;
}

}  // namespace ecobee
