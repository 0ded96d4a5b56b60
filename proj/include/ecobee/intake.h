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

#ifndef ECOBEE_INTAKE_H_
#define ECOBEE_INTAKE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecobee/boundary.h"
#include "ecobee/factor_table.h"

namespace ecobee {

// A structured label produced by the vision adapter.
struct LabelledItem {
  std::string domain;
  std::string option_key;
  double confidence = 0.0;
  std::optional<std::string> caption;

  bool operator==(const LabelledItem&) const = default;
};

// Throws kInvalidArgument unless tokens are lower-snake and confidence is in
// [0, 1].
void ValidateLabelledItem(const LabelledItem& item);

struct BarcodeRecord {
  std::string code;
  std::string domain;
  std::string option_key;
};

bool IsWellFormedBarcode(std::string_view code);

// Exact-match code -> (domain, option_key) lookup, loaded from a
// `code,domain,option_key` CSV.
class BarcodeRegistry {
 public:
  BarcodeRegistry() = default;
  explicit BarcodeRegistry(std::vector<BarcodeRecord> records);
  static BarcodeRegistry Load(const std::filesystem::path& path);

  const BarcodeRecord* Find(std::string_view code) const;
  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::string, BarcodeRecord, std::less<>> records_;
};

// trim, lower-case, spaces and hyphens to underscores.
std::string NormaliseOptionKey(std::string_view raw);

// One quiz item per answered domain.
std::vector<CanonicalItem> canonicalise_quiz(
    const std::map<std::string, std::string>& quiz, const FactorTable& table);

CanonicalItem normalise_barcode(std::string_view code,
                                const BarcodeRegistry& registry);

inline constexpr double kDefaultMinConfidence = 0.5;

struct MergeResult {
  std::vector<CanonicalItem> items;
  std::size_t dropped_low_confidence = 0;
  std::size_t dropped_duplicates = 0;
};

// Appends labelled items with confidence >= min_confidence after the quiz
// items, skipping any whose (domain, option_key) the quiz already reported.
MergeResult merge_items(std::span<const CanonicalItem> quiz_items,
                        std::span<const LabelledItem> labelled_items,
                        double min_confidence = kDefaultMinConfidence);

}  // namespace ecobee

#endif  // ECOBEE_INTAKE_H_
