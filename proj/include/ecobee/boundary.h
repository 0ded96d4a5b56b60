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

#ifndef ECOBEE_BOUNDARY_H_
#define ECOBEE_BOUNDARY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecobee {

// The nine planetary boundaries in canonical order. The numeric value is the
// index used by every per-boundary array in this library.
enum class Boundary : std::uint8_t {
  kClimateChange = 0,
  kBiosphereIntegrity,
  kBiogeochemicalFlows,
  kLandSystemChange,
  kFreshwaterUse,
  kOceanAcidification,
  kAtmosphericAerosolLoading,
  kStratosphericOzoneDepletion,
  kNovelEntities,
};

inline constexpr std::size_t kBoundaryCount = 9;

inline constexpr std::array<Boundary, kBoundaryCount> kAllBoundaries = {
    Boundary::kClimateChange,          Boundary::kBiosphereIntegrity,
    Boundary::kBiogeochemicalFlows,    Boundary::kLandSystemChange,
    Boundary::kFreshwaterUse,          Boundary::kOceanAcidification,
    Boundary::kAtmosphericAerosolLoading,
    Boundary::kStratosphericOzoneDepletion,
    Boundary::kNovelEntities,
};

constexpr std::size_t Index(Boundary b) { return static_cast<std::size_t>(b); }

// Stable lower-snake code used in JSON payloads and CSV headers.
std::string_view BoundaryCode(Boundary b);
std::optional<Boundary> ParseBoundary(std::string_view code);

// The nine codes in canonical order.
std::vector<std::string> boundary_codes();

using PerBoundary = std::array<double, kBoundaryCount>;

// Accumulated (pre-normalisation) pressure per boundary. Values are finite
// and non-negative.
class PressureVector {
 public:
  PressureVector() { values_.fill(0.0); }
  explicit PressureVector(const PerBoundary& values);

  double operator[](Boundary b) const { return values_[Index(b)]; }
  const PerBoundary& values() const { return values_; }

  PressureVector operator+(const PressureVector& other) const;
  PressureVector& operator+=(const PressureVector& other);
  bool operator==(const PressureVector&) const = default;

 private:
  PerBoundary values_;
};

// Per-boundary score in [0, 100]. Higher means less boundary pressure.
class BoundaryScores {
 public:
  explicit BoundaryScores(const PerBoundary& values);
  // Throws unless every one of the nine codes is present exactly once.
  static BoundaryScores FromCodes(const std::map<std::string, double>& by_code);
  static BoundaryScores Uniform(double value);

  double operator[](Boundary b) const { return values_[Index(b)]; }
  const PerBoundary& values() const { return values_; }
  std::map<std::string, double> ToCodes() const;

  // The k lowest-scoring boundaries, ties broken by canonical order.
  std::vector<Boundary> Lowest(std::size_t k) const;

  bool operator==(const BoundaryScores&) const = default;

 private:
  PerBoundary values_;
};

enum class ItemSource { kQuiz, kVision, kBarcode };

std::string_view ItemSourceName(ItemSource source);

struct CanonicalItem {
  std::string domain;
  std::string option_key;
  double quantity = 1.0;
  ItemSource source = ItemSource::kQuiz;

  bool operator==(const CanonicalItem&) const = default;
};

// Image bytes held only for the duration of a request. Move-only and
// deliberately without any serialisation support.
class TransientImage {
 public:
  TransientImage() = default;
  explicit TransientImage(std::vector<std::uint8_t> bytes)
      : bytes_(std::move(bytes)) {}
  TransientImage(const TransientImage&) = delete;
  TransientImage& operator=(const TransientImage&) = delete;
  TransientImage(TransientImage&& other) noexcept;
  TransientImage& operator=(TransientImage&& other) noexcept;
  ~TransientImage();

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  bool empty() const { return bytes_.empty(); }
  // Overwrites and frees the buffer.
  void Release();

 private:
  std::vector<std::uint8_t> bytes_;
};

struct IntakeProfile {
  std::string pseudonym;
  std::string campus;
  std::string cohort;
  std::string faculty;
  std::map<std::string, std::string> quiz;
  std::optional<std::string> career_interest;
  std::vector<TransientImage> images;
  std::vector<std::string> barcodes;
};

// Non-empty and free of '@' (no email addresses as identities).
bool IsValidPseudonym(std::string_view pseudonym);
// Throws kInvalidArgument when the profile breaks its invariants.
void ValidateProfile(const IntakeProfile& profile);

// [a-z0-9_]+ tokens used for domains, option keys and action ids.
bool IsLowerSnakeToken(std::string_view token);

}  // namespace ecobee

#endif  // ECOBEE_BOUNDARY_H_
