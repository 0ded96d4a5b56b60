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

#include "ecobee/boundary.h"

#include <algorithm>
#include <cmath>

#include "ecobee/error.h"

namespace ecobee {
namespace {

constexpr std::array<std::string_view, kBoundaryCount> kCodes = {
    "climate_change",
    "biosphere_integrity",
    "biogeochemical_flows",
    "land_system_change",
    "freshwater_use",
    "ocean_acidification",
    "atmospheric_aerosol_loading",
    "stratospheric_ozone_depletion",
    "novel_entities",
};

}  // namespace

std::string_view BoundaryCode(Boundary b) { return kCodes[Index(b)]; }

std::optional<Boundary> ParseBoundary(std::string_view code) {
  for (Boundary b : kAllBoundaries) {
    if (kCodes[Index(b)] == code) return b;
  }
  return std::nullopt;
}

std::vector<std::string> boundary_codes() {
  return {kCodes.begin(), kCodes.end()};
}

PressureVector::PressureVector(const PerBoundary& values) : values_(values) {
  for (Boundary b : kAllBoundaries) {
    double v = values_[Index(b)];
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pressure for " + std::string(BoundaryCode(b)) +
                      " must be finite and non-negative");
    }
  }
}

PressureVector PressureVector::operator+(const PressureVector& other) const {
  PressureVector out = *this;
  out += other;
  return out;
}

PressureVector& PressureVector::operator+=(const PressureVector& other) {
  for (std::size_t i = 0; i < kBoundaryCount; ++i) {
    values_[i] += other.values_[i];
  }
  return *this;
}

BoundaryScores::BoundaryScores(const PerBoundary& values) : values_(values) {
  for (Boundary b : kAllBoundaries) {
    double v = values_[Index(b)];
    if (!(v >= 0.0 && v <= 100.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "score for " + std::string(BoundaryCode(b)) +
                      " must lie in [0, 100]");
    }
  }
}

BoundaryScores BoundaryScores::FromCodes(
    const std::map<std::string, double>& by_code) {
  PerBoundary values{};
  std::array<bool, kBoundaryCount> seen{};
  for (const auto& [code, value] : by_code) {
    auto b = ParseBoundary(code);
    if (!b) {
      throw Error(ErrorCode::kInvalidArgument, "unknown boundary '" + code + "'");
    }
    values[Index(*b)] = value;
    seen[Index(*b)] = true;
  }
  for (Boundary b : kAllBoundaries) {
    if (!seen[Index(b)]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "missing boundary '" + std::string(BoundaryCode(b)) + "'");
    }
  }
  return BoundaryScores(values);
}

BoundaryScores BoundaryScores::Uniform(double value) {
  PerBoundary values;
  values.fill(value);
  return BoundaryScores(values);
}

std::map<std::string, double> BoundaryScores::ToCodes() const {
  std::map<std::string, double> out;
  for (Boundary b : kAllBoundaries) {
    out.emplace(std::string(BoundaryCode(b)), values_[Index(b)]);
  }
  return out;
}

std::vector<Boundary> BoundaryScores::Lowest(std::size_t k) const {
  std::vector<Boundary> order(kAllBoundaries.begin(), kAllBoundaries.end());
  std::stable_sort(order.begin(), order.end(), [&](Boundary a, Boundary b) {
    return values_[Index(a)] < values_[Index(b)];
  });
  order.resize(std::min(k, order.size()));
  return order;
}

std::string_view ItemSourceName(ItemSource source) {
  switch (source) {
    case ItemSource::kQuiz: return "quiz";
    case ItemSource::kVision: return "vision";
    case ItemSource::kBarcode: return "barcode";
  }
  return "quiz";
}

TransientImage::TransientImage(TransientImage&& other) noexcept
    : bytes_(std::move(other.bytes_)) {
  other.bytes_.clear();
}

TransientImage& TransientImage::operator=(TransientImage&& other) noexcept {
  if (this != &other) {
    Release();
    bytes_ = std::move(other.bytes_);
    other.bytes_.clear();
  }
  return *this;
}

TransientImage::~TransientImage() { Release(); }

void TransientImage::Release() {
  std::fill(bytes_.begin(), bytes_.end(), std::uint8_t{0});
  bytes_.clear();
  bytes_.shrink_to_fit();
}

bool IsValidPseudonym(std::string_view pseudonym) {
  return !pseudonym.empty() && pseudonym.find('@') == std::string_view::npos;
}

void ValidateProfile(const IntakeProfile& profile) {
  if (!IsValidPseudonym(profile.pseudonym)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pseudonym must be non-empty and must not contain '@'");
  }
}

bool IsLowerSnakeToken(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace ecobee
