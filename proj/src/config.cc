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

#include "ecobee/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecobee/csv.h"
#include "ecobee/error.h"

namespace ecobee {
namespace {

constexpr std::string_view kKeys[] = {
    "factor_dir",       "action_catalog",   "opportunity_catalog",
    "barcode_registry", "model_file",       "leaderboard_db",
    "k_min",            "composite_weights", "seed",
    "p",                "q",                "walks_per_node",
    "walk_length",      "dimension",        "window",
    "negatives",        "epochs",           "learning_rate",
    "min_confidence",   "model_backend",    "model_base_url",
    "model_path",       "model_name",       "model_api_key",
    "model_timeout_ms", "max_image_bytes",  "max_in_flight",
    "listen_host",      "listen_port",      "stub_replies",
};

bool IsKnownKey(std::string_view key) {
  return std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys);
}

template <typename T>
T ParseUnsigned(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kInvalidConfig, "config '" + key + "' must be an integer");
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& value) {
  auto v = ParseDouble(value);
  if (!v) throw Error(ErrorCode::kInvalidConfig, "config '" + key + "' must be a number");
  return *v;
}

}  // namespace

std::map<std::string, std::string> ParseKeyValueText(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = Trim(trimmed.substr(0, eq));
    if (!IsKnownKey(key)) {
      throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
    }
    out[key] = Trim(trimmed.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> ServiceConfig::WithEnvironment(
    std::map<std::string, std::string> values) {
  for (std::string_view key : kKeys) {
    std::string name = "ECOBEE_";
    for (char c : key) name.push_back(static_cast<char>(std::toupper(c)));
    if (const char* v = std::getenv(name.c_str()); v != nullptr) {
      values[std::string(key)] = v;
    }
  }
  return values;
}

ServiceConfig ServiceConfig::Load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot open config " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto values = WithEnvironment(ParseKeyValueText(buffer.str()));
  return FromMap(values, file.parent_path());
}

ServiceConfig ServiceConfig::FromMap(const std::map<std::string, std::string>& values,
                                     const std::filesystem::path& base_dir) {
  ServiceConfig c;
  auto get = [&](const char* key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  auto path = [&](const char* key, std::filesystem::path& target) {
    if (const auto* v = get(key)) {
      if (v->empty()) {
        target.clear();
      } else {
        std::filesystem::path p(*v);
        target = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
      }
    }
  };
  path("factor_dir", c.factor_dir);
  path("action_catalog", c.action_catalog);
  path("opportunity_catalog", c.opportunity_catalog);
  path("barcode_registry", c.barcode_registry);
  path("model_file", c.model_file);
  path("leaderboard_db", c.leaderboard_db);
  path("stub_replies", c.stub_replies);

  if (const auto* v = get("k_min")) c.k_min = ParseUnsigned<std::size_t>("k_min", *v);
  if (const auto* v = get("composite_weights"); v && !v->empty()) {
    auto parts = SplitCsvLine(*v);
    if (parts.size() != kBoundaryCount) {
      throw Error(ErrorCode::kInvalidConfig, "composite_weights needs nine values");
    }
    PerBoundary w{};
    for (std::size_t i = 0; i < kBoundaryCount; ++i) {
      w[i] = ParseReal("composite_weights", parts[i]);
    }
    ValidateCompositeWeights(w);
    c.composite_weights = w;
  }
  if (const auto* v = get("seed")) c.seed = ParseUnsigned<std::uint64_t>("seed", *v);
  auto& h = c.hyperparameters;
  if (const auto* v = get("p")) h.p = ParseReal("p", *v);
  if (const auto* v = get("q")) h.q = ParseReal("q", *v);
  if (const auto* v = get("walks_per_node")) {
    h.walks_per_node = ParseUnsigned<std::size_t>("walks_per_node", *v);
  }
  if (const auto* v = get("walk_length")) {
    h.walk_length = ParseUnsigned<std::size_t>("walk_length", *v);
  }
  if (const auto* v = get("dimension")) h.dimension = ParseUnsigned<std::size_t>("dimension", *v);
  if (const auto* v = get("window")) h.window = ParseUnsigned<std::size_t>("window", *v);
  if (const auto* v = get("negatives")) h.negatives = ParseUnsigned<std::size_t>("negatives", *v);
  if (const auto* v = get("epochs")) h.epochs = ParseUnsigned<std::size_t>("epochs", *v);
  if (const auto* v = get("learning_rate")) h.learning_rate = ParseReal("learning_rate", *v);
  if (const auto* v = get("min_confidence")) c.min_confidence = ParseReal("min_confidence", *v);
  if (const auto* v = get("model_backend")) c.model_backend = *v;
  if (const auto* v = get("model_base_url")) c.model_settings.base_url = *v;
  if (const auto* v = get("model_path")) c.model_settings.path = *v;
  if (const auto* v = get("model_name")) c.model_settings.model = *v;
  if (const auto* v = get("model_api_key")) c.model_settings.api_key = *v;
  if (const auto* v = get("model_timeout_ms")) {
    c.adapter_limits.deadline = std::chrono::milliseconds(
        ParseUnsigned<std::int64_t>("model_timeout_ms", *v));
  }
  if (const auto* v = get("max_image_bytes")) {
    c.adapter_limits.max_image_bytes = ParseUnsigned<std::size_t>("max_image_bytes", *v);
  }
  if (const auto* v = get("max_in_flight")) {
    c.adapter_limits.max_in_flight = ParseUnsigned<std::ptrdiff_t>("max_in_flight", *v);
  }
  if (const auto* v = get("listen_host")) c.listen_host = *v;
  if (const auto* v = get("listen_port")) c.listen_port = ParseUnsigned<int>("listen_port", *v);
  return c;
}

void ServiceConfig::Validate() const {
  auto require = [](const std::filesystem::path& p, const char* key, bool dir) {
    std::error_code ec;
    bool ok = !p.empty() && (dir ? std::filesystem::is_directory(p, ec)
                                 : std::filesystem::is_regular_file(p, ec));
    if (!ok) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("config '") + key + "' does not name an existing " +
                      (dir ? "directory" : "file") + ": '" + p.string() + "'");
    }
  };
  require(factor_dir, "factor_dir", true);
  require(action_catalog, "action_catalog", false);
  require(opportunity_catalog, "opportunity_catalog", false);
  require(barcode_registry, "barcode_registry", false);
  if (k_min < 1) throw Error(ErrorCode::kInvalidConfig, "k_min must be at least 1");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "min_confidence must lie in [0, 1]");
  }
  if (model_backend != "stub" && model_backend != "http") {
    throw Error(ErrorCode::kInvalidConfig, "model_backend must be 'stub' or 'http'");
  }
  if (model_backend == "http" && model_settings.base_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "model_backend 'http' needs model_base_url");
  }
  if (adapter_limits.max_in_flight < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_in_flight must be at least 1");
  }
}

}  // namespace ecobee
