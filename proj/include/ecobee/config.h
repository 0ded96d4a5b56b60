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

#ifndef ECOBEE_CONFIG_H_
#define ECOBEE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ecobee/adapters.h"
#include "ecobee/embedding.h"
#include "ecobee/scoring.h"

namespace ecobee {

// Service configuration. Loaded from a `key = value` file ('#' comments);
// every key can be overridden by an environment variable ECOBEE_<KEY> in
// upper case, e.g. ECOBEE_K_MIN=10.
//
// Keys:
//   factor_dir, action_catalog, opportunity_catalog, barcode_registry
//   model_file            trained embedding model (optional; fallback ranking
//                         is used while it is absent)
//   leaderboard_db        SQLite file; empty keeps the leaderboard in memory
//   k_min                 aggregate suppression threshold (>= 1)
//   composite_weights     nine comma-separated weights in canonical order
//   seed                  embedding seed
//   p, q, walks_per_node, walk_length, dimension, window, negatives, epochs,
//   learning_rate         embedding hyperparameters
//   min_confidence        vision label threshold
//   model_backend         "stub" or "http"
//   stub_replies          JSON file of canned vision replies for the stub
//   model_base_url, model_path, model_name, model_api_key
//   model_timeout_ms, max_image_bytes, max_in_flight
//   listen_host, listen_port
struct ServiceConfig {
  std::filesystem::path factor_dir;
  std::filesystem::path action_catalog;
  std::filesystem::path opportunity_catalog;
  std::filesystem::path barcode_registry;
  std::filesystem::path model_file;
  std::filesystem::path leaderboard_db;
  std::size_t k_min = 5;
  CompositeWeights composite_weights;
  std::uint64_t seed = 42;
  EmbeddingHyperparameters hyperparameters;
  double min_confidence = 0.5;
  std::string model_backend = "stub";
  std::filesystem::path stub_replies;
  HttpModelSettings model_settings;
  AdapterLimits adapter_limits;
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;

  // Relative paths in the file resolve against the file's directory.
  static ServiceConfig Load(const std::filesystem::path& file);
  static ServiceConfig FromMap(const std::map<std::string, std::string>& values,
                               const std::filesystem::path& base_dir);
  // Applies ECOBEE_* environment variables on top of `values`.
  static std::map<std::string, std::string> WithEnvironment(
      std::map<std::string, std::string> values);

  // Throws kInvalidConfig: data paths must exist, k_min >= 1.
  void Validate() const;
};

std::map<std::string, std::string> ParseKeyValueText(std::string_view text);

}  // namespace ecobee

#endif  // ECOBEE_CONFIG_H_
