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

#ifndef ECOBEE_API_SERVICE_H_
#define ECOBEE_API_SERVICE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecobee/action_graph.h"
#include "ecobee/adapters.h"
#include "ecobee/config.h"
#include "ecobee/embedding.h"
#include "ecobee/factor_table.h"
#include "ecobee/intake.h"
#include "ecobee/leaderboard.h"
#include "ecobee/model_client.h"
#include "ecobee/recommend.h"

namespace httplib {
class Server;
}

namespace spdlog {
class logger;
}

namespace ecobee {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON

  nlohmann::json Json() const { return nlohmann::json::parse(body); }
};

// HTTP status for an error category.
int HttpStatusFor(ErrorCode code);

// Immutable recommendation state; replaced wholesale on retrain.
struct RecommenderState {
  ActionGraph graph;
  std::optional<EmbeddingModel> model;
};

// JSON request handling for the /api/* endpoints. Handle() is transport-free
// and safe to call concurrently; Mount() wires it into a cpp-httplib server.
class ApiService {
 public:
  struct Dependencies {
    std::shared_ptr<ModelClient> model_client;
    std::shared_ptr<LeaderboardStore> store;
    std::shared_ptr<spdlog::logger> logger;  // null: default logger
    std::function<std::int64_t()> clock;     // null: system clock (UTC s)
  };

  ApiService(const ServiceConfig& config, Dependencies deps);

  // Builds model client and store from the config (stub or HTTP backend,
  // SQLite or in-memory store).
  static std::unique_ptr<ApiService> FromConfig(const ServiceConfig& config);

  HttpResponse Handle(const HttpRequest& request);
  void Mount(httplib::Server& server);

  // Atomic swaps; in-flight requests finish on the previous value.
  void ReloadFactorTables();
  void SetEmbeddingModel(std::optional<EmbeddingModel> model);

  std::shared_ptr<const FactorTable> factor_table() const;
  std::shared_ptr<const RecommenderState> recommender() const;
  Leaderboard& leaderboard() { return leaderboard_; }
  const ServiceConfig& config() const { return config_; }

 private:
  HttpResponse Dispatch(const HttpRequest& request);
  HttpResponse Score(const nlohmann::json& body);
  HttpResponse SubmitScore(const nlohmann::json& body);
  HttpResponse LeaderboardView(const HttpRequest& request);
  HttpResponse Recommendations(const nlohmann::json& body);
  HttpResponse Chat(const nlohmann::json& body);
  HttpResponse Vision(const nlohmann::json& body);
  HttpResponse Health();

  ServiceConfig config_;
  std::shared_ptr<ModelClient> model_client_;
  std::shared_ptr<spdlog::logger> logger_;
  std::function<std::int64_t()> clock_;

  mutable std::mutex swap_mutex_;
  std::shared_ptr<const FactorTable> table_;
  std::shared_ptr<const RecommenderState> recommender_;

  BarcodeRegistry barcodes_;
  std::vector<OpportunityCard> opportunities_;
  std::shared_ptr<InFlightGate> gate_;
  VisionClassifier vision_;
  ChatService chat_;
  Leaderboard leaderboard_;
};

// JSON views shared by the service, the CLI and the Python bindings.
nlohmann::json ToJson(const BoundaryScores& scores);
nlohmann::json ToJson(const ScoreResult& result);
nlohmann::json ToJson(const LeaderboardSummary& summary);
nlohmann::json ToJson(const Recommendation& rec);
nlohmann::json ToJson(const LabelledItem& item);
BoundaryScores BoundaryScoresFromJson(const nlohmann::json& j);

}  // namespace ecobee

#endif  // ECOBEE_API_SERVICE_H_
