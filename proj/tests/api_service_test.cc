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

#include <cstdlib>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "ecobee/api_service.h"
#include "ecobee/config.h"
#include "ecobee/digest.h"
#include "ecobee/error.h"
#include "test_support.h"

namespace ecobee {
namespace {

using nlohmann::json;
using testing::DataDir;
using testing::ThrownCode;

json HandQuiz() {
  return {{"food", "vegan"}, {"mobility", "cycle"}, {"fashion", "secondhand"},
          {"housing", "shared_flat"}};
}

json ScoreBody(json quiz = HandQuiz()) {
  return {{"pseudonym", "green_fox"}, {"campus", "main_campus"}, {"quiz", std::move(quiz)}};
}

std::string ImageBase64(const char* name) {
  auto bytes = testing::ReadFile(DataDir() / "images" / name);
  return Base64Encode(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

class ApiServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_ = ServiceConfig::Load(DataDir() / "ecobee.conf");
    config_.leaderboard_db = dir_.path() / "lb.sqlite";
    config_.adapter_limits.deadline = std::chrono::milliseconds(500);
    Build();
  }

  void Build() {
    stub_ = std::make_shared<StubModelClient>();
    stub_->LoadVisionReplies(config_.stub_replies);
    log_ = std::make_shared<std::ostringstream>();
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(*log_);
    ApiService::Dependencies deps;
    deps.model_client = stub_;
    deps.store = std::make_shared<SqliteLeaderboardStore>(config_.leaderboard_db);
    deps.logger = std::make_shared<spdlog::logger>("api_test", sink);
    deps.clock = [this] { return ++now_; };
    service_ = std::make_unique<ApiService>(config_, std::move(deps));
  }

  HttpResponse Post(const std::string& path, const json& body) {
    return service_->Handle({"POST", path, {}, body.dump()});
  }
  HttpResponse Get(const std::string& path, std::map<std::string, std::string> query = {}) {
    return service_->Handle({"GET", path, std::move(query), ""});
  }

  testing::TempDir dir_;
  ServiceConfig config_;
  std::shared_ptr<StubModelClient> stub_;
  std::shared_ptr<std::ostringstream> log_;
  std::int64_t now_ = 1760000000;
  std::unique_ptr<ApiService> service_;
};

void ExpectError(const HttpResponse& r, int status, const std::string& code) {
  EXPECT_EQ(r.status, status) << r.body;
  json j = r.Json();
  EXPECT_EQ(j.value("code", ""), code) << r.body;
  EXPECT_TRUE(j.contains("message"));
}

TEST_F(ApiServiceTest, Health) {
  auto r = Get("/api/health");
  ASSERT_EQ(r.status, 200);
  json j = r.Json();
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(j["factor_table_version"], service_->factor_table()->version());
  EXPECT_TRUE(j["model_version"].is_null());
}

TEST_F(ApiServiceTest, ScoreMatchesHandComputedValues) {
  auto r = Post("/api/score", ScoreBody());
  ASSERT_EQ(r.status, 200) << r.body;
  json j = r.Json();
  EXPECT_DOUBLE_EQ(j["boundaries"]["climate_change"].get<double>(), 83.6);
  EXPECT_DOUBLE_EQ(j["boundaries"]["freshwater_use"].get<double>(), 71.1);
  EXPECT_DOUBLE_EQ(j["boundaries"]["stratospheric_ozone_depletion"].get<double>(), 95.6);
  EXPECT_EQ(j["boundaries"].size(), 9u);
  EXPECT_TRUE(j["composite"].is_number());
  EXPECT_EQ(j["meta"]["items_scored"], 4);
  EXPECT_EQ(j["meta"]["factor_table_version"], service_->factor_table()->version());
  ASSERT_FALSE(j["explanations"].empty());
  for (const auto& e : j["explanations"]) {
    for (const char* key : {"domain", "option_key", "boundary", "pressure", "share"}) {
      EXPECT_TRUE(e.contains(key)) << key;
    }
  }
}

TEST_F(ApiServiceTest, ScoreIsStateless) {
  auto a = Post("/api/score", ScoreBody());
  auto b = Post("/api/score", ScoreBody());
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(service_->leaderboard().size(), 0u);
}

TEST_F(ApiServiceTest, ScoreWithImageBarcodeAndLabels) {
  json body = ScoreBody();
  body["images"] = {"data:image/jpeg;base64," + ImageBase64("image_a.jpg")};
  body["barcodes"] = {"5000112637922"};
  body["labelled_items"] = {
      {{"domain", "fashion"}, {"option_key", "jeans"}, {"confidence", 0.3}},
      {{"domain", "food"}, {"option_key", "vegan"}, {"confidence", 0.9}}};
  auto r = Post("/api/score", body);
  ASSERT_EQ(r.status, 200) << r.body;
  json j = r.Json();
  EXPECT_EQ(j["meta"]["items_scored"], 6);
  EXPECT_EQ(j["meta"]["dropped_low_confidence"], 1);
  EXPECT_EQ(j["meta"]["dropped_duplicates"], 1);
  std::set<std::string> options;
  for (const auto& e : j["explanations"]) options.insert(e["option_key"].get<std::string>());
  EXPECT_TRUE(options.count("beef_burger"));
  EXPECT_FALSE(options.count("jeans"));
}

TEST_F(ApiServiceTest, ScoreErrors) {
  ExpectError(Post("/api/score", ScoreBody({{"food", "caviar"}})), 400, "unknown_option");
  ExpectError(Post("/api/score", ScoreBody({{"space", "rocket"}})), 400, "unknown_domain");
  json no_pseudonym = {{"quiz", HandQuiz()}};
  ExpectError(Post("/api/score", no_pseudonym), 400, "invalid_argument");
  json barcode = ScoreBody();
  barcode["barcodes"] = {"12345"};
  ExpectError(Post("/api/score", barcode), 400, "malformed_barcode");
  ExpectError(service_->Handle({"POST", "/api/score", {}, "{not json"}), 400, "malformed_json");
  ExpectError(service_->Handle({"POST", "/api/score", {}, "[1,2]"}), 400, "invalid_argument");
}

TEST_F(ApiServiceTest, RoutingErrors) {
  ExpectError(Get("/api/nope"), 404, "not_found");
  ExpectError(Get("/api/score"), 405, "method_not_allowed");
  ExpectError(Post("/api/health", json::object()), 405, "method_not_allowed");
}

TEST_F(ApiServiceTest, VisionEndpoint) {
  auto r = Post("/api/vision", {{"image_base64", ImageBase64("image_a.jpg")}});
  ASSERT_EQ(r.status, 200) << r.body;
  json items = r.Json()["labelled_items"];
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0]["option_key"], "beef_burger");
  EXPECT_EQ(items[0]["confidence"], 0.92);

  ExpectError(Post("/api/vision", {{"image_base64", "!!!"}}), 400, "invalid_argument");
  ExpectError(Post("/api/vision", {{"image_base64", ""}}), 400, "invalid_argument");
}

TEST_F(ApiServiceTest, VisionUpstreamErrors) {
  auto raw = testing::ReadFile(DataDir() / "images" / "image_b.jpg");
  std::string digest = Sha256Hex(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  stub_->SetVisionReply(digest, "not json at all");
  ExpectError(Post("/api/vision", {{"image_base64", ImageBase64("image_b.jpg")}}), 502,
              "upstream_rejected");

  stub_->SetVisionFailure(digest, ErrorCode::kUpstreamTimeout, 2);
  auto r = Post("/api/vision", {{"image_base64", ImageBase64("image_b.jpg")}});
  ExpectError(r, 504, "upstream_timeout");
  EXPECT_EQ(r.Json()["retryable"], true);
}

TEST_F(ApiServiceTest, OversizedImageIs413) {
  config_.adapter_limits.max_image_bytes = 1024;
  Build();
  ExpectError(Post("/api/vision", {{"image_base64", ImageBase64("image_a.jpg")}}), 413,
              "image_too_large");
  json body = ScoreBody();
  body["images"] = {ImageBase64("image_a.jpg")};
  ExpectError(Post("/api/score", body), 413, "image_too_large");
}

TEST_F(ApiServiceTest, SubmitAndLeaderboard) {
  auto cohort = testing::PilotCohort();
  for (const auto& e : cohort.entries) {
    json body = {{"pseudonym", e.pseudonym},
                 {"campus", e.campus},
                 {"composite", e.composite},
                 {"boundaries", ToJson(e.boundary_scores)}};
    auto r = Post("/api/submit-score", body);
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_EQ(r.Json(), (json{{"ok", true}}));
  }
  auto r = Get("/api/leaderboard", {{"n", "3"}});
  ASSERT_EQ(r.status, 200);
  json j = r.Json();
  EXPECT_EQ(j["summary"]["n"], 52);
  EXPECT_NEAR(j["summary"]["mean_composite"].get<double>(), 50.9, 0.05);
  EXPECT_NEAR(j["summary"]["sd_composite"].get<double>(), 7.7, 0.05);
  EXPECT_NEAR(j["summary"]["top_composite"].get<double>(), 62.0, 0.05);
  EXPECT_EQ(j["summary"]["per_boundary_means"].size(), 9u);
  ASSERT_EQ(j["top"].size(), 3u);
  EXPECT_EQ(j["top"][0]["composite"], 62.0);
  for (const auto& row : j["top"]) {
    EXPECT_EQ(row.size(), 2u);
    EXPECT_TRUE(row.contains("pseudonym") && row.contains("composite"));
  }
  auto campus = Get("/api/leaderboard", {{"campus", "city_campus"}}).Json();
  EXPECT_EQ(campus["summary"]["campus_filter"], "city_campus");
  EXPECT_EQ(campus["summary"]["n"], 26);
  ExpectError(Get("/api/leaderboard", {{"n", "zero"}}), 400, "invalid_argument");
}

TEST_F(ApiServiceTest, LeaderboardSuppressedBelowKMin) {
  auto cohort = testing::PilotCohort();
  for (std::size_t i = 0; i + 1 < config_.k_min; ++i) {
    const auto& e = cohort.entries[i];
    Post("/api/submit-score", {{"pseudonym", e.pseudonym},
                               {"composite", e.composite},
                               {"boundaries", ToJson(e.boundary_scores)}});
  }
  json s = Get("/api/leaderboard").Json()["summary"];
  EXPECT_EQ(s["n"], config_.k_min - 1);
  EXPECT_FALSE(s.contains("mean_composite") || s.contains("sd_composite") ||
               s.contains("top_composite") || s.contains("per_boundary_means"));
}

TEST_F(ApiServiceTest, SubmitErrors) {
  json body = {{"pseudonym", "a@b.example"},
               {"composite", 50.0},
               {"boundaries", ToJson(BoundaryScores::Uniform(50.0))}};
  ExpectError(Post("/api/submit-score", body), 400, "invalid_entry");
  body["pseudonym"] = "ok_name";
  body["composite"] = 60.0;
  ExpectError(Post("/api/submit-score", body), 400, "consistency_error");
  body.erase("boundaries");
  ExpectError(Post("/api/submit-score", body), 400, "invalid_entry");
}

TEST_F(ApiServiceTest, SubmitWithFeedback) {
  json body = {{"pseudonym", "kind_owl"},
               {"composite", 50.0},
               {"boundaries", ToJson(BoundaryScores::Uniform(50.0))},
               {"feedback", "more water fountains"}};
  ASSERT_EQ(Post("/api/submit-score", body).status, 200);
  EXPECT_EQ(service_->leaderboard().feedback_count(), 1u);
}

json LowFreshwater() {
  json s = ToJson(BoundaryScores::Uniform(90.0));
  s["freshwater_use"] = 10.0;
  return s;
}

TEST_F(ApiServiceTest, RecommendationsFallbackThenEmbedding) {
  json body = {{"scores", LowFreshwater()}, {"campus", "main_campus"}, {"n", 4}};
  auto r = Post("/api/recommendations", body);
  ASSERT_EQ(r.status, 200) << r.body;
  json j = r.Json();
  EXPECT_EQ(j["path"], "fallback");
  ASSERT_EQ(j["recommendations"].size(), 4u);
  for (const auto& rec : j["recommendations"]) {
    for (const char* key : {"action_id", "relevance", "target_boundaries", "rationale", "title"}) {
      EXPECT_TRUE(rec.contains(key)) << key;
    }
  }
  EXPECT_EQ(j["recommendations"][0]["action_id"], "swap_shop");

  service_->SetEmbeddingModel(
      train_node2vec(service_->recommender()->graph.graph, config_.hyperparameters, config_.seed)
          .model);
  j = Post("/api/recommendations", body).Json();
  EXPECT_EQ(j["path"], "embedding");
  EXPECT_EQ(j["recommendations"].size(), 4u);
  EXPECT_FALSE(Get("/api/health").Json()["model_version"].is_null());
}

TEST_F(ApiServiceTest, RecommendationsNoFeasibleActions) {
  testing::WriteFile(dir_.path() / "one.csv",
                     "id,domain,title,feasibility_tags,replaces_option,climate_change,biosphere_integrity,"
                     "biogeochemical_flows,land_system_change,freshwater_use,ocean_acidification,"
                     "atmospheric_aerosol_loading,stratospheric_ozone_depletion,novel_entities\n"
                     "drop_car,mobility,Drop the car,,car,1,0,0,0,0,0,0,0,0\n");
  config_.action_catalog = dir_.path() / "one.csv";
  Build();
  json body = {{"scores", LowFreshwater()}, {"current_options", {"car"}}};
  auto r = Post("/api/recommendations", body);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.Json()["note"], "no_feasible_actions");
  EXPECT_TRUE(r.Json()["recommendations"].empty());
}

TEST_F(ApiServiceTest, RecommendationErrors) {
  ExpectError(Post("/api/recommendations", {{"scores", {{"climate_change", 50}}}}), 400,
              "invalid_argument");
  ExpectError(Post("/api/recommendations", {{"scores", LowFreshwater()}, {"n", 0}}), 400,
              "invalid_argument");
}

TEST_F(ApiServiceTest, ChatEndpoint) {
  json body = {{"history", {{{"role", "user"}, {"text", "How do I save water?"}}}},
               {"scores", LowFreshwater()},
               {"career_interest", "hydrology"}};
  auto r = Post("/api/chat", body);
  ASSERT_EQ(r.status, 200) << r.body;
  auto ctx = build_chat_context(BoundaryScoresFromJson(LowFreshwater()),
                                LoadOpportunityCatalog(config_.opportunity_catalog), "hydrology");
  EXPECT_EQ(r.Json()["reply"], "context-digest:" + ctx.digest);

  body["history"] = json::array();
  ExpectError(Post("/api/chat", body), 400, "empty_history");
  body["history"] = {{{"role", "robot"}, {"text", "x"}}};
  ExpectError(Post("/api/chat", body), 400, "invalid_argument");
  stub_->SetChatFailure(ErrorCode::kUpstreamRejected);
  body["history"] = {{{"role", "user"}, {"text", "x"}}};
  ExpectError(Post("/api/chat", body), 502, "upstream_rejected");
}

TEST_F(ApiServiceTest, ImagesNeverReachLogsOrStorage) {
  std::string b64 = ImageBase64("image_a.jpg");
  json body = ScoreBody();
  body["images"] = {b64};
  body["feedback"] = "fine";
  auto scored = Post("/api/score", body);
  ASSERT_EQ(scored.status, 200);
  Post("/api/vision", {{"image_base64", b64}});
  json s = scored.Json();
  Post("/api/submit-score", {{"pseudonym", "green_fox"},
                             {"composite", s["composite"]},
                             {"boundaries", s["boundaries"]}});

  std::string log = log_->str();
  EXPECT_NE(log.find("POST /api/score -> 200"), std::string::npos);
  std::string db = testing::ReadFile(config_.leaderboard_db);
  // Any 32-character window of the encoded image would betray it.
  for (std::size_t i = 0; i + 32 <= b64.size(); i += 97) {
    std::string fragment = b64.substr(i, 32);
    EXPECT_EQ(log.find(fragment), std::string::npos);
    EXPECT_EQ(db.find(fragment), std::string::npos);
  }
  EXPECT_EQ(log.find("beef burger with fries"), std::string::npos);
  EXPECT_EQ(db.find("beef burger with fries"), std::string::npos);
}

TEST_F(ApiServiceTest, MountServesOverHttp) {
  httplib::Server server;
  service_->Mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Content-Type"), "application/json");
  auto scored = client.Post("/api/score", ScoreBody().dump(), "application/json");
  ASSERT_TRUE(scored);
  EXPECT_EQ(scored->status, 200);
  auto board = client.Get("/api/leaderboard?n=2&campus=main_campus");
  ASSERT_TRUE(board);
  EXPECT_EQ(json::parse(board->body)["summary"]["campus_filter"], "main_campus");
  auto put = client.Put("/api/score", "{}", "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 405);
  server.stop();
  t.join();
}

TEST(HttpStatusTest, Mapping) {
  EXPECT_EQ(HttpStatusFor(ErrorCode::kImageTooLarge), 413);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUpstreamRejected), 502);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUpstreamTimeout), 504);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kIoError), 500);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUnknownOption), 400);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kConsistencyError), 400);
}

TEST(ConfigTest, LoadResolvesRelativePaths) {
  auto c = ServiceConfig::Load(DataDir() / "ecobee.conf");
  EXPECT_EQ(c.factor_dir, DataDir() / "f0");
  EXPECT_TRUE(c.leaderboard_db.empty());
  EXPECT_EQ(c.k_min, 5u);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ConfigTest, EnvironmentOverrides) {
  ::setenv("ECOBEE_K_MIN", "9", 1);
  auto c = ServiceConfig::Load(DataDir() / "ecobee.conf");
  ::unsetenv("ECOBEE_K_MIN");
  EXPECT_EQ(c.k_min, 9u);
}

TEST(ConfigTest, Errors) {
  EXPECT_EQ(ThrownCode([] { ParseKeyValueText("colour = blue\n"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(ThrownCode([] { ParseKeyValueText("k_min\n"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(ThrownCode([] { ServiceConfig::FromMap({{"k_min", "-1"}}, {}); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(ThrownCode([] { ServiceConfig::FromMap({{"composite_weights", "1,2"}}, {}); }),
            ErrorCode::kInvalidConfig);
  auto c = ServiceConfig::Load(DataDir() / "ecobee.conf");
  c.factor_dir = DataDir() / "missing";
  EXPECT_EQ(ThrownCode([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
  c = ServiceConfig::Load(DataDir() / "ecobee.conf");
  c.k_min = 0;
  EXPECT_EQ(ThrownCode([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
  c.k_min = 5;
  c.model_backend = "http";
  EXPECT_EQ(ThrownCode([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
}

TEST(ConfigTest, FromConfigBuildsStubService) {
  auto service = ApiService::FromConfig(ServiceConfig::Load(DataDir() / "ecobee.conf"));
  auto r = service->Handle({"POST", "/api/vision", {}, json{{"image_base64", ImageBase64("image_a.jpg")}}.dump()});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.Json()["labelled_items"][0]["option_key"], "beef_burger");
}

}  // namespace
}  // namespace ecobee
