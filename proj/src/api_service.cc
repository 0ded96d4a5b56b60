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

#include "ecobee/api_service.h"

#include <chrono>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "ecobee/digest.h"
#include "ecobee/error.h"
#include "ecobee/recommend.h"
#include "ecobee/scoring.h"

namespace ecobee {
namespace {

using nlohmann::json;

HttpResponse JsonResponse(int status, const json& body) {
  return HttpResponse{status, body.dump()};
}

HttpResponse ErrorResponse(const Error& e) {
  json body = {{"code", e.code_name()}, {"message", e.what()}};
  if (e.code() == ErrorCode::kUpstreamTimeout) body["retryable"] = true;
  return JsonResponse(HttpStatusFor(e.code()), body);
}

HttpResponse ErrorResponse(int status, std::string_view code, std::string_view message) {
  return JsonResponse(status, json{{"code", code}, {"message", message}});
}

Error BadRequest(const std::string& message) {
  return Error(ErrorCode::kInvalidArgument, message);
}

const json& Field(const json& body, const char* key) {
  if (!body.contains(key)) throw BadRequest(std::string("missing field '") + key + "'");
  return body.at(key);
}

std::string StringField(const json& body, const char* key) {
  const json& v = Field(body, key);
  if (!v.is_string()) throw BadRequest(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> OptionalString(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  if (!body.at(key).is_string()) {
    throw BadRequest(std::string("field '") + key + "' must be a string");
  }
  return body.at(key).get<std::string>();
}

std::vector<std::string> StringList(const json& body, const char* key) {
  std::vector<std::string> out;
  if (!body.contains(key) || body.at(key).is_null()) return out;
  if (!body.at(key).is_array()) {
    throw BadRequest(std::string("field '") + key + "' must be an array");
  }
  for (const auto& v : body.at(key)) {
    if (!v.is_string()) {
      throw BadRequest(std::string("field '") + key + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Accepts raw base64 or a data URL.
TransientImage DecodeImage(std::string_view encoded) {
  if (encoded.starts_with("data:")) {
    auto comma = encoded.find(',');
    if (comma == std::string_view::npos) throw BadRequest("malformed image data URL");
    encoded.remove_prefix(comma + 1);
  }
  auto bytes = Base64Decode(encoded);
  if (!bytes) throw BadRequest("image is not valid base64");
  return TransientImage(std::move(*bytes));
}

const ServiceConfig& Validated(const ServiceConfig& config) {
  config.Validate();
  return config;
}

std::int64_t SystemClock() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kImageTooLarge: return 413;
    case ErrorCode::kUpstreamRejected: return 502;
    case ErrorCode::kUpstreamTimeout: return 504;
    case ErrorCode::kIoError:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidModelFile:
    case ErrorCode::kModelGraphMismatch:
      return 500;
    default:
      return 400;
  }
}

json ToJson(const BoundaryScores& scores) {
  json out = json::object();
  for (Boundary b : kAllBoundaries) out[std::string(BoundaryCode(b))] = scores[b];
  return out;
}

json ToJson(const ScoreResult& result) {
  json explanations = json::array();
  for (const auto& c : result.explanations) {
    explanations.push_back({{"domain", c.domain},
                            {"option_key", c.option_key},
                            {"boundary", BoundaryCode(c.boundary)},
                            {"pressure", c.pressure},
                            {"share", c.share}});
  }
  return json{{"boundaries", ToJson(result.boundary_scores)},
              {"composite", result.composite},
              {"explanations", std::move(explanations)}};
}

json ToJson(const LeaderboardSummary& s) {
  json out = {{"n", s.n}};
  if (s.top_composite) out["top_composite"] = *s.top_composite;
  if (s.mean_composite) out["mean_composite"] = *s.mean_composite;
  if (s.sd_composite) out["sd_composite"] = *s.sd_composite;
  if (s.per_boundary_means) {
    json means = json::object();
    for (Boundary b : kAllBoundaries) {
      means[std::string(BoundaryCode(b))] = (*s.per_boundary_means)[Index(b)];
    }
    out["per_boundary_means"] = std::move(means);
  }
  if (s.campus_filter) out["campus_filter"] = *s.campus_filter;
  return out;
}

json ToJson(const Recommendation& rec) {
  json targets = json::array();
  for (Boundary b : rec.target_boundaries) targets.push_back(BoundaryCode(b));
  return json{{"action_id", rec.action_id},
              {"relevance", rec.relevance},
              {"target_boundaries", std::move(targets)},
              {"rationale", rec.rationale}};
}

json ToJson(const LabelledItem& item) {
  json out = {{"domain", item.domain},
              {"option_key", item.option_key},
              {"confidence", item.confidence}};
  if (item.caption) out["caption"] = *item.caption;
  return out;
}

BoundaryScores BoundaryScoresFromJson(const json& j) {
  if (!j.is_object()) throw BadRequest("boundary scores must be an object");
  std::map<std::string, double> by_code;
  for (const auto& [code, value] : j.items()) {
    if (!value.is_number()) throw BadRequest("boundary score '" + code + "' must be a number");
    by_code[code] = value.get<double>();
  }
  return BoundaryScores::FromCodes(by_code);
}

ApiService::ApiService(const ServiceConfig& config, Dependencies deps)
    : config_(Validated(config)),
      model_client_(std::move(deps.model_client)),
      logger_(deps.logger ? std::move(deps.logger) : spdlog::default_logger()),
      clock_(deps.clock ? std::move(deps.clock) : SystemClock),
      barcodes_(BarcodeRegistry::Load(config.barcode_registry)),
      opportunities_(LoadOpportunityCatalog(config.opportunity_catalog)),
      gate_(std::make_shared<InFlightGate>(config.adapter_limits.max_in_flight)),
      vision_(model_client_, config.adapter_limits, gate_),
      chat_(model_client_, config.adapter_limits, gate_),
      leaderboard_(std::move(deps.store), config.composite_weights) {
  table_ = std::make_shared<const FactorTable>(load_factor_tables(config_.factor_dir));

  auto state = std::make_shared<RecommenderState>();
  state->graph = build_action_graph(LoadActionCatalog(config_.action_catalog));
  if (!config_.model_file.empty() && std::filesystem::exists(config_.model_file)) {
    EmbeddingModel model = LoadModel(config_.model_file);
    CheckModelMatchesGraph(model, state->graph.graph);
    state->model = std::move(model);
  }
  recommender_ = std::move(state);
}

std::unique_ptr<ApiService> ApiService::FromConfig(const ServiceConfig& config) {
  config.Validate();
  Dependencies deps;
  if (config.model_backend == "http") {
    deps.model_client = std::make_shared<HttpModelClient>(config.model_settings);
  } else {
    auto stub = std::make_shared<StubModelClient>();
    if (!config.stub_replies.empty()) stub->LoadVisionReplies(config.stub_replies);
    deps.model_client = std::move(stub);
  }
  if (config.leaderboard_db.empty()) {
    deps.store = std::make_shared<InMemoryLeaderboardStore>();
  } else {
    deps.store = std::make_shared<SqliteLeaderboardStore>(config.leaderboard_db);
  }
  return std::make_unique<ApiService>(config, std::move(deps));
}

void ApiService::ReloadFactorTables() {
  auto fresh = std::make_shared<const FactorTable>(load_factor_tables(config_.factor_dir));
  std::lock_guard lock(swap_mutex_);
  table_ = std::move(fresh);
}

void ApiService::SetEmbeddingModel(std::optional<EmbeddingModel> model) {
  auto current = recommender();
  if (model) CheckModelMatchesGraph(*model, current->graph.graph);
  auto fresh = std::make_shared<RecommenderState>(*current);
  fresh->model = std::move(model);
  std::lock_guard lock(swap_mutex_);
  recommender_ = std::move(fresh);
}

std::shared_ptr<const FactorTable> ApiService::factor_table() const {
  std::lock_guard lock(swap_mutex_);
  return table_;
}

std::shared_ptr<const RecommenderState> ApiService::recommender() const {
  std::lock_guard lock(swap_mutex_);
  return recommender_;
}

HttpResponse ApiService::Handle(const HttpRequest& request) {
  auto started = std::chrono::steady_clock::now();
  HttpResponse response;
  try {
    response = Dispatch(request);
  } catch (const Error& e) {
    response = ErrorResponse(e);
  } catch (const json::exception&) {
    response = ErrorResponse(400, "malformed_json", "request body is not valid JSON");
  } catch (const std::exception&) {
    response = ErrorResponse(500, "internal", "internal error");
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started)
                .count();
  // Request metadata only; bodies may carry images or free text.
  logger_->info("{} {} -> {} ({} ms)", request.method, request.path, response.status, ms);
  return response;
}

HttpResponse ApiService::Dispatch(const HttpRequest& request) {
  const std::string& path = request.path;
  auto body = [&] {
    if (request.body.empty()) return json::object();
    json parsed = json::parse(request.body);
    if (!parsed.is_object()) throw BadRequest("request body must be a JSON object");
    return parsed;
  };
  static const std::map<std::string, std::string> kRoutes = {
      {"/api/health", "GET"},       {"/api/leaderboard", "GET"},
      {"/api/score", "POST"},       {"/api/submit-score", "POST"},
      {"/api/recommendations", "POST"}, {"/api/chat", "POST"},
      {"/api/vision", "POST"},
  };
  auto route = kRoutes.find(path);
  if (route == kRoutes.end()) return ErrorResponse(404, "not_found", "no such endpoint");
  if (route->second != request.method) {
    return ErrorResponse(405, "method_not_allowed", "use " + route->second);
  }
  if (path == "/api/health") return Health();
  if (path == "/api/leaderboard") return LeaderboardView(request);
  if (path == "/api/score") return Score(body());
  if (path == "/api/submit-score") return SubmitScore(body());
  if (path == "/api/recommendations") return Recommendations(body());
  if (path == "/api/chat") return Chat(body());
  return Vision(body());
}

HttpResponse ApiService::Score(const json& body) {
  auto table = factor_table();

  IntakeProfile profile;
  profile.pseudonym = StringField(body, "pseudonym");
  profile.campus = OptionalString(body, "campus").value_or("");
  profile.cohort = OptionalString(body, "cohort").value_or("");
  profile.faculty = OptionalString(body, "faculty").value_or("");
  profile.career_interest = OptionalString(body, "career_interest");
  const json& quiz = Field(body, "quiz");
  if (!quiz.is_object()) throw BadRequest("field 'quiz' must be an object");
  for (const auto& [domain, answer] : quiz.items()) {
    if (!answer.is_string()) throw BadRequest("quiz answer for '" + domain + "' must be a string");
    profile.quiz[domain] = answer.get<std::string>();
  }
  profile.barcodes = StringList(body, "barcodes");
  for (const std::string& encoded : StringList(body, "images")) {
    profile.images.push_back(DecodeImage(encoded));
  }
  ValidateProfile(profile);

  std::vector<LabelledItem> labels;
  if (body.contains("labelled_items") && !body.at("labelled_items").is_null()) {
    const json& raw = body.at("labelled_items");
    if (!raw.is_array()) throw BadRequest("field 'labelled_items' must be an array");
    for (const auto& entry : raw) {
      if (!entry.is_object()) throw BadRequest("labelled item must be an object");
      LabelledItem item;
      item.domain = StringField(entry, "domain");
      item.option_key = StringField(entry, "option_key");
      const json& conf = Field(entry, "confidence");
      if (!conf.is_number()) throw BadRequest("labelled item confidence must be a number");
      item.confidence = conf.get<double>();
      item.caption = OptionalString(entry, "caption");
      ValidateLabelledItem(item);
      labels.push_back(std::move(item));
    }
  }
  // Images are labelled in-session and released; only the labels remain.
  for (auto& image : profile.images) {
    auto derived = vision_.classify_image(VisionRequest{std::move(image), std::nullopt});
    labels.insert(labels.end(), derived.begin(), derived.end());
  }
  profile.images.clear();

  auto quiz_items = canonicalise_quiz(profile.quiz, *table);
  MergeResult merged = merge_items(quiz_items, labels, config_.min_confidence);
  for (const std::string& code : profile.barcodes) {
    merged.items.push_back(normalise_barcode(code, barcodes_));
  }
  ScoreResult result = score(merged.items, *table, config_.composite_weights);

  json out = ToJson(result);
  out["meta"] = {{"items_scored", result.items_scored},
                 {"dropped_low_confidence", merged.dropped_low_confidence},
                 {"dropped_duplicates", merged.dropped_duplicates},
                 {"factor_table_version", table->version()}};
  return JsonResponse(200, out);
}

HttpResponse ApiService::SubmitScore(const json& body) {
  LeaderboardEntry entry;
  try {
    entry.pseudonym = StringField(body, "pseudonym");
    entry.campus = OptionalString(body, "campus").value_or("");
    const json& composite = Field(body, "composite");
    if (!composite.is_number()) throw BadRequest("field 'composite' must be a number");
    entry.composite = composite.get<double>();
    entry.boundary_scores = BoundaryScoresFromJson(Field(body, "boundaries"));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidEntry, e.what());
  }
  entry.submitted_at = clock_();
  leaderboard_.submit_score(entry);

  if (body.contains("feedback") && !body.at("feedback").is_null()) {
    const json& fb = body.at("feedback");
    std::string text = fb.is_string() ? fb.get<std::string>() : fb.dump();
    if (!text.empty()) {
      leaderboard_.submit_feedback(FeedbackRecord{entry.pseudonym, text, entry.submitted_at});
    }
  }
  return JsonResponse(200, json{{"ok", true}});
}

HttpResponse ApiService::LeaderboardView(const HttpRequest& request) {
  std::optional<std::string> campus;
  if (auto it = request.query.find("campus"); it != request.query.end() && !it->second.empty()) {
    campus = it->second;
  }
  std::size_t n = 10;
  if (auto it = request.query.find("n"); it != request.query.end() && !it->second.empty()) {
    try {
      long parsed = std::stol(it->second);
      if (parsed < 1) throw BadRequest("n must be at least 1");
      n = static_cast<std::size_t>(parsed);
    } catch (const std::logic_error&) {
      throw BadRequest("n must be an integer");
    }
  }
  json top = json::array();
  for (const auto& e : leaderboard_.top_n(n, campus)) {
    top.push_back({{"pseudonym", e.pseudonym}, {"composite", e.composite}});
  }
  return JsonResponse(
      200, json{{"summary", ToJson(leaderboard_.summary(campus, config_.k_min))},
                {"top", std::move(top)}});
}

HttpResponse ApiService::Recommendations(const json& body) {
  BoundaryScores scores = BoundaryScoresFromJson(Field(body, "scores"));
  RankRequest request;
  if (auto campus = OptionalString(body, "campus")) request.feasibility_context.insert(*campus);
  for (auto& opt : StringList(body, "current_options")) request.current_options.insert(opt);
  if (body.contains("n") && !body.at("n").is_null()) {
    const json& n = body.at("n");
    if (!n.is_number_integer() || n.get<long>() < 1) throw BadRequest("n must be a positive integer");
    request.n_recs = n.get<std::size_t>();
  }
  if (body.contains("k_boundaries") && !body.at("k_boundaries").is_null()) {
    const json& k = body.at("k_boundaries");
    if (!k.is_number_integer() || k.get<long>() < 1) {
      throw BadRequest("k_boundaries must be a positive integer");
    }
    request.k_boundaries = k.get<std::size_t>();
  }

  auto state = recommender();
  std::string path = state->model ? "embedding" : "fallback";
  json recs = json::array();
  json out = {{"path", path}};
  try {
    auto ranked = state->model
                      ? rank_recommendations(scores, state->graph, *state->model, request)
                      : fallback_rank(scores, state->graph.actions, request);
    for (const auto& rec : ranked) {
      json j = ToJson(rec);
      for (const auto& a : state->graph.actions) {
        if (a.id == rec.action_id) j["title"] = a.title;
      }
      recs.push_back(std::move(j));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoFeasibleActions) throw;
    out["note"] = "no_feasible_actions";
  }
  out["recommendations"] = std::move(recs);
  return JsonResponse(200, out);
}

HttpResponse ApiService::Chat(const json& body) {
  const json& raw = Field(body, "history");
  if (!raw.is_array()) throw BadRequest("field 'history' must be an array");
  std::vector<ChatTurn> history;
  for (const auto& turn : raw) {
    if (!turn.is_object()) throw BadRequest("chat turn must be an object");
    auto role = ParseChatRole(StringField(turn, "role"));
    if (!role) throw BadRequest("chat role must be 'user' or 'assistant'");
    history.push_back(ChatTurn{*role, StringField(turn, "text")});
  }
  BoundaryScores scores = BoundaryScoresFromJson(Field(body, "scores"));
  ChatTurn reply =
      chat_.chat(history, scores, opportunities_, OptionalString(body, "career_interest"));
  return JsonResponse(200, json{{"reply", reply.text}});
}

HttpResponse ApiService::Vision(const json& body) {
  VisionRequest request{DecodeImage(StringField(body, "image_base64")),
                        OptionalString(body, "domain_hint")};
  auto labels = vision_.classify_image(std::move(request));
  json items = json::array();
  for (const auto& l : labels) items.push_back(ToJson(l));
  return JsonResponse(200, json{{"labelled_items", std::move(items)}});
}

HttpResponse ApiService::Health() {
  auto state = recommender();
  json out = {{"ok", true}, {"factor_table_version", factor_table()->version()}};
  out["model_version"] = state->model ? json(ModelVersion(*state->model)) : json(nullptr);
  return JsonResponse(200, out);
}

void ApiService::Mount(httplib::Server& server) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) request.query[key] = value;
    HttpResponse response = Handle(request);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  };
  server.Get(R"(/api/.*)", handler);
  server.Post(R"(/api/.*)", handler);
  server.Put(R"(/api/.*)", handler);
  server.Delete(R"(/api/.*)", handler);
  server.Patch(R"(/api/.*)", handler);
}

}  // namespace ecobee
