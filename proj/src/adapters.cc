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

#include "ecobee/adapters.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ecobee/digest.h"
#include "ecobee/error.h"

namespace ecobee {
namespace {

using nlohmann::json;

template <typename Fn>
auto WithRetries(int retries, Fn&& fn) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUpstreamTimeout || attempt >= retries) throw;
    }
  }
}

std::string FormatScore(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

InFlightGate::InFlightGate(std::ptrdiff_t capacity)
    : semaphore_(std::clamp<std::ptrdiff_t>(capacity, 1, 4096)) {}

InFlightGate::Slot InFlightGate::Acquire(std::chrono::milliseconds wait) {
  if (!semaphore_.try_acquire_for(wait)) {
    throw Error(ErrorCode::kUpstreamTimeout, "too many model calls in flight");
  }
  return Slot(this);
}

std::vector<LabelledItem> ParseLabelReply(std::string_view reply) {
  auto doc = json::parse(reply, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw Error(ErrorCode::kUpstreamRejected,
                "model reply is not a JSON array of labels");
  }
  std::vector<LabelledItem> items;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("domain") ||
        !entry["domain"].is_string() || !entry.contains("option_key") ||
        !entry["option_key"].is_string() || !entry.contains("confidence") ||
        !entry["confidence"].is_number()) {
      throw Error(ErrorCode::kUpstreamRejected, "malformed label in model reply");
    }
    LabelledItem item;
    item.domain = entry["domain"].get<std::string>();
    item.option_key = entry["option_key"].get<std::string>();
    item.confidence = entry["confidence"].get<double>();
    if (entry.contains("caption") && !entry["caption"].is_null()) {
      if (!entry["caption"].is_string()) {
        throw Error(ErrorCode::kUpstreamRejected, "label caption is not a string");
      }
      item.caption = entry["caption"].get<std::string>();
    }
    try {
      ValidateLabelledItem(item);
    } catch (const Error& e) {
      throw Error(ErrorCode::kUpstreamRejected, e.what());
    }
    items.push_back(std::move(item));
  }
  return items;
}

VisionClassifier::VisionClassifier(std::shared_ptr<ModelClient> client,
                                   AdapterLimits limits,
                                   std::shared_ptr<InFlightGate> gate)
    : client_(std::move(client)), limits_(limits), gate_(std::move(gate)) {}

std::string VisionClassifier::Instruction(
    const std::optional<std::string>& domain_hint) {
  std::string text =
      "Identify sustainability-relevant items in the image (meals, clothing, "
      "products, transport). Reply with a strict JSON array and nothing else. "
      "Each element must be an object with keys \"domain\" (one of food, "
      "mobility, fashion, housing), \"option_key\" (lower_snake_case), "
      "\"confidence\" (number between 0 and 1) and \"caption\" (short string).";
  if (domain_hint) text += " The image most likely shows the domain: " + *domain_hint + ".";
  return text;
}

std::vector<LabelledItem> VisionClassifier::classify_image(
    VisionRequest request) const {
  if (request.image.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "image is empty");
  }
  if (request.image.size() > limits_.max_image_bytes) {
    request.image.Release();
    throw Error(ErrorCode::kImageTooLarge, "image exceeds the size cap");
  }
  ModelCall call;
  call.system = Instruction(request.domain_hint);
  call.messages.push_back({"user", "Label this image."});
  call.image = request.image.bytes();
  call.deadline = limits_.deadline;

  std::string reply;
  try {
    reply = WithRetries(limits_.timeout_retries, [&] {
      auto slot = gate_->Acquire(limits_.deadline);
      return client_->Complete(call);
    });
  } catch (...) {
    request.image.Release();
    throw;
  }
  request.image.Release();
  return ParseLabelReply(reply);
}

std::vector<OpportunityCard> ParseOpportunityCatalog(std::string_view json_text) {
  auto doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw Error(ErrorCode::kInvalidConfig, "opportunity catalog must be a JSON array");
  }
  std::vector<OpportunityCard> cards;
  for (const auto& entry : doc) {
    auto str = [&](const char* key, bool required) -> std::optional<std::string> {
      if (!entry.contains(key) || entry[key].is_null()) {
        if (required) {
          throw Error(ErrorCode::kInvalidConfig,
                      std::string("opportunity card missing '") + key + "'");
        }
        return std::nullopt;
      }
      if (!entry[key].is_string()) {
        throw Error(ErrorCode::kInvalidConfig,
                    std::string("opportunity field '") + key + "' must be a string");
      }
      return entry[key].get<std::string>();
    };
    if (!entry.is_object()) {
      throw Error(ErrorCode::kInvalidConfig, "opportunity card must be an object");
    }
    OpportunityCard card;
    card.id = *str("id", true);
    card.title = *str("title", true);
    card.description = str("description", false).value_or("");
    card.campus = str("campus", false).value_or("");
    card.link = str("link", false);
    if (!entry.contains("related_boundaries") ||
        !entry["related_boundaries"].is_array()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "opportunity '" + card.id + "' needs related_boundaries");
    }
    for (const auto& code : entry["related_boundaries"]) {
      auto b = code.is_string() ? ParseBoundary(code.get<std::string>()) : std::nullopt;
      if (!b) {
        throw Error(ErrorCode::kInvalidConfig,
                    "opportunity '" + card.id + "' has an unknown boundary code");
      }
      card.related_boundaries.push_back(*b);
    }
    if (card.related_boundaries.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "opportunity '" + card.id + "' has no related boundaries");
    }
    cards.push_back(std::move(card));
  }
  return cards;
}

std::vector<OpportunityCard> LoadOpportunityCatalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseOpportunityCatalog(buffer.str());
}

std::string_view ChatRoleName(ChatRole role) {
  return role == ChatRole::kUser ? "user" : "assistant";
}

std::optional<ChatRole> ParseChatRole(std::string_view name) {
  if (name == "user") return ChatRole::kUser;
  if (name == "assistant") return ChatRole::kAssistant;
  return std::nullopt;
}

std::vector<OpportunityCard> select_opportunities(
    const BoundaryScores& scores, const std::vector<OpportunityCard>& catalog) {
  std::vector<Boundary> lowest = scores.Lowest(kChatLowestBoundaries);
  std::vector<std::pair<std::size_t, const OpportunityCard*>> ranked;
  for (const auto& card : catalog) {
    std::optional<std::size_t> best;
    for (std::size_t rank = 0; rank < lowest.size(); ++rank) {
      if (std::find(card.related_boundaries.begin(), card.related_boundaries.end(),
                    lowest[rank]) != card.related_boundaries.end()) {
        best = rank;
        break;
      }
    }
    if (best) ranked.emplace_back(*best, &card);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->id < b.second->id;
  });
  std::vector<OpportunityCard> out;
  for (std::size_t i = 0; i < ranked.size() && i < kChatMaxCards; ++i) {
    out.push_back(*ranked[i].second);
  }
  return out;
}

ChatContext build_chat_context(const BoundaryScores& scores,
                               const std::vector<OpportunityCard>& catalog,
                               const std::optional<std::string>& career_interest) {
  ChatContext ctx;
  std::string& t = ctx.text;
  t += "You are Eco-Bee, a campus sustainability assistant. Ground your "
       "answer in the student's planetary-boundary scores and the campus "
       "opportunities below. Be concise and practical.\n\n";
  t += "Boundary scores (0-100, higher means less pressure):\n";
  for (Boundary b : kAllBoundaries) {
    t += "- " + std::string(BoundaryCode(b)) + ": " + FormatScore(scores[b]) + "\n";
  }
  t += "Lowest boundaries:";
  for (Boundary b : scores.Lowest(kChatLowestBoundaries)) {
    t += " " + std::string(BoundaryCode(b));
  }
  t += "\n";

  auto cards = select_opportunities(scores, catalog);
  if (!cards.empty()) {
    t += "\nCampus opportunities:\n";
    for (const auto& card : cards) {
      t += "- [" + card.id + "] " + card.title;
      if (!card.campus.empty()) t += " (" + card.campus + ")";
      if (!card.description.empty()) t += ": " + card.description;
      t += " Related:";
      for (Boundary b : card.related_boundaries) t += " " + std::string(BoundaryCode(b));
      if (card.link) t += " Link: " + *card.link;
      t += "\n";
      ctx.card_ids.push_back(card.id);
    }
  }
  if (career_interest && !career_interest->empty()) {
    t += "\nCareer interest: " + *career_interest + "\n";
  }
  ctx.digest = Sha256Hex(t);
  return ctx;
}

ChatService::ChatService(std::shared_ptr<ModelClient> client, AdapterLimits limits,
                         std::shared_ptr<InFlightGate> gate)
    : client_(std::move(client)), limits_(limits), gate_(std::move(gate)) {}

ChatTurn ChatService::chat(const std::vector<ChatTurn>& history,
                           const BoundaryScores& scores,
                           const std::vector<OpportunityCard>& opportunities,
                           const std::optional<std::string>& career_interest) const {
  if (history.empty()) {
    throw Error(ErrorCode::kEmptyHistory, "chat history is empty");
  }
  if (history.back().role != ChatRole::kUser) {
    throw Error(ErrorCode::kInvalidArgument, "chat history must end with a user turn");
  }
  for (const auto& turn : history) {
    if (turn.text.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "chat turns must have text");
    }
  }
  ChatContext ctx = build_chat_context(scores, opportunities, career_interest);
  ModelCall call;
  call.system = ctx.text;
  for (const auto& turn : history) {
    call.messages.push_back({std::string(ChatRoleName(turn.role)), turn.text});
  }
  call.deadline = limits_.deadline;
  std::string reply = WithRetries(limits_.timeout_retries, [&] {
    auto slot = gate_->Acquire(limits_.deadline);
    return client_->Complete(call);
  });
  if (reply.empty()) {
    throw Error(ErrorCode::kUpstreamRejected, "model returned an empty reply");
  }
  return ChatTurn{ChatRole::kAssistant, std::move(reply)};
}

}  // namespace ecobee
