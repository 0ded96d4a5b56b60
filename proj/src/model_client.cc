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

#include "ecobee/model_client.h"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ecobee/digest.h"

namespace ecobee {

void StubModelClient::LoadVisionReplies(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": expected a JSON object");
  }
  for (const auto& [digest, reply] : doc.items()) {
    SetVisionReply(digest, reply.is_string() ? reply.get<std::string>() : reply.dump());
  }
}

void StubModelClient::SetVisionReply(const std::string& image_digest,
                                     std::string reply) {
  std::lock_guard lock(mutex_);
  vision_replies_[image_digest] = std::move(reply);
}

void StubModelClient::SetVisionFailure(const std::string& image_digest,
                                       ErrorCode code, int times) {
  std::lock_guard lock(mutex_);
  vision_failures_[image_digest] = {code, times};
}

void StubModelClient::SetChatFailure(std::optional<ErrorCode> code) {
  std::lock_guard lock(mutex_);
  chat_failure_ = code;
}

int StubModelClient::call_count() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::string StubModelClient::Complete(const ModelCall& call) {
  std::lock_guard lock(mutex_);
  ++calls_;
  if (!call.image.empty()) {
    std::string digest = Sha256Hex(call.image);
    if (auto it = vision_failures_.find(digest);
        it != vision_failures_.end() && it->second.second > 0) {
      --it->second.second;
      throw Error(it->second.first, "stub model: injected failure");
    }
    auto it = vision_replies_.find(digest);
    return it == vision_replies_.end() ? "[]" : it->second;
  }
  if (chat_failure_) throw Error(*chat_failure_, "stub model: injected failure");
  return "context-digest:" + Sha256Hex(call.system);
}

HttpModelSettings HttpModelSettings::FromEnvironment(HttpModelSettings defaults) {
  auto env = [](const char* name, std::string& target) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') target = v;
  };
  env("ECOBEE_MODEL_BASE_URL", defaults.base_url);
  env("ECOBEE_MODEL_PATH", defaults.path);
  env("ECOBEE_MODEL_API_KEY", defaults.api_key);
  env("ECOBEE_MODEL_NAME", defaults.model);
  return defaults;
}

HttpModelClient::HttpModelClient(HttpModelSettings settings)
    : settings_(std::move(settings)) {
  if (settings_.base_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "model base URL is not configured");
  }
}

std::string HttpModelClient::BuildRequestBody(const ModelCall& call) const {
  using nlohmann::json;
  json messages = json::array();
  if (!call.system.empty()) {
    messages.push_back({{"role", "system"}, {"content", call.system}});
  }
  for (std::size_t i = 0; i < call.messages.size(); ++i) {
    const auto& m = call.messages[i];
    bool last = i + 1 == call.messages.size();
    if (last && !call.image.empty()) {
      json parts = json::array();
      parts.push_back({{"type", "text"}, {"text", m.text}});
      parts.push_back(
          {{"type", "image_url"},
           {"image_url",
            "data:" + settings_.image_mime + ";base64," + Base64Encode(call.image)}});
      messages.push_back({{"role", m.role}, {"content", std::move(parts)}});
    } else {
      messages.push_back({{"role", m.role}, {"content", m.text}});
    }
  }
  json body = {{"model", settings_.model},
               {"messages", std::move(messages)},
               {"temperature", 0}};
  return body.dump();
}

std::string HttpModelClient::Complete(const ModelCall& call) {
  httplib::Client client(settings_.base_url);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(call.deadline);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      call.deadline - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (!settings_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + settings_.api_key);
  }

  auto result = client.Post(settings_.path, headers, BuildRequestBody(call),
                            "application/json");
  if (!result) {
    auto err = result.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw Error(ErrorCode::kUpstreamTimeout, "model call timed out");
    }
    throw Error(ErrorCode::kUpstreamRejected,
                "model call failed: " + httplib::to_string(err));
  }
  if (result->status == 408 || result->status == 504) {
    throw Error(ErrorCode::kUpstreamTimeout, "model call timed out upstream");
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorCode::kUpstreamRejected,
                "model returned HTTP " + std::to_string(result->status));
  }
  auto reply = nlohmann::json::parse(result->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") ||
      !reply["choices"].is_array() || reply["choices"].empty()) {
    throw Error(ErrorCode::kUpstreamRejected, "model reply is not a completion");
  }
  const auto& message = reply["choices"][0]["message"];
  if (!message.is_object() || !message.contains("content") ||
      !message["content"].is_string()) {
    throw Error(ErrorCode::kUpstreamRejected, "model reply has no text content");
  }
  return message["content"].get<std::string>();
}

}  // namespace ecobee
