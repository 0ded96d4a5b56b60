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

#ifndef ECOBEE_MODEL_CLIENT_H_
#define ECOBEE_MODEL_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecobee/error.h"

namespace ecobee {

struct ModelMessage {
  std::string role;  // "user" or "assistant"
  std::string text;
};

// One request to the multimodal model. `image` is a non-owning view that is
// only valid for the duration of Complete().
struct ModelCall {
  std::string system;
  std::vector<ModelMessage> messages;
  std::span<const std::uint8_t> image;
  std::chrono::milliseconds deadline{20000};
};

// Seam to the hosted model. Implementations return the assistant text or
// throw Error with kUpstreamTimeout (deadline exceeded, retryable) or
// kUpstreamRejected (anything else).
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string Complete(const ModelCall& call) = 0;
};

// Deterministic in-process model for tests and offline runs.
//  - Calls carrying an image answer with the reply registered for the
//    SHA-256 of the image bytes ("[]" if none).
//  - Text-only calls answer "context-digest:<sha256 of the system prompt>".
//  - Failures can be injected per image digest or for chat calls.
class StubModelClient : public ModelClient {
 public:
  // Registers vision replies from a JSON object mapping image SHA-256 to the
  // label array to return.
  void LoadVisionReplies(const std::filesystem::path& path);
  void SetVisionReply(const std::string& image_digest, std::string reply);
  // Fails the next `times` calls for that digest with `code`.
  void SetVisionFailure(const std::string& image_digest, ErrorCode code,
                        int times = 1000000);
  void SetChatFailure(std::optional<ErrorCode> code);

  std::string Complete(const ModelCall& call) override;

  int call_count() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::string> vision_replies_;
  std::map<std::string, std::pair<ErrorCode, int>> vision_failures_;
  std::optional<ErrorCode> chat_failure_;
  int calls_ = 0;
};

struct HttpModelSettings {
  std::string base_url;  // scheme://host[:port], e.g. https://api.mistral.ai
  std::string path = "/v1/chat/completions";
  std::string api_key;
  std::string model = "pixtral-12b-2409";
  std::string image_mime = "image/jpeg";

  // ECOBEE_MODEL_BASE_URL, ECOBEE_MODEL_PATH, ECOBEE_MODEL_API_KEY,
  // ECOBEE_MODEL_NAME override the given defaults.
  static HttpModelSettings FromEnvironment(HttpModelSettings defaults);
};

// Chat-completions style JSON over HTTP(S). The image, if any, travels as a
// single base64 data-URL content part.
class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(HttpModelSettings settings);
  std::string Complete(const ModelCall& call) override;

  // Exposed for tests: the JSON body sent upstream.
  std::string BuildRequestBody(const ModelCall& call) const;

 private:
  HttpModelSettings settings_;
};

}  // namespace ecobee

#endif  // ECOBEE_MODEL_CLIENT_H_
