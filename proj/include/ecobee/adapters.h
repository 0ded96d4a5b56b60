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

#ifndef ECOBEE_ADAPTERS_H_
#define ECOBEE_ADAPTERS_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "ecobee/boundary.h"
#include "ecobee/intake.h"
#include "ecobee/model_client.h"

namespace ecobee {

struct AdapterLimits {
  std::size_t max_image_bytes = 8 * 1024 * 1024;
  std::chrono::milliseconds deadline{20000};
  int timeout_retries = 1;
  std::ptrdiff_t max_in_flight = 8;
};

// Caps concurrent upstream calls. Waiting for a slot counts against the
// call's deadline.
class InFlightGate {
 public:
  explicit InFlightGate(std::ptrdiff_t capacity);

  class Slot {
   public:
    explicit Slot(InFlightGate* gate) : gate_(gate) {}
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;
    ~Slot() { gate_->semaphore_.release(); }

   private:
    InFlightGate* gate_;
  };

  // Throws kUpstreamTimeout if no slot frees up within `wait`.
  Slot Acquire(std::chrono::milliseconds wait);

 private:
  std::counting_semaphore<4096> semaphore_;
};

// Image submitted for labelling. Move-only; the bytes are released when
// the request is consumed.
struct VisionRequest {
  TransientImage image;
  std::optional<std::string> domain_hint;
};

// Strict parse of the model's label reply: a JSON array of
// {domain, option_key, confidence, caption?}. Throws kUpstreamRejected on
// anything else.
std::vector<LabelledItem> ParseLabelReply(std::string_view reply);

class VisionClassifier {
 public:
  VisionClassifier(std::shared_ptr<ModelClient> client, AdapterLimits limits,
                   std::shared_ptr<InFlightGate> gate);

  // Errors: kInvalidArgument (empty image), kImageTooLarge, kUpstreamTimeout
  // (after the configured retries), kUpstreamRejected.
  std::vector<LabelledItem> classify_image(VisionRequest request) const;

  static std::string Instruction(const std::optional<std::string>& domain_hint);

 private:
  std::shared_ptr<ModelClient> client_;
  AdapterLimits limits_;
  std::shared_ptr<InFlightGate> gate_;
};

struct OpportunityCard {
  std::string id;
  std::string title;
  std::string description;
  std::string campus;
  std::vector<Boundary> related_boundaries;  // non-empty
  std::optional<std::string> link;
};

// JSON array of {id, title, description, campus, related_boundaries: [codes],
// link?}.
std::vector<OpportunityCard> LoadOpportunityCatalog(const std::filesystem::path& path);
std::vector<OpportunityCard> ParseOpportunityCatalog(std::string_view json_text);

enum class ChatRole { kUser, kAssistant };

struct ChatTurn {
  ChatRole role = ChatRole::kUser;
  std::string text;

  bool operator==(const ChatTurn&) const = default;
};

std::string_view ChatRoleName(ChatRole role);
std::optional<ChatRole> ParseChatRole(std::string_view name);

inline constexpr std::size_t kChatLowestBoundaries = 3;
inline constexpr std::size_t kChatMaxCards = 5;

// Cards related to one of the user's three lowest boundaries, ordered by
// the best-ranked boundary they touch and then id; at most five.
std::vector<OpportunityCard> select_opportunities(
    const BoundaryScores& scores, const std::vector<OpportunityCard>& catalog);

struct ChatContext {
  std::string text;
  std::vector<std::string> card_ids;
  std::string digest;  // SHA-256 of text
};

ChatContext build_chat_context(const BoundaryScores& scores,
                               const std::vector<OpportunityCard>& catalog,
                               const std::optional<std::string>& career_interest);

class ChatService {
 public:
  ChatService(std::shared_ptr<ModelClient> client, AdapterLimits limits,
              std::shared_ptr<InFlightGate> gate);

  // Errors: kEmptyHistory, kInvalidArgument (history not ending with a user
  // turn or containing empty text), kUpstreamTimeout, kUpstreamRejected.
  ChatTurn chat(const std::vector<ChatTurn>& history, const BoundaryScores& scores,
                const std::vector<OpportunityCard>& opportunities,
                const std::optional<std::string>& career_interest) const;

 private:
  std::shared_ptr<ModelClient> client_;
  AdapterLimits limits_;
  std::shared_ptr<InFlightGate> gate_;
};

}  // namespace ecobee

#endif  // ECOBEE_ADAPTERS_H_
