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

#ifndef ECOBEE_ERROR_H_
#define ECOBEE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecobee {

// Machine-readable failure categories. Every Error carries one; the HTTP
// layer and the CLI map them to status codes and exit codes.
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kMalformedCsv,
  // intake
  kUnknownDomain,
  kUnknownOption,
  kMalformedBarcode,
  kUnknownBarcode,
  // factor tables and scoring
  kMissingColumn,
  kNegativeWeight,
  kDuplicateRow,
  kEmptyDomain,
  kEmptyItems,
  kInvalidWeights,
  // recommendation
  kDuplicateActionId,
  kIsolatedAction,
  kDisconnectedGraph,
  kInvalidParameter,
  kEmptyCorpus,
  kModelGraphMismatch,
  kNoFeasibleActions,
  kInvalidModelFile,
  // leaderboard
  kInvalidEntry,
  kConsistencyError,
  // model adapters
  kImageTooLarge,
  kUpstreamTimeout,
  kUpstreamRejected,
  kEmptyHistory,
  // service
  kInvalidConfig,
};

// Lower-snake wire name, e.g. "unknown_option".
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  std::string_view code_name() const { return ErrorCodeName(code_); }

 private:
  ErrorCode code_;
};

}  // namespace ecobee

#endif  // ECOBEE_ERROR_H_
