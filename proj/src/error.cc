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

#include "ecobee/error.h"

namespace ecobee {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIoError: return "io_error";
    case ErrorCode::kMalformedCsv: return "malformed_csv";
    case ErrorCode::kUnknownDomain: return "unknown_domain";
    case ErrorCode::kUnknownOption: return "unknown_option";
    case ErrorCode::kMalformedBarcode: return "malformed_barcode";
    case ErrorCode::kUnknownBarcode: return "unknown_barcode";
    case ErrorCode::kMissingColumn: return "missing_column";
    case ErrorCode::kNegativeWeight: return "negative_weight";
    case ErrorCode::kDuplicateRow: return "duplicate_row";
    case ErrorCode::kEmptyDomain: return "empty_domain";
    case ErrorCode::kEmptyItems: return "empty_items";
    case ErrorCode::kInvalidWeights: return "invalid_weights";
    case ErrorCode::kDuplicateActionId: return "duplicate_action_id";
    case ErrorCode::kIsolatedAction: return "isolated_action";
    case ErrorCode::kDisconnectedGraph: return "disconnected_graph";
    case ErrorCode::kInvalidParameter: return "invalid_parameter";
    case ErrorCode::kEmptyCorpus: return "empty_corpus";
    case ErrorCode::kModelGraphMismatch: return "model_graph_mismatch";
    case ErrorCode::kNoFeasibleActions: return "no_feasible_actions";
    case ErrorCode::kInvalidModelFile: return "invalid_model_file";
    case ErrorCode::kInvalidEntry: return "invalid_entry";
    case ErrorCode::kConsistencyError: return "consistency_error";
    case ErrorCode::kImageTooLarge: return "image_too_large";
    case ErrorCode::kUpstreamTimeout: return "upstream_timeout";
    case ErrorCode::kUpstreamRejected: return "upstream_rejected";
    case ErrorCode::kEmptyHistory: return "empty_history";
    case ErrorCode::kInvalidConfig: return "invalid_config";
  }
  return "unknown";
}

}  // namespace ecobee
