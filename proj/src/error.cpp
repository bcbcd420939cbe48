/*
 * Copyright 2026 The truthstd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "truthstd/error.hpp"

namespace truthstd {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "engine.invalid_argument";
    case ErrorCode::kMissingInterpretationEntry:
      return "statement_model.missing_interpretation_entry";
    case ErrorCode::kMalformedStatement:
      return "statement_model.malformed_statement";
    case ErrorCode::kUnknownProposition: return "world_agents.unknown_proposition";
    case ErrorCode::kEmptyEnsemble: return "evaluation.empty_ensemble";
    case ErrorCode::kWeightSumViolation: return "evaluation.weight_sum_violation";
    case ErrorCode::kSignatureInvalid: return "adjudication.signature_invalid";
    case ErrorCode::kCaseState: return "adjudication.case_state";
    case ErrorCode::kEmptyValidationSet:
      return "certification.empty_validation_set";
    case ErrorCode::kBeliefAccessDenied:
      return "certification.belief_access_denied";
    case ErrorCode::kUnknownSystem: return "attestation.unknown_system";
    case ErrorCode::kSchemaError: return "cli_report.schema_error";
    case ErrorCode::kDanglingReference: return "cli_report.dangling_reference";
    case ErrorCode::kIo: return "cli_report.io";
  }
  return "engine.unknown";
}

}  // namespace truthstd
