// Copyright 2026 The rmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmon {

/// Stable error identifiers. The string form is part of the wire contract
/// ({error_code, detail} documents), so enumerators must not be renamed.
enum class ErrorCode {
    InvalidArgument,
    NonConvergence,
    // study-registry
    DuplicateStudyId,
    InvalidConfig,
    UnknownStudy,
    AlreadyClosed,
    StudyClosed,
    // enrollment
    DuplicateSubjectLabel,
    UnknownSubject,
    MalformedPayload,
    UnknownToken,
    TokenAlreadyUsed,
    NotRegistered,
    AlreadyLeft,
    // ingestion
    UnknownRegistration,
    AuthFailure,
    SensorNotInStudy,
    EmptyPayload,
    ChecksumMismatch,
    // datastore
    AlreadyInitialized,
    NotInitialized,
    EmptyObject,
    UnknownObject,
    PathCollision,
    StorageFailure,
    // quality-control
    NegativeInterval,
    // device-sim
    InvalidSpec,
    ScenarioInvalid,
    TransportFailure,
    // api-service
    Unauthorized,
    NotFound,
    Internal,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// HTTP status the api-service answers with for `code`.
[[nodiscard]] int http_status(ErrorCode code) noexcept;

[[nodiscard]] bool parse_error_code(std::string_view text, ErrorCode& out) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail),
          code_(code),
          detail_(std::move(detail)) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::string const& detail() const noexcept { return detail_; }

  private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace rmon
