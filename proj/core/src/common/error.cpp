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

#include "rmon/common/error.hpp"

#include <array>
#include <utility>

namespace rmon {
namespace {

struct ErrorInfo {
    ErrorCode code;
    std::string_view name;
    int status;
};

constexpr std::array kErrors{
    ErrorInfo{ErrorCode::InvalidArgument, "InvalidArgument", 400},
    ErrorInfo{ErrorCode::NonConvergence, "NonConvergence", 422},
    ErrorInfo{ErrorCode::DuplicateStudyId, "DuplicateStudyId", 409},
    ErrorInfo{ErrorCode::InvalidConfig, "InvalidConfig", 400},
    ErrorInfo{ErrorCode::UnknownStudy, "UnknownStudy", 404},
    ErrorInfo{ErrorCode::AlreadyClosed, "AlreadyClosed", 409},
    ErrorInfo{ErrorCode::StudyClosed, "StudyClosed", 409},
    ErrorInfo{ErrorCode::DuplicateSubjectLabel, "DuplicateSubjectLabel", 409},
    ErrorInfo{ErrorCode::UnknownSubject, "UnknownSubject", 404},
    ErrorInfo{ErrorCode::MalformedPayload, "MalformedPayload", 400},
    ErrorInfo{ErrorCode::UnknownToken, "UnknownToken", 404},
    ErrorInfo{ErrorCode::TokenAlreadyUsed, "TokenAlreadyUsed", 409},
    ErrorInfo{ErrorCode::NotRegistered, "NotRegistered", 404},
    ErrorInfo{ErrorCode::AlreadyLeft, "AlreadyLeft", 409},
    ErrorInfo{ErrorCode::UnknownRegistration, "UnknownRegistration", 404},
    ErrorInfo{ErrorCode::AuthFailure, "AuthFailure", 401},
    ErrorInfo{ErrorCode::SensorNotInStudy, "SensorNotInStudy", 422},
    ErrorInfo{ErrorCode::EmptyPayload, "EmptyPayload", 400},
    ErrorInfo{ErrorCode::ChecksumMismatch, "ChecksumMismatch", 422},
    ErrorInfo{ErrorCode::AlreadyInitialized, "AlreadyInitialized", 409},
    ErrorInfo{ErrorCode::NotInitialized, "NotInitialized", 404},
    ErrorInfo{ErrorCode::EmptyObject, "EmptyObject", 400},
    ErrorInfo{ErrorCode::UnknownObject, "UnknownObject", 404},
    ErrorInfo{ErrorCode::PathCollision, "PathCollision", 409},
    ErrorInfo{ErrorCode::StorageFailure, "StorageFailure", 500},
    ErrorInfo{ErrorCode::NegativeInterval, "NegativeInterval", 400},
    ErrorInfo{ErrorCode::InvalidSpec, "InvalidSpec", 400},
    ErrorInfo{ErrorCode::ScenarioInvalid, "ScenarioInvalid", 400},
    ErrorInfo{ErrorCode::TransportFailure, "TransportFailure", 503},
    ErrorInfo{ErrorCode::Unauthorized, "Unauthorized", 401},
    ErrorInfo{ErrorCode::NotFound, "NotFound", 404},
    ErrorInfo{ErrorCode::Internal, "Internal", 500},
};

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    for (auto const& info : kErrors) {
        if (info.code == code) {
            return info.name;
        }
    }
    return "Internal";
}

int http_status(ErrorCode code) noexcept {
    for (auto const& info : kErrors) {
        if (info.code == code) {
            return info.status;
        }
    }
    return 500;
}

bool parse_error_code(std::string_view text, ErrorCode& out) noexcept {
    for (auto const& info : kErrors) {
        if (info.name == text) {
            out = info.code;
            return true;
        }
    }
    return false;
}

}  // namespace rmon
