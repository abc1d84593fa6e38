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

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rmon/common/error.hpp"

namespace rmon::json_util {

/// Strict request-document access. Every violation is Error(MalformedPayload).

inline void require_object(nlohmann::json const& doc, std::initializer_list<std::string_view> allowed) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::MalformedPayload, "expected a JSON object");
    }
    for (auto const& item : doc.items()) {
        bool known = false;
        for (auto const key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(ErrorCode::MalformedPayload, "unknown field '" + item.key() + "'");
        }
    }
}

inline nlohmann::json const& field(nlohmann::json const& doc, std::string const& key) {
    auto const it = doc.find(key);
    if (it == doc.end()) {
        throw Error(ErrorCode::MalformedPayload, "missing field '" + key + "'");
    }
    return *it;
}

inline std::string get_string(nlohmann::json const& doc, std::string const& key) {
    auto const& v = field(doc, key);
    if (!v.is_string()) {
        throw Error(ErrorCode::MalformedPayload, "field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

inline std::optional<std::string> get_optional_string(nlohmann::json const& doc, std::string const& key) {
    auto const it = doc.find(key);
    if (it == doc.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        throw Error(ErrorCode::MalformedPayload, "field '" + key + "' must be a string");
    }
    return it->get<std::string>();
}

inline std::int64_t get_int(nlohmann::json const& doc, std::string const& key) {
    auto const& v = field(doc, key);
    if (!v.is_number_integer()) {
        throw Error(ErrorCode::MalformedPayload, "field '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

inline double get_number(nlohmann::json const& doc, std::string const& key) {
    auto const& v = field(doc, key);
    if (!v.is_number()) {
        throw Error(ErrorCode::MalformedPayload, "field '" + key + "' must be a number");
    }
    return v.get<double>();
}

/// Parses text as JSON, mapping parse errors to MalformedPayload.
inline nlohmann::json parse(std::string_view text) {
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw Error(ErrorCode::MalformedPayload, "body is not valid JSON");
    }
    return doc;
}

}  // namespace rmon::json_util
