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

#include <map>
#include <string>

#include "rmon/api/platform.hpp"

namespace rmon::api {

/// Transport-neutral HTTP exchange. Header names are matched
/// case-insensitively.
struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;
    std::string body;

    [[nodiscard]] std::string const* header(std::string_view name) const;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Routes /v1 requests onto a Platform. Stateless apart from the platform
/// reference; safe to call from many threads.
class ApiService {
  public:
    explicit ApiService(Platform& platform) : platform_(platform) {}

    [[nodiscard]] ApiResponse handle(ApiRequest const& request) const;

  private:
    Platform& platform_;
};

}  // namespace rmon::api
