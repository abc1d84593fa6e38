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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmon/ingestion/ingestion.hpp"

namespace rmon::sim {

/// On-disk queue of framed uploads awaiting a receipt. Entries are named
/// "<created_ms>_<batch_id>.batch" so directory order is creation order.
/// Writes go through a temporary file and a rename.
class LocalBuffer {
  public:
    explicit LocalBuffer(std::filesystem::path dir);

    /// Idempotent for a given batch_id.
    void put(SensorBatch const& batch);
    [[nodiscard]] std::vector<std::string> entries() const;
    /// Throws Error(MalformedPayload) for a damaged entry.
    [[nodiscard]] SensorBatch load(std::string const& entry) const;
    void remove(std::string const& entry);
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::filesystem::path const& dir() const noexcept { return dir_; }

  private:
    std::filesystem::path dir_;
};

/// Writes text to path atomically (temporary file + rename).
void write_file_atomic(std::filesystem::path const& path, std::string_view text);
[[nodiscard]] std::optional<std::string> read_file(std::filesystem::path const& path);

}  // namespace rmon::sim
