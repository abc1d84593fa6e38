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

#include "rmon/sim/local_buffer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmon/common/error.hpp"

namespace rmon::sim {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSuffix = ".batch";

std::string entry_name(SensorBatch const& batch) {
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%015lld", static_cast<long long>(batch.meta.created_at.time_since_epoch().count()));
    return std::string(stamp) + "_" + batch.meta.batch_id + std::string(kSuffix);
}

}  // namespace

void write_file_atomic(fs::path const& path, std::string_view text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) {
            throw Error(ErrorCode::StorageFailure, "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorCode::StorageFailure, "cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::optional<std::string> read_file(fs::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LocalBuffer::LocalBuffer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void LocalBuffer::put(SensorBatch const& batch) { write_file_atomic(dir_ / entry_name(batch), encode_upload(batch)); }

std::vector<std::string> LocalBuffer::entries() const {
    std::vector<std::string> out;
    for (auto const& e : fs::directory_iterator(dir_)) {
        auto name = e.path().filename().string();
        if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
            out.push_back(std::move(name));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SensorBatch LocalBuffer::load(std::string const& entry) const {
    auto const bytes = read_file(dir_ / entry);
    if (!bytes) {
        throw Error(ErrorCode::MalformedPayload, "buffer entry " + entry + " is unreadable");
    }
    return decode_upload(*bytes);
}

void LocalBuffer::remove(std::string const& entry) {
    std::error_code ec;
    fs::remove(dir_ / entry, ec);
}

std::size_t LocalBuffer::size() const { return entries().size(); }

}  // namespace rmon::sim
