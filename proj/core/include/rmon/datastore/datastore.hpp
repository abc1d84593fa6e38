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

#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmon/common/time.hpp"

namespace rmon {

/// Content address: lowercase hex SHA-256 of the object bytes.
struct ObjectId {
    std::string hex;

    [[nodiscard]] static ObjectId of(std::string_view bytes);
    [[nodiscard]] bool well_formed() const noexcept;

    friend auto operator<=>(ObjectId const&, ObjectId const&) = default;
};

struct ManifestEntry {
    std::string path;
    ObjectId oid;

    friend bool operator==(ManifestEntry const&, ManifestEntry const&) = default;
};

/// A commit stores the entries it adds (its delta); the full manifest of a
/// commit is the union of the deltas along its parent chain. Because the
/// commit id covers parent_id, it pins the whole manifest.
struct Commit {
    std::string commit_id;
    std::optional<std::string> parent_id;
    std::vector<ManifestEntry> entries;  // sorted by path
    Instant timestamp{};
    std::string message;

    friend bool operator==(Commit const&, Commit const&) = default;
};

/// Canonical commit encoding (UTF-8, keys in sorted order, every field
/// newline-terminated):
///
///   entries <n>\n
///   <path> <oid>\n          (n lines, sorted by path)
///   message <text>\n
///   parent <commit id or ->\n
///   timestamp <ISO-8601 UTC>\n
[[nodiscard]] std::string encode_commit(Commit const& c);

/// SHA-256 hex of encode_commit(c); c.commit_id is ignored.
[[nodiscard]] std::string compute_commit_id(Commit const& c);

/// Parses a canonical body. Returns nullopt on any deviation from the format.
[[nodiscard]] std::optional<Commit> decode_commit(std::string_view body);

struct FsckReport {
    /// Object files whose bytes no longer hash to their name.
    std::vector<std::string> corrupted_objects;
    /// Manifest entries whose object file is absent.
    std::vector<std::string> missing_objects;
    /// Log records that fail to parse, re-hash, or chain to their parent.
    std::vector<std::string> corrupted_commits;

    [[nodiscard]] bool clean() const noexcept {
        return corrupted_objects.empty() && missing_objects.empty() && corrupted_commits.empty();
    }
};

/// Append-only, content-addressed store with one linear commit history per
/// study. On-disk layout:
///
///   <root>/<study_id>/objects/<first 2 hex>/<remaining 62 hex>
///   <root>/<study_id>/log     records "<commit id> <body length>\n<body>"
///
/// put_object may run concurrently (temp file + atomic rename); commits to a
/// study are serialized.
class Datastore {
  public:
    explicit Datastore(std::filesystem::path root);
    ~Datastore();
    Datastore(Datastore const&) = delete;
    Datastore& operator=(Datastore const&) = delete;

    [[nodiscard]] std::filesystem::path const& root() const noexcept { return root_; }

    /// Root commit with an empty manifest. Throws AlreadyInitialized.
    Commit init_dataset(std::string_view study_id, Instant timestamp, std::string_view message = "init dataset");
    [[nodiscard]] bool has_dataset(std::string_view study_id) const;

    /// Throws EmptyObject for empty input; repeated puts are no-ops.
    ObjectId put_object(std::string_view study_id, std::string_view bytes);
    /// Throws UnknownObject.
    [[nodiscard]] std::string read_object(std::string_view study_id, ObjectId const& oid) const;
    [[nodiscard]] bool has_object(std::string_view study_id, ObjectId const& oid) const;

    /// Appends a commit adding logical_path -> oid. Throws NotInitialized,
    /// UnknownObject, PathCollision, InvalidArgument (path or message with
    /// whitespace breaks).
    Commit commit_batch(std::string_view study_id, std::string_view logical_path, ObjectId const& oid,
                        std::string_view message, Instant timestamp);

    [[nodiscard]] std::vector<Commit> history(std::string_view study_id) const;
    [[nodiscard]] Commit head(std::string_view study_id) const;
    [[nodiscard]] std::map<std::string, ObjectId> manifest(std::string_view study_id) const;
    [[nodiscard]] std::optional<ObjectId> lookup(std::string_view study_id, std::string_view logical_path) const;

    /// Distinct object files currently on disk for a study.
    [[nodiscard]] std::vector<ObjectId> list_objects(std::string_view study_id) const;

    /// Re-hashes every object and every log record from disk.
    [[nodiscard]] FsckReport fsck(std::string_view study_id) const;

    [[nodiscard]] std::filesystem::path object_path(std::string_view study_id, ObjectId const& oid) const;
    [[nodiscard]] std::filesystem::path log_path(std::string_view study_id) const;

  private:
    struct Dataset;
    Dataset& dataset(std::string_view study_id) const;
    Dataset* find_dataset(std::string_view study_id) const;

    std::filesystem::path root_;
    mutable std::mutex datasets_mutex_;
    mutable std::map<std::string, std::unique_ptr<Dataset>, std::less<>> datasets_;
};

/// Replays `study_id`'s history from `source` into a fresh dataset in
/// `target`, reusing each commit's timestamp and message. Identical inputs
/// reproduce identical object and commit ids.
void replay_history(Datastore const& source, Datastore& target, std::string_view study_id);

}  // namespace rmon
