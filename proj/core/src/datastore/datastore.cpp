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

#include "rmon/datastore/datastore.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <system_error>
#include <thread>

#include "rmon/common/digest.hpp"
#include "rmon/common/error.hpp"
#include "rmon/registry/study_registry.hpp"

namespace fs = std::filesystem;

namespace rmon {
namespace {

bool has_line_break_or_space(std::string_view text) {
    return text.find_first_of(" \t\r\n") != std::string_view::npos;
}

std::string read_file(fs::path const& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::StorageFailure, "cannot open " + p.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(fs::path const& target, std::string_view bytes) {
    static std::atomic<std::uint64_t> counter{0};
    auto const tmp = target.parent_path() /
                     ("tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
                      std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            throw Error(ErrorCode::StorageFailure, "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::StorageFailure, "cannot rename into " + target.string());
    }
}

struct LogRecord {
    std::string header_id;
    std::optional<Commit> commit;  // nullopt if the body does not decode
    bool intact = false;           // body complete and re-hashes to header_id
};

bool parse_header(std::string_view log, std::size_t pos, std::string& id, std::size_t& len, std::size_t& body) {
    if (pos + 66 > log.size()) {
        return false;
    }
    auto const candidate = log.substr(pos, 64);
    if (!is_lower_hex(candidate) || log[pos + 64] != ' ') {
        return false;
    }
    auto const nl = log.find('\n', pos + 65);
    if (nl == std::string_view::npos || nl == pos + 65 || nl - (pos + 65) > 12) {
        return false;
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(log.data() + pos + 65, log.data() + nl, value);
    if (ec != std::errc{} || ptr != log.data() + nl) {
        return false;
    }
    id = std::string(candidate);
    len = value;
    body = nl + 1;
    return true;
}

/// Offset of the next line start after `from` that parses as a record header.
std::optional<std::size_t> resync(std::string_view log, std::size_t from) {
    auto next = log.find('\n', from);
    while (next != std::string_view::npos) {
        std::string id;
        std::size_t len = 0;
        std::size_t body = 0;
        if (parse_header(log, next + 1, id, len, body)) {
            return next + 1;
        }
        next = log.find('\n', next + 1);
    }
    return std::nullopt;
}

/// Splits a log into records. After a damaged record the scan resynchronizes
/// on the next well-formed header, so one corrupt record does not hide the
/// rest of the history.
std::vector<LogRecord> scan_log(std::string_view log) {
    std::vector<LogRecord> out;
    std::size_t pos = 0;
    while (pos < log.size()) {
        std::string id;
        std::size_t len = 0;
        std::size_t body = 0;
        if (!parse_header(log, pos, id, len, body)) {
            auto const next = resync(log, pos);
            if (!next) {
                break;
            }
            pos = *next;
            continue;
        }
        LogRecord rec;
        rec.header_id = id;
        auto const available = std::min(len, log.size() - body);
        auto const text = log.substr(body, available);
        rec.commit = decode_commit(text);
        rec.intact = available == len && rec.commit && sha256_hex(text) == id;
        if (rec.commit) {
            rec.commit->commit_id = id;
        }
        bool const advance_by_length = rec.intact || available < len;
        out.push_back(std::move(rec));
        if (advance_by_length) {
            pos = body + available;
        } else {
            // the length prefix may be what is damaged
            auto const next = resync(log, body);
            if (!next) {
                break;
            }
            pos = *next;
        }
    }
    return out;
}

}  // namespace

ObjectId ObjectId::of(std::string_view bytes) { return ObjectId{sha256_hex(bytes)}; }

bool ObjectId::well_formed() const noexcept { return hex.size() == 64 && is_lower_hex(hex); }

std::string encode_commit(Commit const& c) {
    std::string out = "entries " + std::to_string(c.entries.size()) + "\n";
    for (auto const& e : c.entries) {
        out += e.path;
        out += ' ';
        out += e.oid.hex;
        out += '\n';
    }
    out += "message " + c.message + "\n";
    out += "parent " + c.parent_id.value_or("-") + "\n";
    out += "timestamp " + format_instant(c.timestamp) + "\n";
    return out;
}

std::string compute_commit_id(Commit const& c) { return sha256_hex(encode_commit(c)); }

std::optional<Commit> decode_commit(std::string_view body) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto const nl = body.find('\n', pos);
        if (nl == std::string_view::npos) {
            return std::nullopt;  // every field is newline-terminated
        }
        lines.push_back(body.substr(pos, nl - pos));
        pos = nl + 1;
    }
    auto strip = [](std::string_view line, std::string_view key, std::string_view& value) {
        if (line.size() < key.size() + 1 || line.substr(0, key.size()) != key || line[key.size()] != ' ') {
            return false;
        }
        value = line.substr(key.size() + 1);
        return true;
    };
    if (lines.size() < 4) {
        return std::nullopt;
    }
    std::string_view value;
    if (!strip(lines[0], "entries", value)) {
        return std::nullopt;
    }
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc{} || ptr != value.data() + value.size() || lines.size() != n + 4) {
        return std::nullopt;
    }
    Commit c;
    for (std::size_t i = 1; i <= n; ++i) {
        auto const sp = lines[i].rfind(' ');
        if (sp == std::string_view::npos || sp == 0) {
            return std::nullopt;
        }
        ManifestEntry e{std::string(lines[i].substr(0, sp)), ObjectId{std::string(lines[i].substr(sp + 1))}};
        if (!e.oid.well_formed() || has_line_break_or_space(e.path)) {
            return std::nullopt;
        }
        c.entries.push_back(std::move(e));
    }
    if (!strip(lines[n + 1], "message", value)) {
        return std::nullopt;
    }
    c.message = std::string(value);
    if (!strip(lines[n + 2], "parent", value)) {
        return std::nullopt;
    }
    if (value != "-") {
        if (value.size() != 64 || !is_lower_hex(value)) {
            return std::nullopt;
        }
        c.parent_id = std::string(value);
    }
    if (!strip(lines[n + 3], "timestamp", value)) {
        return std::nullopt;
    }
    try {
        c.timestamp = parse_instant(value);
    } catch (Error const&) {
        return std::nullopt;
    }
    if (encode_commit(c) != body) {
        return std::nullopt;  // not canonical
    }
    return c;
}

struct Datastore::Dataset {
    std::mutex mutex;
    std::vector<Commit> history;
    std::map<std::string, ObjectId> manifest;
};

Datastore::Datastore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

Datastore::~Datastore() = default;

fs::path Datastore::object_path(std::string_view study_id, ObjectId const& oid) const {
    return root_ / std::string(study_id) / "objects" / oid.hex.substr(0, 2) / oid.hex.substr(2);
}

fs::path Datastore::log_path(std::string_view study_id) const { return root_ / std::string(study_id) / "log"; }

Datastore::Dataset* Datastore::find_dataset(std::string_view study_id) const {
    std::lock_guard lock(datasets_mutex_);
    auto it = datasets_.find(study_id);
    if (it != datasets_.end()) {
        return it->second.get();
    }
    if (!is_valid_identifier(study_id) || !fs::exists(log_path(study_id))) {
        return nullptr;
    }
    // Load an existing dataset from its log.
    auto ds = std::make_unique<Dataset>();
    auto const log = read_file(log_path(study_id));
    for (auto& rec : scan_log(log)) {
        if (!rec.commit) {
            continue;
        }
        for (auto const& e : rec.commit->entries) {
            ds->manifest.emplace(e.path, e.oid);
        }
        ds->history.push_back(std::move(*rec.commit));
    }
    auto* raw = ds.get();
    datasets_.emplace(std::string(study_id), std::move(ds));
    return raw;
}

Datastore::Dataset& Datastore::dataset(std::string_view study_id) const {
    auto* ds = find_dataset(study_id);
    if (ds == nullptr) {
        throw Error(ErrorCode::NotInitialized, "no dataset for study '" + std::string(study_id) + "'");
    }
    return *ds;
}

bool Datastore::has_dataset(std::string_view study_id) const { return find_dataset(study_id) != nullptr; }

Commit Datastore::init_dataset(std::string_view study_id, Instant timestamp, std::string_view message) {
    if (!is_valid_identifier(study_id)) {
        throw Error(ErrorCode::InvalidArgument, "invalid study id '" + std::string(study_id) + "'");
    }
    if (message.find('\n') != std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument, "commit message must be a single line");
    }
    if (find_dataset(study_id) != nullptr) {
        throw Error(ErrorCode::AlreadyInitialized, "dataset '" + std::string(study_id) + "' exists");
    }
    std::lock_guard lock(datasets_mutex_);
    if (datasets_.contains(study_id)) {
        throw Error(ErrorCode::AlreadyInitialized, "dataset '" + std::string(study_id) + "' exists");
    }
    fs::create_directories(root_ / std::string(study_id) / "objects");
    Commit root;
    root.timestamp = timestamp;
    root.message = std::string(message);
    auto const body = encode_commit(root);
    root.commit_id = sha256_hex(body);
    std::ofstream out(log_path(study_id), std::ios::binary | std::ios::trunc);
    out << root.commit_id << ' ' << body.size() << '\n' << body;
    out.flush();
    if (!out) {
        throw Error(ErrorCode::StorageFailure, "cannot write log for '" + std::string(study_id) + "'");
    }
    auto ds = std::make_unique<Dataset>();
    ds->history.push_back(root);
    datasets_.emplace(std::string(study_id), std::move(ds));
    return root;
}

ObjectId Datastore::put_object(std::string_view study_id, std::string_view bytes) {
    if (bytes.empty()) {
        throw Error(ErrorCode::EmptyObject, "objects must be non-empty");
    }
    dataset(study_id);
    auto oid = ObjectId::of(bytes);
    auto const path = object_path(study_id, oid);
    std::error_code ec;
    if (fs::exists(path, ec)) {
        return oid;
    }
    fs::create_directories(path.parent_path());
    write_file_atomic(path, bytes);
    return oid;
}

std::string Datastore::read_object(std::string_view study_id, ObjectId const& oid) const {
    if (!oid.well_formed() || !has_object(study_id, oid)) {
        throw Error(ErrorCode::UnknownObject, "no object " + oid.hex);
    }
    return read_file(object_path(study_id, oid));
}

bool Datastore::has_object(std::string_view study_id, ObjectId const& oid) const {
    std::error_code ec;
    return oid.well_formed() && fs::is_regular_file(object_path(study_id, oid), ec);
}

Commit Datastore::commit_batch(std::string_view study_id, std::string_view logical_path, ObjectId const& oid,
                               std::string_view message, Instant timestamp) {
    if (logical_path.empty() || has_line_break_or_space(logical_path)) {
        throw Error(ErrorCode::InvalidArgument, "logical path must be non-empty without whitespace");
    }
    if (message.find('\n') != std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument, "commit message must be a single line");
    }
    auto& ds = dataset(study_id);
    if (!has_object(study_id, oid)) {
        throw Error(ErrorCode::UnknownObject, "no object " + oid.hex);
    }
    std::lock_guard lock(ds.mutex);
    if (ds.manifest.contains(std::string(logical_path))) {
        throw Error(ErrorCode::PathCollision, "path '" + std::string(logical_path) + "' already committed");
    }
    Commit c;
    c.parent_id = ds.history.back().commit_id;
    c.entries.push_back({std::string(logical_path), oid});
    c.timestamp = timestamp;
    c.message = std::string(message);
    auto const body = encode_commit(c);
    c.commit_id = sha256_hex(body);
    {
        std::ofstream out(log_path(study_id), std::ios::binary | std::ios::app);
        out << c.commit_id << ' ' << body.size() << '\n' << body;
        out.flush();
        if (!out) {
            throw Error(ErrorCode::StorageFailure, "cannot append to log for '" + std::string(study_id) + "'");
        }
    }
    ds.manifest.emplace(std::string(logical_path), oid);
    ds.history.push_back(c);
    return c;
}

std::vector<Commit> Datastore::history(std::string_view study_id) const {
    auto& ds = dataset(study_id);
    std::lock_guard lock(ds.mutex);
    return ds.history;
}

Commit Datastore::head(std::string_view study_id) const {
    auto& ds = dataset(study_id);
    std::lock_guard lock(ds.mutex);
    return ds.history.back();
}

std::map<std::string, ObjectId> Datastore::manifest(std::string_view study_id) const {
    auto& ds = dataset(study_id);
    std::lock_guard lock(ds.mutex);
    return ds.manifest;
}

std::optional<ObjectId> Datastore::lookup(std::string_view study_id, std::string_view logical_path) const {
    auto& ds = dataset(study_id);
    std::lock_guard lock(ds.mutex);
    auto const it = ds.manifest.find(std::string(logical_path));
    if (it == ds.manifest.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<ObjectId> Datastore::list_objects(std::string_view study_id) const {
    std::vector<ObjectId> out;
    auto const dir = root_ / std::string(study_id) / "objects";
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        return out;
    }
    for (auto const& shard : fs::directory_iterator(dir)) {
        if (!shard.is_directory()) {
            continue;
        }
        auto const prefix = shard.path().filename().string();
        for (auto const& file : fs::directory_iterator(shard.path())) {
            auto const name = file.path().filename().string();
            if (!file.is_regular_file() || name.rfind("tmp.", 0) == 0) {
                continue;
            }
            out.push_back(ObjectId{prefix + name});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

FsckReport Datastore::fsck(std::string_view study_id) const {
    dataset(study_id);
    FsckReport report;
    std::set<std::string> present;
    for (auto const& oid : list_objects(study_id)) {
        present.insert(oid.hex);
        if (!oid.well_formed() || sha256_hex(read_file(object_path(study_id, oid))) != oid.hex) {
            report.corrupted_objects.push_back(oid.hex);
        }
    }
    std::string log;
    try {
        log = read_file(log_path(study_id));
    } catch (Error const&) {
    }
    std::optional<std::string> expected_parent;
    bool first = true;
    std::set<std::string> missing;
    for (auto const& rec : scan_log(log)) {
        bool ok = rec.intact;
        if (ok) {
            ok = first ? !rec.commit->parent_id.has_value() : rec.commit->parent_id == expected_parent;
        }
        if (!ok) {
            report.corrupted_commits.push_back(rec.header_id);
        }
        if (rec.commit) {
            for (auto const& e : rec.commit->entries) {
                if (!present.contains(e.oid.hex)) {
                    missing.insert(e.oid.hex);
                }
            }
        }
        expected_parent = rec.header_id;
        first = false;
    }
    // Records lost entirely (e.g. a truncated tail) are visible against the
    // in-memory history.
    {
        auto& ds = dataset(study_id);
        std::lock_guard lock(ds.mutex);
        std::set<std::string> seen;
        for (auto const& rec : scan_log(log)) {
            seen.insert(rec.header_id);
        }
        for (auto const& c : ds.history) {
            if (!seen.contains(c.commit_id) &&
                std::find(report.corrupted_commits.begin(), report.corrupted_commits.end(), c.commit_id) ==
                    report.corrupted_commits.end()) {
                report.corrupted_commits.push_back(c.commit_id);
            }
        }
    }
    report.missing_objects.assign(missing.begin(), missing.end());
    return report;
}

void replay_history(Datastore const& source, Datastore& target, std::string_view study_id) {
    auto const history = source.history(study_id);
    if (history.empty()) {
        return;
    }
    target.init_dataset(study_id, history.front().timestamp, history.front().message);
    for (std::size_t i = 1; i < history.size(); ++i) {
        auto const& c = history[i];
        for (auto const& e : c.entries) {
            auto const oid = target.put_object(study_id, source.read_object(study_id, e.oid));
            target.commit_batch(study_id, e.path, oid, c.message, c.timestamp);
        }
    }
}

}  // namespace rmon
