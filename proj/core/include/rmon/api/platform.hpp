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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmon/api/notifications.hpp"
#include "rmon/common/ids.hpp"
#include "rmon/common/time.hpp"
#include "rmon/datastore/datastore.hpp"
#include "rmon/enrollment/enrollment.hpp"
#include "rmon/ingestion/ingestion.hpp"
#include "rmon/qc/quality_control.hpp"
#include "rmon/registry/study_registry.hpp"

namespace rmon {

struct PlatformOptions {
    std::filesystem::path data_root = "data";
    /// Address devices are told to upload to (embedded in QR payloads).
    std::string server_address = "http://127.0.0.1:8080";
    /// Bearer credential for admin endpoints; empty disables admin access.
    std::string admin_token;
    /// Seed for notification message ids.
    std::uint64_t id_seed = 1;
};

struct Activation {
    Registration registration;
    /// Remote configuration the device runs with.
    StudyConfig config;
};

struct CloseSummary {
    StudyConfig config;
    std::vector<Registration> auto_left;
};

/// Composition root of the server: owns every module and exposes the
/// operations the HTTP layer adapts. Each operation delegates its rules to the
/// owning module.
class Platform {
  public:
    Platform(PlatformOptions options, Clock const& clock,
             std::unique_ptr<SecretSource> secrets = std::make_unique<CryptoSecretSource>());

    // Admin surface.
    StudyConfig create_study(StudyConfig cfg);
    [[nodiscard]] std::vector<StudyConfig> list_studies() const;
    [[nodiscard]] StudyConfig get_config(std::string_view study_id) const;
    CloseSummary close_study(std::string_view study_id);
    /// n_codes defaults to the study's configured count.
    std::vector<EnrollmentToken> generate_tokens(std::string_view study_id, std::string_view subject_label,
                                                 std::optional<int> n_codes = std::nullopt,
                                                 std::optional<std::string> auth_hint = std::nullopt);
    [[nodiscard]] StudyOverview study_overview(std::string_view study_id) const;
    [[nodiscard]] std::vector<qc::ParticipantStatus> qc_table(std::string_view study_id,
                                                              std::optional<Instant> now = std::nullopt) const;
    PushMessage send_notification(std::string_view study_id, std::string title, std::string body,
                                  Receiver receiver);

    // Device surface.
    Activation enroll(std::string_view payload, std::string_view device_id, bool switch_device = false);
    Registration leave(std::string_view study_id, std::string_view token_id, Secret128 const& secret,
                       LeftReason reason);
    BatchReceipt submit_batch(SensorBatch const& batch, Secret128 const& secret);
    std::vector<PushMessage> poll_notifications(std::string_view study_id, std::string_view token_id,
                                                Secret128 const& secret);

    [[nodiscard]] PlatformOptions const& options() const noexcept { return options_; }
    [[nodiscard]] Clock const& clock() const noexcept { return clock_; }
    [[nodiscard]] StudyRegistry const& registry() const noexcept { return registry_; }
    [[nodiscard]] EnrollmentBook const& enrollment() const noexcept { return enrollment_; }
    [[nodiscard]] Ingestion const& ingestion() const noexcept { return ingestion_; }
    [[nodiscard]] Datastore& datastore() noexcept { return datastore_; }
    [[nodiscard]] Datastore const& datastore() const noexcept { return datastore_; }
    [[nodiscard]] NotificationCenter const& notifications() const noexcept { return notifications_; }

  private:
    PlatformOptions options_;
    Clock const& clock_;
    std::unique_ptr<SecretSource> secrets_;
    StudyRegistry registry_;
    EnrollmentBook enrollment_;
    Datastore datastore_;
    Ingestion ingestion_;
    NotificationCenter notifications_;
};

}  // namespace rmon
