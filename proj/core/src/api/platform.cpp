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

#include "rmon/api/platform.hpp"

#include "rmon/common/error.hpp"

namespace rmon {

Platform::Platform(PlatformOptions options, Clock const& clock, std::unique_ptr<SecretSource> secrets)
    : options_(std::move(options)),
      clock_(clock),
      secrets_(std::move(secrets)),
      enrollment_(registry_),
      datastore_(options_.data_root),
      ingestion_(registry_, enrollment_, datastore_, clock_),
      notifications_(registry_, enrollment_, options_.id_seed) {}

StudyConfig Platform::create_study(StudyConfig cfg) {
    auto const now = clock_.now();
    auto created = registry_.create(std::move(cfg), now);
    datastore_.init_dataset(created.study_id, created.created_at, "init dataset " + created.study_id);
    return created;
}

std::vector<StudyConfig> Platform::list_studies() const { return registry_.list(); }

StudyConfig Platform::get_config(std::string_view study_id) const { return registry_.get(study_id); }

CloseSummary Platform::close_study(std::string_view study_id) {
    CloseSummary summary;
    summary.config = registry_.close(study_id);
    summary.auto_left = enrollment_.close_all(study_id, clock_.now());
    return summary;
}

std::vector<EnrollmentToken> Platform::generate_tokens(std::string_view study_id, std::string_view subject_label,
                                                       std::optional<int> n_codes,
                                                       std::optional<std::string> auth_hint) {
    auto const cfg = registry_.get(study_id);
    return enrollment_.generate_tokens(study_id, subject_label, n_codes.value_or(cfg.n_codes),
                                       options_.server_address, std::move(auth_hint), *secrets_);
}

StudyOverview Platform::study_overview(std::string_view study_id) const {
    return compute_overview(registry_.get(study_id), enrollment_.subject_activity(study_id), clock_.now());
}

std::vector<qc::ParticipantStatus> Platform::qc_table(std::string_view study_id, std::optional<Instant> now) const {
    auto const cfg = registry_.get(study_id);
    return qc::study_table(cfg, enrollment_.registrations(study_id), ingestion_.batch_counts(study_id),
                           now.value_or(clock_.now()));
}

PushMessage Platform::send_notification(std::string_view study_id, std::string title, std::string body,
                                        Receiver receiver) {
    return notifications_.send(study_id, std::move(title), std::move(body), std::move(receiver), clock_.now());
}

Activation Platform::enroll(std::string_view payload, std::string_view device_id, bool switch_device) {
    auto reg = enrollment_.activate(payload, device_id, clock_.now(), switch_device);
    return Activation{reg, registry_.get(reg.study_id)};
}

Registration Platform::leave(std::string_view study_id, std::string_view token_id, Secret128 const& secret,
                             LeftReason reason) {
    (void)enrollment_.authenticate(study_id, token_id, secret);
    return enrollment_.leave(study_id, token_id, clock_.now(), reason);
}

BatchReceipt Platform::submit_batch(SensorBatch const& batch, Secret128 const& secret) {
    return ingestion_.submit_batch(batch, secret);
}

std::vector<PushMessage> Platform::poll_notifications(std::string_view study_id, std::string_view token_id,
                                                      Secret128 const& secret) {
    auto const reg = enrollment_.authenticate(study_id, token_id, secret);
    if (!reg.active()) {
        throw Error(ErrorCode::UnknownRegistration, "registration '" + std::string(token_id) + "' has left");
    }
    return notifications_.poll(study_id, token_id);
}

}  // namespace rmon
