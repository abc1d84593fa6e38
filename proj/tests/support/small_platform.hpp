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

#include <memory>
#include <string>
#include <vector>

#include "rmon/api/platform.hpp"
#include "rmon/common/digest.hpp"
#include "rmon/common/random.hpp"
#include "temp_dir.hpp"

namespace rmon::testing {

/// PPD-like study on a manual clock with helpers to enroll devices and build
/// batches.
class SmallPlatform {
  public:
    struct Device {
        EnrollmentToken token;
        std::string device_id;
    };

    explicit SmallPlatform(std::vector<SensorSpec> sensors = {{Sensor::location, 600.0},
                                                              {Sensor::activity, 300.0},
                                                              {Sensor::application_usage, 3600.0}},
                           int duration_days = 84)
        : clock_(parse_instant("2020-07-08T09:00:00Z")) {
        PlatformOptions options;
        options.data_root = dir_.path() / "data";
        options.server_address = "https://rmon.example.org";
        options.admin_token = "admin-token";
        platform_ = std::make_unique<Platform>(options, clock_, std::make_unique<SeededSecretSource>(5));
        StudyConfig cfg;
        cfg.study_id = "PPD";
        cfg.name = "PPD";
        cfg.duration_days = duration_days;
        cfg.n_subjects = 60;
        cfg.sensors = std::move(sensors);
        platform_->create_study(cfg);
    }

    [[nodiscard]] Platform& platform() { return *platform_; }
    [[nodiscard]] ManualClock& clock() { return clock_; }
    [[nodiscard]] TempDir const& dir() const { return dir_; }

    std::vector<EnrollmentToken> tokens(std::string const& label, int n = 4) {
        return platform_->generate_tokens("PPD", label, n);
    }

    /// Generates tokens for `label` (once) and activates ordinal `ordinal`.
    Device enroll(std::string const& label, int ordinal = 1, bool switch_device = false) {
        if (!platform_->enrollment().has_subject("PPD", label)) {
            (void)tokens(label);
        }
        for (auto const& t : platform_->enrollment().tokens("PPD")) {
            if (t.subject_label == label && t.ordinal == ordinal) {
                Rng rng(hash_name(t.token_id()));
                Device d{t, uuid_v4(rng)};
                (void)platform_->enroll(encode_qr_payload(t), d.device_id, switch_device);
                return d;
            }
        }
        throw Error(ErrorCode::UnknownToken, label);
    }

    SensorBatch batch(Device const& d, Sensor sensor, std::string payload, std::optional<Instant> created = {}) {
        SensorBatch b;
        b.meta.study_id = "PPD";
        b.meta.token_id = d.token.token_id();
        b.meta.device_id = d.device_id;
        b.meta.sensor = sensor;
        b.meta.batch_id = uuid_v4(rng_);
        b.meta.created_at = created.value_or(clock_.now());
        b.payload = std::move(payload);
        b.meta.md5_hex = md5_hex(b.payload);
        return b;
    }

    BatchReceipt submit(Device const& d, SensorBatch const& b) { return platform_->submit_batch(b, d.token.secret); }

  private:
    TempDir dir_;
    ManualClock clock_;
    std::unique_ptr<Platform> platform_;
    Rng rng_{77};
};

}  // namespace rmon::testing
