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

#include <doctest.h>

#include "error_code.hpp"
#include "small_platform.hpp"

using namespace rmon;
using rmon::testing::error_of;
using rmon::testing::SmallPlatform;

TEST_SUITE("notifications") {

TEST_CASE("broadcast is queued for active registrations and delivered once") {
    SmallPlatform p;
    auto const a = p.enroll("A");
    auto const b = p.enroll("B");
    (void)p.tokens("C");  // no registration, receives nothing
    auto const m = p.platform().send_notification("PPD", "Reminder", "Please keep the app open", Receiver::everyone());
    CHECK(m.queued_for == std::set<std::string>{"A_1", "B_1"});
    auto const got = p.platform().poll_notifications("PPD", "A_1", a.token.secret);
    REQUIRE(got.size() == 1);
    CHECK(got[0].title == "Reminder");
    CHECK(p.platform().poll_notifications("PPD", "A_1", a.token.secret).empty());
    CHECK(p.platform().poll_notifications("PPD", "B_1", b.token.secret).size() == 1);
    auto const stored = p.platform().notifications().messages("PPD").at(0);
    CHECK(stored.delivered_to == std::set<std::string>{"A_1", "B_1"});
    CHECK(push_message_from_json(to_json(stored)).delivered_to == stored.delivered_to);
}

TEST_CASE("targeted message reaches each registration of the subject") {
    SmallPlatform p;
    auto const a1 = p.enroll("A", 1);
    auto const a2 = p.enroll("A", 2);
    auto const b = p.enroll("B");
    (void)p.platform().send_notification("PPD", "t", "b", Receiver::only({"A"}));
    CHECK(p.platform().poll_notifications("PPD", "A_1", a1.token.secret).size() == 1);
    CHECK(p.platform().poll_notifications("PPD", "A_2", a2.token.secret).size() == 1);
    CHECK(p.platform().poll_notifications("PPD", "B_1", b.token.secret).empty());
}

TEST_CASE("send errors") {
    SmallPlatform p;
    (void)p.enroll("A");
    CHECK(error_of([&] { p.platform().send_notification("PPD", "", "b", Receiver::everyone()); }) ==
          ErrorCode::InvalidArgument);
    CHECK(error_of([&] { p.platform().send_notification("PPD", "t", "b", Receiver::only({"Z"})); }) ==
          ErrorCode::UnknownSubject);
    CHECK(error_of([&] { p.platform().send_notification("X", "t", "b", Receiver::everyone()); }) ==
          ErrorCode::UnknownStudy);
    (void)p.platform().close_study("PPD");
    CHECK(error_of([&] { p.platform().send_notification("PPD", "t", "b", Receiver::everyone()); }) ==
          ErrorCode::StudyClosed);
}

TEST_CASE("polling requires the registration secret") {
    SmallPlatform p;
    auto const a = p.enroll("A");
    CHECK(error_of([&] { (void)p.platform().poll_notifications("PPD", "A_1", Secret128::from_u64(3)); }) ==
          ErrorCode::AuthFailure);
    CHECK(error_of([&] { (void)p.platform().poll_notifications("PPD", "A_2", a.token.secret); }) ==
          ErrorCode::UnknownRegistration);
}

}
