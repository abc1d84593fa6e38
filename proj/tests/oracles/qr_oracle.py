#!/usr/bin/env python3
# Copyright 2026 The rmon Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Golden QR payload: the canonical encoding (sorted keys, no whitespace)
of a fixed token, produced with the Python json module."""
import json
import sys

token = {
    "v": 1,
    "token_id": "Test_080720_00020_2",
    "study_id": "PPD",
    "server": "https://rmon.example.org",
    "auth": "sso:clinic",
    "secret": "00112233445566778899aabbccddeeff",
}

if __name__ == "__main__":
    sys.stdout.write(json.dumps(token, sort_keys=True, separators=(",", ":")))
