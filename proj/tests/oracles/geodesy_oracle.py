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

"""Independent reference values for the geodesy and anonymization fixtures.

Forward conversion is the textbook ellipsoid formula; the inverse uses
Heikkinen's closed form (no iteration), so it shares no code path with the
iterative C++ solver. Key derivation re-implements the SHA-256 counter stream
with hashlib.
"""
import hashlib
import math
import struct

A = 6378137.0
F = 1.0 / 298.257223563
E2 = F * (2.0 - F)
B = A * (1.0 - F)


def to_ecef(lat, lon, h):
    phi, lam = math.radians(lat), math.radians(lon)
    n = A / math.sqrt(1.0 - E2 * math.sin(phi) ** 2)
    return ((n + h) * math.cos(phi) * math.cos(lam),
            (n + h) * math.cos(phi) * math.sin(lam),
            (n * (1.0 - E2) + h) * math.sin(phi))


def heikkinen(x, y, z):
    ep2 = (A * A - B * B) / (B * B)
    p = math.hypot(x, y)
    f = 54.0 * B * B * z * z
    g = p * p + (1.0 - E2) * z * z - E2 * (A * A - B * B)
    c = E2 * E2 * f * p * p / g ** 3
    s = (1.0 + c + math.sqrt(c * c + 2.0 * c)) ** (1.0 / 3.0)
    k = s + 1.0 + 1.0 / s
    pp = f / (3.0 * k * k * g * g)
    q = math.sqrt(1.0 + 2.0 * E2 * E2 * pp)
    r0 = -(pp * E2 * p) / (1.0 + q) + math.sqrt(
        0.5 * A * A * (1.0 + 1.0 / q)
        - pp * (1.0 - E2) * z * z / (q * (1.0 + q))
        - 0.5 * pp * p * p)
    u = math.sqrt((p - E2 * r0) ** 2 + z * z)
    v = math.sqrt((p - E2 * r0) ** 2 + (1.0 - E2) * z * z)
    z0 = B * B * z / (A * v)
    h = u * (1.0 - B * B / (A * v))
    lat = math.atan((z + ep2 * z0) / p)
    lon = math.atan2(y, x)
    return math.degrees(lat), math.degrees(lon), h


def unit(seed, i):
    d = hashlib.sha256(seed + b"rotation" + bytes([i])).digest()
    return (struct.unpack(">Q", d[:8])[0] >> 11) / float(1 << 53)


def rotation(seed):
    alpha = 2.0 * math.pi * unit(seed, 0)
    cb = 2.0 * unit(seed, 1) - 1.0
    sb = math.sqrt(max(0.0, 1.0 - cb * cb))
    gamma = 2.0 * math.pi * unit(seed, 2)

    def rz(t):
        return [[math.cos(t), -math.sin(t), 0.0], [math.sin(t), math.cos(t), 0.0], [0.0, 0.0, 1.0]]

    ry = [[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]]

    def mul(m, n):
        return [[sum(m[i][k] * n[k][j] for k in range(3)) for j in range(3)] for i in range(3)]

    return mul(mul(rz(alpha), ry), rz(gamma))


if __name__ == "__main__":
    x, y, z = to_ecef(52.0, 13.0, 100.0)
    print("ecef(52,13,100) = %.6f %.6f %.6f" % (x, y, z))
    print("heikkinen back  =", heikkinen(x, y, z))
    seed = bytes(15) + b"\x01"
    r = rotation(seed)
    print("rotation(seed=1) =", r)
    px, py, pz = to_ecef(52.0, 13.0, 0.0)
    q = [sum(r[i][k] * v for k, v in enumerate((px, py, pz))) for i in range(3)]
    print("anonymized(52,13,0) = %.9f %.9f %.6f" % heikkinen(*q))
    print("haversine (0,0)-(0,1) = %.6f" % (math.pi * 6371000.0 / 180.0))
