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

#include <benchmark/benchmark.h>

#include <vector>

#include "rmon/common/ids.hpp"
#include "rmon/common/random.hpp"
#include "rmon/geo/anonymize.hpp"

namespace {

using namespace rmon;

void BM_DeriveKey(benchmark::State& state) {
    std::uint64_t n = 0;
    for (auto _ : state) benchmark::DoNotOptimize(geo::derive_key(Secret128::from_u64(++n)));
}
BENCHMARK(BM_DeriveKey);

void BM_AnonymizePoint(benchmark::State& state) {
    auto const key = geo::derive_key(Secret128::from_u64(42));
    Rng rng(7);
    std::vector<geo::Wgs84Point> points(1024);
    for (auto& p : points) p = {rng.uniform(-80, 80), rng.uniform(-180, 180), 0.0};
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(geo::anonymize_point(points[i++ & 1023], key));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AnonymizePoint);

void BM_Haversine(benchmark::State& state) {
    geo::Wgs84Point a{51.5, -0.12, 0}, b{48.85, 2.35, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(a);
        benchmark::DoNotOptimize(geo::haversine_m(a, b));
    }
}
BENCHMARK(BM_Haversine);

}  // namespace
