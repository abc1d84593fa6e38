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

#include <string>

#include "rmon/common/time.hpp"
#include "rmon/datastore/datastore.hpp"
#include "scratch_dir.hpp"

namespace {

using namespace rmon;

void BM_PutObject(benchmark::State& state) {
    bench::ScratchDir dir;
    Datastore store(dir.path());
    (void)store.init_dataset("S", parse_instant("2020-07-08T09:00:00Z"));
    std::string bytes(static_cast<std::size_t>(state.range(0)), 'x');
    std::uint64_t n = 0;
    for (auto _ : state) {
        bytes.replace(0, 20, std::to_string(++n) + "                    ", 0, 20);
        benchmark::DoNotOptimize(store.put_object("S", bytes));
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PutObject)->Arg(1 << 10)->Arg(64 << 10);

void BM_CommitBatch(benchmark::State& state) {
    bench::ScratchDir dir;
    Datastore store(dir.path());
    auto t = parse_instant("2020-07-08T09:00:00Z");
    (void)store.init_dataset("S", t);
    auto const oid = store.put_object("S", "payload");
    std::uint64_t n = 0;
    for (auto _ : state) {
        ++n;
        t += std::chrono::milliseconds(1);
        benchmark::DoNotOptimize(store.commit_batch("S", "t/location/b" + std::to_string(n), oid, "batch", t));
    }
}
BENCHMARK(BM_CommitBatch);

void BM_Fsck(benchmark::State& state) {
    bench::ScratchDir dir;
    Datastore store(dir.path());
    auto t = parse_instant("2020-07-08T09:00:00Z");
    (void)store.init_dataset("S", t);
    for (int i = 0; i < state.range(0); ++i) {
        auto const oid = store.put_object("S", "object " + std::to_string(i));
        t += std::chrono::seconds(1);
        (void)store.commit_batch("S", "p/" + std::to_string(i), oid, "batch", t);
    }
    for (auto _ : state) benchmark::DoNotOptimize(store.fsck("S"));
}
BENCHMARK(BM_Fsck)->Arg(100)->Arg(1000);

}  // namespace
