// SPDX-License-Identifier: Apache-2.0
#include "ssf/bench.hpp"
#include "ssf/synth.hpp"
#include "ssf/tucker.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ssf;

const DenseTensor& paper_scale_field() {
    static const DenseTensor field = [] {
        SsfGrid grid;  // 20 x 20 x 300
        return generate_snapshot(grid, 1, GeneratorParams{}, 1).field;
    }();
    return field;
}

void BM_Unfold(benchmark::State& state) {
    const DenseTensor& x = paper_scale_field();
    const auto mode = static_cast<Index>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(unfold(x, mode));
    }
}
BENCHMARK(BM_Unfold)->Arg(1)->Arg(3);

void BM_ModeProduct(benchmark::State& state) {
    const DenseTensor& x = paper_scale_field();
    const Eigen::MatrixXd m = Eigen::MatrixXd::Random(8, 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mode_product(x, m, 1));
    }
}
BENCHMARK(BM_ModeProduct);

void BM_HooiTrain(benchmark::State& state) {
    const DenseTensor& x = paper_scale_field();
    for (auto _ : state) {
        benchmark::DoNotOptimize(hooi(x, {8, 8, 10}));
    }
}
BENCHMARK(BM_HooiTrain)->Unit(benchmark::kMillisecond);

void BM_TuckerEncode(benchmark::State& state) {
    const DenseTensor& x = paper_scale_field();
    const HooiResult r = hooi(x, {8, 8, 10});
    for (auto _ : state) {
        benchmark::DoNotOptimize(tucker_encode(x, r.basis));
    }
}
BENCHMARK(BM_TuckerEncode)->Unit(benchmark::kMillisecond);

void BM_EofTrain(benchmark::State& state) {
    const Eigen::MatrixXd xu = unfold(paper_scale_field(), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(learn_eof(xu, 2));
    }
}
BENCHMARK(BM_EofTrain)->Unit(benchmark::kMillisecond);

void BM_OmpEncodeSnapshot(benchmark::State& state) {
    const Eigen::MatrixXd xu = unfold(paper_scale_field(), 3);
    KsvdOptions opts;
    opts.max_iter = 2;
    auto [dict, code] = ksvd_learn(xu, 320, 2, opts, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ksvd_encode(xu, dict));
    }
}
BENCHMARK(BM_OmpEncodeSnapshot)->Unit(benchmark::kMillisecond);

void BM_Rmse(benchmark::State& state) {
    const DenseTensor& x = paper_scale_field();
    DenseTensor y = x;
    y[0] += 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmse_eq27(x, y));
    }
}
BENCHMARK(BM_Rmse);

void BM_GenerateSnapshot(benchmark::State& state) {
    SsfGrid grid;
    const GeneratorParams params;
    int day = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_snapshot(grid, day++ % 30 + 1, params, 7));
    }
}
BENCHMARK(BM_GenerateSnapshot)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
