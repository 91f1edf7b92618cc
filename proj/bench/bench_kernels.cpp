// Serial vs OpenMP trial loops for the Monte Carlo kernels. The estimates are
// bit-identical by construction (per-trial buffers, fixed-order reduction);
// this target measures what the parallel path buys.

#include <benchmark/benchmark.h>

#include "converse/oracle.hpp"

namespace {

using namespace converse;

const GroupTestingSpec kGt{12, 2, 0.1, 0.0, 0, 0.0};

void bm_gt_simulate_serial(benchmark::State& state) {
    for (auto _ : state) {
        auto r = serial::gt_simulate(kGt, 0.5, 6, GtDecoder::map,
                                     static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(r.estimate);
    }
}

void bm_gt_simulate_parallel(benchmark::State& state) {
    for (auto _ : state) {
        auto r = gt_simulate(kGt, 0.5, 6, GtDecoder::map,
                             static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(r.estimate);
    }
}

GaussianMixture make_mixture() {
    std::vector<std::vector<double>> means;
    for (int i = 0; i < 16; ++i) {
        means.push_back({0.35 * i, 0.1 * (i % 4), -0.2 * (i % 3)});
    }
    return GaussianMixture(means, 1.0, FinitePMF::uniform(means.size()));
}

void bm_mixture_mi_serial(benchmark::State& state) {
    const auto mix = make_mixture();
    for (auto _ : state) {
        auto r = serial::mixture_mi_mc(mix, static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(r.estimate);
    }
}

void bm_mixture_mi_parallel(benchmark::State& state) {
    const auto mix = make_mixture();
    for (auto _ : state) {
        auto r = mixture_mi_mc(mix, static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(r.estimate);
    }
}

void bm_volume_serial(benchmark::State& state) {
    BodySpec body;
    body.box.assign(5, {-1.0, 1.0});
    body.l2_ball = {{std::vector<double>(5, 0.0)}, 1.0};
    for (auto _ : state) {
        auto r = serial::ball_volume_mc(body, static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(r.estimate);
    }
}

void bm_volume_parallel(benchmark::State& state) {
    BodySpec body;
    body.box.assign(5, {-1.0, 1.0});
    body.l2_ball = {{std::vector<double>(5, 0.0)}, 1.0};
    for (auto _ : state) {
        auto r = ball_volume_mc(body, static_cast<std::uint64_t>(state.range(0)), 7);
        benchmark::DoNotOptimize(r.estimate);
    }
}

}  // namespace

BENCHMARK(bm_gt_simulate_serial)->Arg(2000);
BENCHMARK(bm_gt_simulate_parallel)->Arg(2000);
BENCHMARK(bm_mixture_mi_serial)->Arg(20000);
BENCHMARK(bm_mixture_mi_parallel)->Arg(20000);
BENCHMARK(bm_volume_serial)->Arg(100000);
BENCHMARK(bm_volume_parallel)->Arg(100000);

BENCHMARK_MAIN();
