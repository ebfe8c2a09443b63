// Serial reference loops against the OpenMP kernels for the embarrassingly
// parallel sweeps.

#include <benchmark/benchmark.h>

#include <cmath>

#include "pstab/experiments.hpp"

namespace {

const pstab::LiftedFamily& tauLift() {
    static const pstab::LiftedFamily f = pstab::buildLift(pstab::buildTauPair(pstab::solveTau()), std::sqrt(2.0));
    return f;
}

pstab::Exec execOf(const benchmark::State& state) {
    return state.range(0) == 0 ? pstab::Exec::serial : pstab::Exec::parallel;
}

void BM_PeriodicSweep(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(pstab::periodicDecaySweep(tauLift(), 200, 1, execOf(state)).maxRho);
    }
}
BENCHMARK(BM_PeriodicSweep)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_LiftHullScan(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(pstab::liftHullScan(tauLift(), 10000, 1, execOf(state)).maxRealPart);
    }
}
BENCHMARK(BM_LiftHullScan)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Certificate(benchmark::State& state) {
    const pstab::PlanarPair& p = tauLift().source;
    const pstab::LyapunovCertificate c(*p.tau);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pstab::gradientConditionCheck(c, p, 10000, 1, execOf(state)).maxNeutral);
    }
}
BENCHMARK(BM_Certificate)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Condition(benchmark::State& state) {
    const pstab::PlanarPair p = pstab::buildSimplePair();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pstab::checkCondition(p, 1001, {}, execOf(state)).rhs);
    }
}
BENCHMARK(BM_Condition)->Arg(0)->Arg(1)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
