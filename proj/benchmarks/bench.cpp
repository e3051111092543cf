#include "sev/exterior.hpp"
#include "sev/fhn.hpp"

#include <benchmark/benchmark.h>

#include <memory>

using namespace sev;

namespace {

const fhn::FhnReport& pulse()
{
    static const auto r = std::make_unique<fhn::FhnReport>(fhn::runFhn({0.25, 0.0005, 0.0}));
    return *r;
}

void BM_symplecticDet(benchmark::State& st)
{
    const Vec4 a(1, 2, 3, 4), b(0.5, -1, 2, 0), c(-1, 0, 1, 3), d(2, 2, -1, 1);
    for (auto _ : st) benchmark::DoNotOptimize(exterior::symplecticDet(a, b, c, d));
}
BENCHMARK(BM_symplecticDet);

void BM_quadVolume(benchmark::State& st)
{
    const Vec4 a(1, 2, 3, 4), b(0.5, -1, 2, 0), c(-1, 0, 1, 3), d(2, 2, -1, 1);
    for (auto _ : st) benchmark::DoNotOptimize(exterior::quadVolume(a, b, c, d));
}
BENCHMARK(BM_quadVolume);

void BM_solvePulse(benchmark::State& st)
{
    const wave::FhnParams p{0.25, 0.0005, 0.0};
    const auto orbit = wave::fhnSingularOrbit(p);
    for (auto _ : st) benchmark::DoNotOptimize(wave::solveHomoclinic(p, orbit).c);
}
BENCHMARK(BM_solvePulse)->Unit(benchmark::kMillisecond);

void BM_evansAt(benchmark::State& st)
{
    const auto& r = pulse();
    const auto al = bundle::alignTranslation(r.analysis.params, *r.wave);
    for (auto _ : st) benchmark::DoNotOptimize(evans::evansAt(r.analysis.params, *r.wave, 0.5, al).D_wedge);
}
BENCHMARK(BM_evansAt)->Unit(benchmark::kMillisecond);

void BM_conjugatePoints(benchmark::State& st)
{
    const auto& a = pulse().analysis;
    for (auto _ : st) benchmark::DoNotOptimize(maslov::findConjugatePoints(a.ref, a.zero).size());
}
BENCHMARK(BM_conjugatePoints)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
