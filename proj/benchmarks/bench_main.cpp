#include <shadelab/shadelab.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace shadelab;

namespace {

LinearImage textured_image(int side) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2, 0.9);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(side) * side * 3);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const double shade = 0.4 + 0.5 * std::sin(0.05 * (x + y)) * std::sin(0.05 * (x + y));
            const double r = u(rng);
            const double tint = (x / 8 + y / 8) % 2 ? 1.0 : 0.7;
            d.insert(d.end(), {r * shade, r * shade * tint, r * shade});
        }
    return LinearImage(side, side, 3, std::move(d));
}

void BM_DecomposeRetinex(benchmark::State& state) {
    const LinearImage img = textured_image(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(decompose_retinex(img));
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}
BENCHMARK(BM_DecomposeRetinex)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MaxFilter(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(side) * side);
    for (auto& x : v) x = u(rng);
    const ScalarField f(side, side, std::move(v));
    for (auto _ : state) benchmark::DoNotOptimize(max_filter(f, kBaselineMaxFilterSize));
}
BENCHMARK(BM_MaxFilter)->Arg(256)->Arg(512);

void BM_BalancedPr(benchmark::State& state) {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<LabeledSample> s(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = {0, static_cast<int>(i), 0, static_cast<ShadingClass>(1 + i % 3), noise(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(balanced_pr(s));
}
BENCHMARK(BM_BalancedPr)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
