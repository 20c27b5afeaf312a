#include <benchmark/benchmark.h>

#include "mandeldecor/boettcher.hpp"
#include "mandeldecor/copy_atlas.hpp"
#include "mandeldecor/decoration.hpp"
#include "mandeldecor/dynamics.hpp"
#include "mandeldecor/parabolic.hpp"
#include "mandeldecor/render.hpp"

using namespace mandeldecor;

static void BM_EscapeTime(benchmark::State& state) {
    const Complex c{-0.1, 0.1};   // bounded, so every iteration runs
    for (auto _ : state) benchmark::DoNotOptimize(escape_time(c, Complex{}, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EscapeTime)->Arg(1000)->Arg(10000);

static void BM_PhiM(benchmark::State& state) {
    const Complex c{-0.75, 0.3};
    for (auto _ : state) benchmark::DoNotOptimize(phi_M(c));
}
BENCHMARK(BM_PhiM);

static void BM_PhiMInverse(benchmark::State& state) {
    const Complex w = std::polar(std::exp(0.05), 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(phi_M_inverse(w));
}
BENCHMARK(BM_PhiMInverse);

static void BM_CenterSolve(benchmark::State& state) {
    const int period = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_superattracting_center(period, Complex{-1.76, 0.01}));
}
BENCHMARK(BM_CenterSolve)->Arg(3)->Arg(30);

static void BM_FitConstants(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(fit_constants(Complex{-1.25, 0.0}, 2));
}
BENCHMARK(BM_FitConstants);

static void BM_FindCenters(benchmark::State& state) {
    const auto s = fit_constants(Complex{-1.25, 0.0}, 2);
    CenterSearchOptions opt;
    opt.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(find_center_sequence(s, {5, 20}, {10, 120}, 1e-10, opt));
}
BENCHMARK(BM_FindCenters)->Unit(benchmark::kMillisecond);

static void BM_TileMandelbrot(benchmark::State& state) {
    Viewport vp{Complex{-0.75, 0.1}, 0.3, 64, 64};
    RenderSettings st;
    st.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(render_mandelbrot(vp, st));
    state.SetItemsProcessed(state.iterations() * 64 * 64);
}
BENCHMARK(BM_TileMandelbrot)->Unit(benchmark::kMillisecond);

static void BM_TileDecorated(benchmark::State& state) {
    const auto model = make_decoration_model(Complex{-0.77, 0.18});
    Viewport vp{Complex{30.0, 20.0}, 20.0, 64, 64};
    RenderSettings st;
    st.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(render_decorated(model, vp, st));
    state.SetItemsProcessed(state.iterations() * 64 * 64);
}
BENCHMARK(BM_TileDecorated)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
