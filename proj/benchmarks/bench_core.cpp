#include <benchmark/benchmark.h>

#include <cmath>

#include "entropic/analysis.hpp"
#include "entropic/heat.hpp"
#include "entropic/ot.hpp"
#include "entropic/schrodinger.hpp"

using namespace entropic;

namespace {

Space circle(int n) { return build_torus_grid(1, n, {1.0}); }

Density bumps(const Space& s, double c0, double c1) {
    const int n = s.size();
    ScalarField v(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        auto wrap = [](double a) { return std::min(std::abs(a), 1.0 - std::abs(a)); };
        v[i] = std::exp(-std::pow(wrap(x - c0), 2) / 0.02) +
               std::exp(-std::pow(wrap(x - c1), 2) / 0.02) + 0.3;
    }
    return make_density(s, v);
}

void bm_spectral_decompose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Space s = circle(n);  // fresh space so the cache recomputes
        benchmark::DoNotOptimize(spectral_decompose(s).eigenvalues.sum());
    }
}
BENCHMARK(bm_spectral_decompose)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void bm_heat_apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Space s = circle(n);
    spectral_decompose(s);
    ScalarField f = ScalarField::Random(n);
    for (auto _ : state) benchmark::DoNotOptimize(heat_apply(s, 0.1, f).sum());
}
BENCHMARK(bm_heat_apply)->Arg(64)->Arg(256)->Arg(1024);

void bm_ipfp(benchmark::State& state) {
    Space s = circle(64);
    Density rho0 = bumps(s, 0.15, 0.6), rho1 = bumps(s, 0.4, 0.85);
    const double eps = state.range(0) / 1000.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            solve_schrodinger_system(s, rho0, rho1, eps).marginal_residual);
}
BENCHMARK(bm_ipfp)->Arg(400)->Arg(100)->Arg(20)->Unit(benchmark::kMillisecond);

void bm_network_simplex(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Space s = circle(n);
    Density rho0 = bumps(s, 0.15, 0.6), rho1 = bumps(s, 0.4, 0.85);
    for (auto _ : state) benchmark::DoNotOptimize(solve_w2_exact(s, rho0, rho1).w2_squared);
}
BENCHMARK(bm_network_simplex)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void bm_path_diagnostics(benchmark::State& state) {
    Space s = circle(64);
    Density rho0 = bumps(s, 0.15, 0.6), rho1 = bumps(s, 0.4, 0.85);
    SchrodingerSolution sol = solve_schrodinger_system(s, rho0, rho1, 0.2);
    InterpolationPath path = interpolate(s, sol, uniform_time_grid(100));
    for (auto _ : state)
        benchmark::DoNotOptimize(diagnose_path(s, path, 0.05, 8).density_sup);
}
BENCHMARK(bm_path_diagnostics)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
