/*
   Copyright 2026 The rfso Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Serial reference vs OpenMP for the contour node sums and the Monte Carlo.

#include <benchmark/benchmark.h>

#include "rfso/contour_kernels.hpp"
#include "rfso/mc.hpp"
#include "rfso/metrics.hpp"

namespace {

using namespace rfso;

channels::SystemConfig bench_system()
{
    channels::SystemConfig c;
    c.rf = {2, 100.0, 2};
    c.fso.xi = channels::pointing_preset_xi("weak");
    c.fso.mu_r = 100.0;
    c.intf = {2, 1.0, 1.0};
    return c;
}

specfun::kernels::ContourIntegrand joint_integrand()
{
    const auto co = metrics::outage_coefficients(bench_system());
    const auto spec = metrics::outage_term_spec(co, co.terms.front());
    // Abscissae away from every pole; only the cost matters here.
    return {spec.s_factors, spec.t_factors, spec.outer_factors, co.log_b2, co.terms.front().log_b1,
            -0.0137, 0.0291, true};
}

specfun::kernels::Grid bench_grid(int n)
{
    specfun::kernels::Grid g;
    g.h_s = 4.0 / n;
    g.n_s = n;
    g.h_t = 4.0 / n;
    g.n_t = n / 2;
    return g;
}

void BM_contour_grid_serial(benchmark::State& state)
{
    const auto f = joint_integrand();
    const auto g = bench_grid(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(specfun::kernels::sum_grid_serial(f, g, 0.0));
    state.SetItemsProcessed(state.iterations() * (g.n_s + 1) * (2 * g.n_t + 1));
}

void BM_contour_grid_parallel(benchmark::State& state)
{
    const auto f = joint_integrand();
    const auto g = bench_grid(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(specfun::kernels::sum_grid_parallel(f, g, 0.0));
    state.SetItemsProcessed(state.iterations() * (g.n_s + 1) * (2 * g.n_t + 1));
}

void BM_mc_outage(benchmark::State& state, bool parallel)
{
    const auto c = bench_system();
    const std::int64_t n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(mc::simulate_outage(c, n, 1, {parallel, 0}));
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_mc_outage_serial(benchmark::State& state)
{
    BM_mc_outage(state, false);
}

void BM_mc_outage_parallel(benchmark::State& state)
{
    BM_mc_outage(state, true);
}

void BM_outage_exact(benchmark::State& state)
{
    const auto c = bench_system();
    metrics::MetricsPolicy p;
    p.contour.parallel = state.range(0) != 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(metrics::outage_exact(c, p));
}

}  // namespace

BENCHMARK(BM_contour_grid_serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_contour_grid_parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_outage_serial)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_outage_parallel)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_outage_exact)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
