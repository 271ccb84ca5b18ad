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

#include "rfso/mc.hpp"

#include <omp.h>

#include <cmath>
#include <vector>

#include "rfso/errors.hpp"

namespace rfso::mc {

using channels::Rng;
using channels::SystemConfig;

namespace {

// Count, mean and sum of squared deviations of one stream.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x)
    {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.n == 0.0)
            return;
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * (o.n / total);
        m2 += o.m2 + d * d * (n * o.n / total);
        n = total;
    }
};

template <typename Trial>
McEstimate run(const SystemConfig& cfg, std::int64_t n, std::uint64_t seed, const McOptions& options,
               Trial trial)
{
    // A zero threshold is a valid (empty) event for simulation.
    SystemConfig probe = cfg;
    if (probe.gamma_th == 0.0)
        probe.gamma_th = 1.0;
    probe.validate();
    if (n < kMinTrials)
        throw Error(ErrorKind::domain, "Monte Carlo needs at least " + std::to_string(kMinTrials) + " trials");
    const std::int64_t streams = (n + kStreamSize - 1) / kStreamSize;
    std::vector<Moments> parts(static_cast<std::size_t>(streams));

    auto body = [&](std::int64_t i) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i)));
        const std::int64_t lo = i * kStreamSize;
        const std::int64_t hi = std::min(n, lo + kStreamSize);
        Moments m;
        for (std::int64_t j = lo; j < hi; ++j)
            m.push(trial(rng));
        parts[static_cast<std::size_t>(i)] = m;
    };

    if (options.parallel) {
        const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::int64_t i = 0; i < streams; ++i)
            body(i);
    } else {
        for (std::int64_t i = 0; i < streams; ++i)
            body(i);
    }

    Moments all;
    for (const auto& p : parts)
        all.merge(p);
    McEstimate out;
    out.mean = all.mean;
    out.std_error = std::sqrt(all.m2 / (all.n - 1.0) / all.n);
    out.n_samples = n;
    out.seed = seed;
    return out;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed) ^ stream);
}

McEstimate simulate_outage(const SystemConfig& cfg, std::int64_t n, std::uint64_t seed, const McOptions& options)
{
    const double th = cfg.gamma_th;
    return run(cfg, n, seed, options, [&](Rng& rng) {
        const double g_rf = channels::rf_sample_best(rng, cfg.rf);
        const double g_fso = channels::fso_sample(rng, cfg.fso);
        const double g_i = channels::inr_sample(rng, cfg.intf);
        return std::min(g_rf, g_fso) / g_i < th ? 1.0 : 0.0;
    });
}

McEstimate simulate_asr(const SystemConfig& cfg, std::int64_t n, std::uint64_t seed, const McOptions& options)
{
    return run(cfg, n, seed, options, [&](Rng& rng) {
        const double g_rf = channels::rf_sample_best(rng, cfg.rf);
        const double g_fso = channels::fso_sample(rng, cfg.fso);
        const double g_i = channels::inr_sample(rng, cfg.intf);
        return 0.5 * (std::log2(1.0 + g_rf / g_i) + std::log2(1.0 + g_fso / g_i));
    });
}

std::int64_t recommended_trials(double p)
{
    constexpr double cap = 9e18;
    if (!(p > 100.0 / cap))
        return static_cast<std::int64_t>(cap);
    return static_cast<std::int64_t>(std::ceil(100.0 / p));
}

}  // namespace rfso::mc
