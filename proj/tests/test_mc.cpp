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

#include <cmath>
#include <random>

#include "doctest.h"
#include "rfso/errors.hpp"
#include "rfso/mc.hpp"
#include "rfso/metrics.hpp"

using namespace rfso;
using namespace rfso::channels;

namespace {

SystemConfig base(double snr_db)
{
    SystemConfig c;
    c.rf = {2, std::pow(10.0, snr_db / 10.0), 2};
    c.fso.xi = pointing_preset_xi("weak");
    c.fso.mu_r = c.rf.avg_snr;
    c.intf = {1, 1.0, 1.0};
    return c;
}

}  // namespace

TEST_CASE("stream seeds are distinct")
{
    CHECK(mc::stream_seed(1, 0) != mc::stream_seed(1, 1));
    CHECK(mc::stream_seed(1, 0) != mc::stream_seed(2, 0));
    CHECK(mc::stream_seed(5, 9) == mc::stream_seed(5, 9));
}

TEST_CASE("trivial thresholds")
{
    auto c = base(10.0);
    c.gamma_th = 0.0;
    CHECK(mc::simulate_outage(c, 20000, 1).mean == 0.0);
    c.gamma_th = 1e12;
    const auto e = mc::simulate_outage(c, 20000, 1);
    CHECK(e.mean == 1.0);
    CHECK(e.std_error == 0.0);
}

TEST_CASE("vanishing SNR gives vanishing rate")
{
    auto c = base(-60.0);
    CHECK(mc::simulate_asr(c, 20000, 3).mean < 1e-4);
}

TEST_CASE("determinism and thread-count invariance")
{
    const auto c = base(5.0);
    const auto a = mc::simulate_asr(c, 100000, 42, {.parallel = false});
    const auto b = mc::simulate_asr(c, 100000, 42, {.parallel = true, .threads = 3});
    const auto d = mc::simulate_asr(c, 100000, 42, {.parallel = true, .threads = 1});
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.mean == d.mean);
    CHECK(a.n_samples == 100000);
    CHECK(a.seed == 42);
    CHECK(mc::simulate_asr(c, 100000, 43).mean != a.mean);
}

TEST_CASE("precondition on the trial count")
{
    CHECK_THROWS_AS(mc::simulate_outage(base(0.0), 9999, 1), rfso::Error);
    CHECK(mc::recommended_trials(1e-4) == 1000000);
    CHECK(mc::recommended_trials(0.0) > 1000000000000LL);
}

TEST_CASE("standard error of an indicator")
{
    const auto e = mc::simulate_outage(base(0.0), 50000, 9);
    const double p = e.mean;
    CHECK(e.std_error == doctest::Approx(std::sqrt(p * (1.0 - p) / (50000.0 - 1.0))).epsilon(1e-9));
}

TEST_CASE("more users raise the simulated rate")
{
    auto c = base(20.0);
    c.rf.num_users = 1;
    const double k1 = mc::simulate_asr(c, 1000000, 5).mean;
    c.rf.num_users = 4;
    CHECK(mc::simulate_asr(c, 1000000, 5).mean > k1);
}

TEST_CASE("coverage against the quadrature oracle")
{
    std::mt19937_64 rng(2026);
    auto pick = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    int inside = 0;
    for (int i = 0; i < 100; ++i) {
        SystemConfig c = base(pick(0.0, 10.0));
        c.rf.num_users = static_cast<int>(pick(1.0, 4.999));
        c.rf.m_rf = static_cast<int>(pick(1.0, 3.999));
        c.fso.r = pick(0.0, 1.0) < 0.5 ? 1 : 2;
        c.fso.xi = pointing_preset_xi(pick(0.0, 1.0) < 0.5 ? "weak" : "strong");
        c.fso.mu_r = std::pow(10.0, pick(0.0, 10.0) / 10.0);
        c.intf = {static_cast<int>(pick(1.0, 3.999)), pick(0.5, 3.0), pick(0.5, 2.0)};
        c.gamma_th = pick(0.3, 2.0);
        const double want = metrics::outage_quadrature(c).value;
        const auto e = mc::simulate_outage(c, 20000, 100 + i);
        if (std::abs(e.mean - want) <= 3.0 * e.std_error)
            ++inside;
    }
    CHECK(inside >= 97);
}
