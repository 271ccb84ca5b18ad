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

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rfso/errors.hpp"
#include "rfso/metrics.hpp"
#include "support.hpp"

using namespace rfso::channels;
using namespace rfso::metrics;
using rfso::testing::ks_upper_bound;

namespace {

double db(double v)
{
    return std::pow(10.0, v / 10.0);
}

// Moderate turbulence, weak pointing, both hops at the same average SNR.
SystemConfig moderate(int K, int N, int r, double snr_db)
{
    SystemConfig c;
    c.rf = {2, db(snr_db), K};
    c.fso.xi = pointing_preset_xi("weak");
    c.fso.r = r;
    c.fso.mu_r = db(snr_db);
    c.intf = {N, 1.0, 1.0};
    c.gamma_th = 1.0;
    return c;
}

SystemConfig second_set(int N, double snr_db)
{
    SystemConfig c = moderate(2, N, 1, snr_db);
    c.fso.alpha1 = 2.169;
    c.fso.alpha2 = 1.0;
    c.fso.beta1 = 0.55;
    c.fso.beta2 = 2.35;
    c.fso.omega1 = 1.5793;
    c.fso.omega2 = 1.0;
    return c;
}

template <typename F>
double integrate_half_line(F f, double mid)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(f, 0.0, mid, 1e-12) + es.integrate([&](double g) { return f(mid + g); }, 1e-12);
}

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

}  // namespace

TEST_CASE("flag rendering")
{
    CHECK(flag_string(flag_none).empty());
    CHECK(flag_string(flag_clamped | flag_rational) == "clamped|rational_approx");
}

TEST_CASE("mean_inverse_shift against high-precision quadrature")
{
    struct Row {
        double w, k, theta, want;
    };
    // 40-digit quadrature of the Gamma expectation.
    const Row rows[] = {
        {0.3, 1.0, 1.0, 1.2225356050805856},
        {2.0, 2.5, 0.7, 0.20752240218469698},
        {1e-10, 1.5, 1.0, 1.9999645513229783},
        {1e-10, 0.5, 2.0, 250658.82751323208},
        {50.0, 3.0, 1.0, 0.018887412643587957},
        {1e-10, 2.0, 1.0, 0.99999999775513647},
        {1e-10, 1.0, 1.0, 22.448635267383787},
        {1e5, 4.0, 4.0, 9.9999000012499813e-6},
    };
    for (const auto& r : rows)
        CHECK(rel(mean_inverse_shift(r.w, r.k, r.theta), r.want) < 1e-8);
    // Exponential case: e^w E1(w).
    for (double w : {0.01, 0.5, 3.0, 40.0})
        CHECK(rel(mean_inverse_shift(w, 1.0, 1.0), std::exp(w) * boost::math::expint(1, w)) < 1e-10);
    CHECK(mean_inverse_shift(std::numeric_limits<double>::infinity(), 2.0, 1.0) == 0.0);
    CHECK_THROWS_AS(mean_inverse_shift(0.0, 1.0, 1.0), rfso::Error);
}

TEST_CASE("rate quadrature without interference")
{
    // Unit interference and exponential RF hop at 10 dB.
    const double snr = 10.0;
    const double r = 0.5 * rate_quadrature([&](double w) { return std::exp(-w / snr); },
                                           [](double w) { return 1.0 / (1.0 + w); }, 1e-12);
    const double want = 0.5 * std::exp(1.0 / snr) * boost::math::expint(1, 1.0 / snr) / std::numbers::ln2;
    CHECK(rel(r, want) < 1e-10);
    CHECK(r == doctest::Approx(1.4532).epsilon(1e-4));
}

TEST_CASE("effective RF distribution")
{
    SUBCASE("ratio of two exponentials")
    {
        SystemConfig c = moderate(1, 1, 1, 10.0);
        c.rf.m_rf = 1;
        c.intf.omega_i1 = 3.0;
        const double a = c.rf.avg_snr;
        const double b = c.intf.omega_i1;
        for (double g : {0.01, 1.0, 7.0, 300.0}) {
            CHECK(rel(effective_rf_pdf(g, c), a * b / ((a + b * g) * (a + b * g))) < 1e-12);
            CHECK(rel(effective_rf_cdf(g, c), b * g / (a + b * g)) < 1e-12);
        }
    }
    SUBCASE("pdf integrates to one and differentiates the cdf")
    {
        for (const auto& c : {moderate(2, 1, 1, 10.0), moderate(4, 3, 1, 5.0)}) {
            const double mass = integrate_half_line([&](double g) { return effective_rf_pdf(g, c); }, 1.0);
            CHECK(std::abs(mass - 1.0) < 1e-8);
            for (double g : {0.05, 1.0, 20.0}) {
                const double h = 1e-4 * g;
                const double fd = (effective_rf_cdf(g + h, c) - effective_rf_cdf(g - h, c)) / (2.0 * h);
                CHECK(rel(effective_rf_pdf(g, c), fd) < 1e-6);
            }
        }
    }
    SUBCASE("sampled ratio")
    {
        const SystemConfig c = moderate(2, 3, 1, 10.0);
        Rng rng(21);
        std::vector<double> v(1000000);
        for (auto& x : v)
            x = rf_sample_best(rng, c.rf) / inr_sample(rng, c.intf);
        std::sort(v.begin(), v.end());
        CHECK(ks_upper_bound(v, [&](double g) { return effective_rf_cdf(g, c); }, 4000) < 0.002);
    }
    SUBCASE("edges")
    {
        const SystemConfig c = moderate(2, 1, 1, 10.0);
        CHECK(effective_rf_cdf(0.0, c) == 0.0);
        CHECK(effective_rf_cdf(std::numeric_limits<double>::infinity(), c) == 1.0);
        CHECK(effective_rf_pdf(0.0, c) == 0.0);
        CHECK_THROWS_AS(effective_rf_cdf(-1.0, c), rfso::Error);
    }
}

TEST_CASE("effective FSO cdf against quadrature over the interference")
{
    for (int r : {1, 2}) {
        const SystemConfig c = moderate(1, 2, r, 15.0);
        const auto d = dgg_derive(c.fso, c.max_denominator);
        for (double g : {0.01, 1.0, 30.0}) {
            const double q = integrate_half_line(
                [&](double y) { return fso_cdf(g * y, d, c.fso) * inr_pdf(y, c.intf); }, 1.0);
            CHECK(rel(effective_fso_cdf(g, c).value, q) < 1e-7);
        }
    }
}

TEST_CASE("outage: RF-only sanity mode")
{
    SystemConfig c = moderate(1, 1, 1, 10.0);
    c.rf.m_rf = 1;
    c.intf.omega_i1 = c.rf.avg_snr;
    const auto v = outage_quadrature(c, {}, {.rf_only = true});
    CHECK(v.value == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("outage: closed form against quadrature")
{
    for (int N : {1, 3}) {
        for (int r : {1, 2}) {
            for (double s : {0.0, 10.0, 20.0}) {
                const auto c = moderate(2, N, r, s);
                const auto e = outage_exact(c);
                const auto q = outage_quadrature(c);
                INFO("N=" << N << " r=" << r << " dB=" << s);
                CHECK(e.value >= 0.0);
                CHECK(e.value <= 1.0);
                CHECK(rel(e.value, q.value) < 1e-6);
            }
        }
    }
}

TEST_CASE("outage: threshold limits")
{
    auto c = moderate(2, 2, 1, 10.0);
    c.gamma_th = 1e-9;
    CHECK(outage_exact(c).value < 1e-8);
    CHECK(outage_quadrature(c).value < 1e-8);
    c.gamma_th = 1e6;
    CHECK(outage_exact(c).value > 0.999);
}

TEST_CASE("outage: monotonicity and detection order")
{
    double prev_snr = 2.0;
    for (double s : {0.0, 8.0, 16.0, 24.0}) {
        const double op1 = outage_exact(moderate(2, 1, 1, s)).value;
        const double op2 = outage_exact(moderate(2, 1, 2, s)).value;
        const double op3 = outage_exact(moderate(2, 3, 1, s)).value;
        CHECK(op1 < prev_snr);
        CHECK(op1 <= op2);
        CHECK(op1 <= op3);
        prev_snr = op1;
    }
    auto c = moderate(2, 1, 1, 10.0);
    double prev = 0.0;
    for (double th : {0.1, 0.5, 1.0, 4.0}) {
        c.gamma_th = th;
        const double v = outage_exact(c).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("outage: high-SNR expansion")
{
    // Heterodyne link: the joint term decays as SNR^{-y p_n}.
    const auto co = outage_coefficients(moderate(2, 1, 1, 30.0));
    const double slope = -co.fso.y * co.p_n / 10.0;
    double last_gap = 1.0;
    for (double s : {30.0, 35.0, 40.0}) {
        const double e = outage_exact(moderate(2, 1, 1, s)).value;
        const double a = outage_asymptotic(moderate(2, 1, 1, s)).value;
        const double gap = std::abs(a / e - 1.0);
        CHECK(gap < last_gap);
        last_gap = gap;
    }
    CHECK(last_gap < 0.05);
    const double e1 = outage_exact(moderate(2, 1, 1, 45.0)).value;
    const double e2 = outage_exact(moderate(2, 1, 1, 50.0)).value;
    CHECK(rel((std::log10(e2) - std::log10(e1)) / 5.0, slope) < 0.1);
}

TEST_CASE("rate: closed form against quadrature")
{
    for (double s : {0.0, 20.0, 40.0}) {
        const auto c = moderate(2, 1, 1, s);
        const auto e = asr_exact(c);
        const auto q = asr_quadrature(c);
        INFO("dB=" << s);
        CHECK(std::abs(e.total.value - q.total.value) < 1e-6);
        CHECK(std::abs(e.r1.value - q.r1.value) < 1e-6);
        CHECK(std::abs(e.r2.value - q.r2.value) < 1e-6);
    }
    for (int N : {2, 4}) {
        const auto c = second_set(N, 10.0);
        CHECK(std::abs(asr_exact(c).total.value - asr_quadrature(c).total.value) < 1e-6);
    }
}

TEST_CASE("rate: a rescaled SNR breaks agreement")
{
    const auto c = moderate(2, 1, 1, 20.0);
    MetricsPolicy p;
    p.delta = 2.0;
    CHECK(std::abs(asr_exact(c, p).total.value - asr_quadrature(c).total.value) > 1e-3);
    p.delta = -1.0;
    CHECK_THROWS_AS(asr_exact(c, p), rfso::Error);
}

TEST_CASE("rate: trends")
{
    double prev = 0.0;
    for (int K : {1, 2, 4}) {
        const double v = asr_exact(moderate(K, 1, 1, 20.0)).total.value;
        CHECK(v > prev);
        prev = v;
    }
    prev = 1e9;
    for (int N : {1, 2, 4}) {
        const double v = asr_exact(second_set(N, 20.0)).total.value;
        CHECK(v < prev);
        prev = v;
    }
    CHECK(asr_exact(moderate(2, 1, 1, -60.0)).total.value < 1e-4);
}

TEST_CASE("rate: high-SNR expansion")
{
    double last = 1.0;
    for (double s : {30.0, 35.0, 40.0}) {
        const auto c = second_set(1, s);
        const double e = asr_exact(c).total.value;
        const double err = rel(asr_asymptotic(c).total.value, e);
        CHECK(err < last);
        last = err;
    }
    CHECK(last < 0.05);
    // Each hop adds log2(10)/10 per dB at high SNR, halved by the two phases.
    const double r1 = asr_exact(second_set(1, 50.0)).total.value;
    const double r2 = asr_exact(second_set(1, 60.0)).total.value;
    CHECK(rel((r2 - r1) / 10.0, std::log2(10.0) / 10.0) < 0.01);
}
