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
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <cmath>

#include "doctest.h"
#include "rfso/channels.hpp"
#include "rfso/errors.hpp"
#include "support.hpp"

using namespace rfso::channels;
using rfso::testing::ks_upper_bound;
using rfso::testing::logspace;

namespace {

FsoLinkParams moderate(int r = 1, double mu = 10.0)
{
    FsoLinkParams p;
    p.xi = pointing_preset_xi("strong");
    p.r = r;
    p.mu_r = mu;
    return p;
}

FsoLinkParams second_set(int r = 1, double mu = 10.0)
{
    FsoLinkParams p;
    p.alpha1 = 2.169;
    p.alpha2 = 1.0;
    p.beta1 = 0.55;
    p.beta2 = 2.35;
    p.omega1 = 1.5793;
    p.omega2 = 1.0;
    p.xi = pointing_preset_xi("weak");
    p.r = r;
    p.mu_r = mu;
    return p;
}

// Integral over (0, inf) split at `mid`.
template <typename F>
double integrate_half_line(F f, double mid)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(f, 0.0, mid, 1e-12) + es.integrate([&](double g) { return f(mid + g); }, 1e-12);
}

}  // namespace

TEST_CASE("zeta_table against polynomial convolution")
{
    for (int m = 1; m <= 4; ++m) {
        const auto z = zeta_table(5, m);
        std::vector<double> base(static_cast<std::size_t>(m));
        for (int l = 0; l < m; ++l)
            base[l] = 1.0 / std::tgamma(l + 1.0);
        std::vector<double> power{1.0};
        for (int n1 = 0; n1 < 5; ++n1) {
            REQUIRE(z[n1].size() == power.size());
            for (std::size_t k = 0; k < power.size(); ++k)
                CHECK(z[n1][k] == doctest::Approx(power[k]).epsilon(1e-14));
            std::vector<double> next(power.size() + m - 1, 0.0);
            for (std::size_t i = 0; i < power.size(); ++i)
                for (int l = 0; l < m; ++l)
                    next[i + l] += power[i] * base[l];
            power = next;
        }
    }
    const auto z2 = zeta_table(3, 2);
    CHECK(z2[2] == std::vector<double>{1.0, 2.0, 1.0});
    const auto z1 = zeta_table(4, 1);
    for (const auto& row : z1)
        CHECK(row == std::vector<double>{1.0});
}

TEST_CASE("rf_cdf_best equals the power of the single-user CDF")
{
    double worst = 0.0;
    for (int K = 1; K <= 5; ++K)
        for (int m = 1; m <= 3; ++m) {
            const RfLinkParams p{m, 3.0, K};
            for (double g : logspace(-2, 2, 200)) {
                const double x = g * 3.0;
                const double ref = std::pow(boost::math::gamma_p(m, p.beta() * x), K);
                worst = std::max(worst, std::abs(rf_cdf_best(x, p) - ref));
            }
        }
    CHECK(worst < 1e-9);
    CHECK(rf_cdf_best(0.0, {2, 5.0, 3}) == 0.0);
    CHECK(rf_cdf_best(4.0, {1, 4.0, 1}) == doctest::Approx(0.6321206).epsilon(1e-7));
    CHECK(rf_cdf_best(4.0, {1, 4.0, 2}) == doctest::Approx(0.3995764).epsilon(1e-7));
}

TEST_CASE("rf term weights sum to one")
{
    double s = 0.0;
    for (const auto& t : rf_terms({3, 2.0, 4}))
        s += t.a1;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rf sampler")
{
    Rng rng(11);
    const RfLinkParams exp1{1, 5.0, 1};
    double mean = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
        mean += rf_sample_best(rng, exp1);
    CHECK(std::abs(mean / n - 5.0) < 0.05);

    const RfLinkParams p{2, 3.0, 4};
    std::vector<double> v(n);
    for (auto& x : v)
        x = rf_sample_best(rng, p);
    const double emp = std::accumulate(v.begin(), v.end(), 0.0) / n;
    const double ref = integrate_half_line([&](double g) { return g * rf_pdf_best(g, p); }, 3.0);
    CHECK(std::abs(emp / ref - 1.0) < 0.01);
    std::sort(v.begin(), v.end());
    CHECK(ks_upper_bound(v, [&](double g) { return rf_cdf_best(g, p); }, 4000) < 0.002);
}

TEST_CASE("rf parameter validation")
{
    CHECK_THROWS_AS(rf_terms({0, 1.0, 1}), rfso::Error);
    CHECK_THROWS_AS(rf_terms({1, -1.0, 1}), rfso::Error);
    CHECK_THROWS_AS(rf_terms({1, 1.0, 0}), rfso::Error);
}

TEST_CASE("pointing presets")
{
    // Beam-width/jitter geometry with jitter = 3 aperture radii.
    CHECK(pointing_preset_xi("strong") == doctest::Approx(0.8510450380754).epsilon(1e-12));
    CHECK(pointing_preset_xi("weak") == doctest::Approx(1.6754253765058).epsilon(1e-12));
    CHECK_THROWS_AS(pointing_preset_xi("medium"), rfso::Error);
}

TEST_CASE("rational approximation of the shape ratio")
{
    CHECK(best_rational(1.0, 25) == std::pair<long, long>{1, 1});
    CHECK(best_rational(1.05, 25) == std::pair<long, long>{21, 20});
    CHECK(best_rational(2.169, 10) == std::pair<long, long>{13, 6});
    CHECK(best_rational(std::numbers::pi, 100) == std::pair<long, long>{311, 99});

    FsoLinkParams eq = moderate();
    eq.alpha1 = 2.0;
    auto d = dgg_derive(eq);
    CHECK(d.lambda == 1);
    CHECK(d.sigma == 1);
    CHECK(d.y == 2.0);
    CHECK(d.warnings.empty());

    d = dgg_derive(moderate());
    CHECK(d.lambda == 21);
    CHECK(d.sigma == 20);
    CHECK(d.y == doctest::Approx(42.0));
    CHECK(d.n == 42);
    CHECK(d.tau1.size() == 42);
    CHECK(d.warnings.empty());

    d = dgg_derive(second_set(2), 10);
    CHECK(d.lambda == 13);
    CHECK(d.sigma == 6);
    CHECK(d.n == 2 * 20);
    CHECK(d.tau4.size() == 40);
    CHECK(d.warnings.size() == 1);
    CHECK(d.ratio_error == doctest::Approx(2.169 - 13.0 / 6.0));
}

TEST_CASE("derived FSO constants")
{
    for (auto p : {moderate(1), moderate(2), second_set(1), second_set(2)}) {
        const auto d = dgg_derive(p);
        // The CDF tends to one: d4 prod Gamma(tau4) / prod Gamma(tau3) = 1.
        double lg = std::log(d.d4);
        for (double t : d.tau4)
            lg += std::lgamma(t);
        for (double t : d.tau3)
            lg -= std::lgamma(t);
        CHECK(std::abs(lg) < 1e-12);
        // z equals E[I]/A0 with alpha1 replaced by its rational surrogate.
        FsoLinkParams q = p;
        q.alpha1 = d.y / d.sigma;
        CHECK(d.z == doctest::Approx(fso_mean_irradiance(q)).epsilon(1e-12));
    }
}

TEST_CASE("fso pdf normalisation, scaling and role exchange")
{
    for (auto p : {moderate(1), moderate(2), second_set(1), second_set(2)}) {
        const auto d = dgg_derive(p);
        const double total = integrate_half_line([&](double g) { return fso_pdf(g, d, p); }, p.mu_r);
        CHECK(std::abs(total - 1.0) < 1e-5);
    }
    auto p = moderate(2, 10.0);
    auto q = moderate(2, 1.0);
    const auto dp = dgg_derive(p);
    const auto dq = dgg_derive(q);
    for (double g : {0.05, 1.0, 7.0, 40.0})
        CHECK(fso_pdf(g, dp, p) == doctest::Approx(fso_pdf(g / 10.0, dq, q) / 10.0).epsilon(1e-9));

    // Exchange the two turbulence factors (exact ratio, so lambda <-> sigma).
    FsoLinkParams a = moderate(1);
    FsoLinkParams b = a;
    std::swap(b.alpha1, b.alpha2);
    std::swap(b.beta1, b.beta2);
    std::swap(b.omega1, b.omega2);
    const auto da = dgg_derive(a);
    const auto db = dgg_derive(b);
    CHECK(da.lambda == db.sigma);
    CHECK(da.sigma == db.lambda);
    for (double g : {0.3, 3.0, 30.0})
        CHECK(fso_pdf(g, da, a) == doctest::Approx(fso_pdf(g, db, b)).epsilon(1e-6));
}

TEST_CASE("fso cdf")
{
    // Independent value from the product-of-generalized-gamma integral.
    {
        const auto p = moderate(2, 10.0);
        const auto d = dgg_derive(p);
        CHECK(fso_cdf(p.mu_r, d, p) == doctest::Approx(0.57422418453219233).epsilon(1e-9));
    }
    for (auto p : {moderate(1), second_set(2)}) {
        const auto d = dgg_derive(p);
        CHECK(fso_cdf(0.0, d, p) == 0.0);
        CHECK(fso_cdf(1e3 * p.mu_r, d, p) >= 0.999);
        for (double g : {0.02, 0.7, 9.0, 60.0}) {
            boost::math::quadrature::tanh_sinh<double> ts;
            const double ref = ts.integrate([&](double x) { return fso_pdf(x, d, p); }, 0.0, g, 1e-12);
            CHECK(std::abs(fso_cdf(g, d, p) / ref - 1.0) < 1e-5);
            CHECK(fso_cdf(g, d, p) + fso_ccdf(g, d, p) == doctest::Approx(1.0).epsilon(1e-12));
        }
        double prev = 0.0;
        for (double g : logspace(-3, 3, 200)) {
            const double c = fso_cdf(g * p.mu_r, d, p);
            CHECK(c >= prev - 1e-14);
            CHECK(c <= 1.0);
            prev = c;
        }
        // Higher average SNR leaves less mass below a fixed level.
        FsoLinkParams hi = p;
        hi.mu_r *= 3.0;
        for (double g : {0.1, 1.0, 10.0})
            CHECK(fso_cdf(g, d, hi) <= fso_cdf(g, d, p));
    }
}

TEST_CASE("fso sampler")
{
    Rng rng(5);
    FsoLinkParams flat;
    flat.alpha1 = flat.alpha2 = flat.beta1 = flat.beta2 = flat.omega1 = flat.omega2 = 1.0;
    flat.xi = 1e6;
    flat.mu_r = 1.0;
    const int n = 1000000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i)
        mean += fso_sample(rng, flat);
    CHECK(std::abs(mean / n - 1.0) < 0.01);

    const auto p = moderate(1, 4.0);
    std::vector<double> v(n);
    for (auto& x : v)
        x = fso_sample(rng, p);
    CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0) / n / p.mu_r - 1.0) < 0.01);
    std::sort(v.begin(), v.end());
    const auto d = dgg_derive(p);
    CHECK(ks_upper_bound(v, [&](double g) { return fso_cdf(g, d, p); }, 2000) < 0.002);
}

TEST_CASE("interference")
{
    const InterferenceParams one{1, 1.0, 2.0};
    CHECK(inr_pdf(2.0, one) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-14));
    const InterferenceParams q{3, 1.5, 0.7};
    boost::math::quadrature::exp_sinh<double> es;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double total = ts.integrate([&](double g) { return inr_pdf(g, q); }, 0.0, 2.0) +
                         es.integrate([&](double g) { return inr_pdf(2.0 + g, q); });
    CHECK(std::abs(total - 1.0) < 1e-8);
    Rng rng(3);
    double mean = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
        mean += inr_sample(rng, q);
    CHECK(std::abs(mean / n / (3 * 0.7) - 1.0) < 0.01);
    CHECK_NOTHROW(q.validate());
    CHECK_THROWS_AS((InterferenceParams{1, 0.4, 1.0}.validate()), rfso::Error);
}
