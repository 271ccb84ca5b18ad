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

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rfso/contour_kernels.hpp"
#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

using namespace rfso::specfun;
using rfso::Error;
using rfso::ErrorKind;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no rfso::Error thrown");
    return ErrorKind::domain;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("log_gamma at real anchors")
{
    CHECK(std::abs(log_gamma({1.0, 0.0})) < 1e-15);
    CHECK(std::abs(log_gamma({2.0, 0.0})) < 1e-15);
    CHECK(std::abs(log_gamma({0.5, 0.0}).real() - 0.5 * std::log(std::numbers::pi)) < 1e-15);
    for (double x : {0.01, 0.7, 3.3, 17.5, 171.2})
        CHECK(std::abs(log_gamma({x, 0.0}).real() - std::lgamma(x)) < 1e-13 * std::max(1.0, std::lgamma(x)));
}

TEST_CASE("log_gamma matches high-precision values")
{
    // Principal-branch values at 30 digits.
    struct Row {
        cplx z;
        cplx v;
    };
    const Row rows[] = {
        {{3, 4}, {-1.7566267846037841105, 4.7426644380346579282}},
        {{-2.5, 0.1}, {-0.10314924404281920289, -9.314444268359838115}},
        {{0.1, -20}, {-31.695265907346562615, -39.284410010649361162}},
        {{-7.3, -2}, {-13.327732047581360053, 20.373400309173530449}},
        {{50, 0.5}, {144.5632188226231273, 1.9510033381202366467}},
    };
    for (const auto& r : rows)
        CHECK(std::abs(log_gamma(r.z) - r.v) < 1e-12 * std::max(1.0, std::abs(r.v)));
}

TEST_CASE("log_gamma recurrence and conjugate symmetry")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-30.0, 30.0);
    std::uniform_real_distribution<double> im(-40.0, 40.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const cplx z{re(rng), im(rng)};
        if (std::abs(z.imag()) < 1e-3)
            continue;
        // log Gamma(z+1) - log Gamma(z) = log z modulo 2 pi i.
        cplx d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
        d.imag(std::remainder(d.imag(), 2.0 * std::numbers::pi));
        worst = std::max(worst, std::abs(d) / std::max(1.0, std::abs(log_gamma(z))));
        CHECK(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))) < 1e-12 * std::max(1.0, std::abs(log_gamma(z))));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("log_gamma rejects poles")
{
    CHECK(kind_of([] { log_gamma({0.0, 0.0}); }) == ErrorKind::pole_of_gamma);
    CHECK(kind_of([] { log_gamma({-3.0, 0.0}); }) == ErrorKind::pole_of_gamma);
    CHECK_NOTHROW(log_gamma({-3.0, 1e-6}));
}

TEST_CASE("reg_lower_gamma against boost")
{
    for (double a : {0.3, 1.0, 2.5, 7.0, 40.0, 150.0})
        for (double x : {1e-4, 0.2, 1.0, 3.0, 9.5, 40.0, 200.0})
            CHECK(std::abs(reg_lower_gamma(a, x) - boost::math::gamma_p(a, x)) < 1e-13);
    CHECK(reg_lower_gamma(2.0, 0.0) == 0.0);
    CHECK(reg_lower_gamma(2.0, INFINITY) == 1.0);
    CHECK(kind_of([] { reg_lower_gamma(0.0, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { reg_lower_gamma(1.0, -1.0); }) == ErrorKind::domain);
}

TEST_CASE("meijer_g elementary identities")
{
    const MeijerGSpec expo{1, 0, 0, 1, {}, {0.0}};
    const MeijerGSpec log1p{1, 2, 2, 2, {1.0, 1.0}, {1.0, 0.0}};
    const MeijerGSpec bessel{2, 0, 0, 2, {}, {0.0, 0.0}};
    for (double x : {1e-3, 0.05, 0.5, 1.0, 4.0, 20.0}) {
        CAPTURE(x);
        const auto e = meijer_g(expo, x);
        CHECK(rel(e.value, std::exp(-x)) < 1e-8);
        CHECK(e.error_bound < 1e-8 * std::exp(-x) + 1e-300);
        CHECK(rel(meijer_g(log1p, x).value, std::log1p(x)) < 1e-8);
        CHECK(rel(meijer_g(bessel, x).value, 2.0 * boost::math::cyl_bessel_k(0, 2.0 * std::sqrt(x))) < 1e-8);
    }
}

TEST_CASE("meijer_g general parameters")
{
    // Independent high-precision values.
    CHECK(rel(meijer_g({3, 0, 0, 3, {}, {0.3, 1.2, 0.7}}, 2.5).value, 0.0947096747182709492705) < 1e-9);
    CHECK(rel(meijer_g({2, 1, 1, 3, {0.5}, {1.5, 0.2, 0.1}}, 0.8).value, 0.666054961148571093541) < 1e-9);
    CHECK(rel(meijer_g({3, 0, 1, 3, {0.4}, {0.1, 0.9, 2.2}}, 30.0).value, 0.00176526223239787878518) < 1e-9);
}

TEST_CASE("meijer_g at extreme arguments")
{
    // Small arguments close the contour past the leading poles.
    const MeijerGSpec bessel{2, 0, 0, 2, {}, {0.3, 0.0}};
    for (double x : {1e-40, 1e-120, 1e-300}) {
        const double ref = 2.0 * std::pow(x, 0.15) * boost::math::cyl_bessel_k(0.3, 2.0 * std::sqrt(x));
        CHECK(rel(meijer_g(bessel, x).value, ref) < 1e-9);
    }
    // Far below the double range the result is reported as negligible.
    const MeijerGSpec expo{1, 0, 0, 1, {}, {0.0}};
    const auto e = meijer_g(expo, 1e5);
    CHECK(e.value == 0.0);
    CHECK(e.error_bound < 1e-300);
    ContourPolicy strict;
    strict.log_negligible = -1e300;
    CHECK_THROWS_AS(meijer_g(expo, 1e5, strict), Error);
}

TEST_CASE("meijer_g validation and contour failures")
{
    CHECK(kind_of([] { meijer_g({2, 0, 0, 1, {}, {0.0}}, 1.0); }) == ErrorKind::domain);
    CHECK(kind_of([] { meijer_g({1, 0, 0, 1, {}, {0.0}}, -1.0); }) == ErrorKind::domain);
    // a1 - b1 = 1 makes the two pole families touch; b1 is moved by eps,
    // which turns the value into Gamma(eps) x^(1+eps) (1+x)^-eps.
    const auto touch = meijer_g({1, 1, 1, 1, {2.0}, {1.0}}, 0.5);
    CHECK(touch.perturbed);
    const double eps = ContourPolicy{}.abscissa_shift;
    CHECK(rel(touch.value, std::tgamma(eps) * std::pow(0.5, 1.0 + eps) * std::pow(1.5, -eps)) < 1e-8);
    // a1 - b1 = 2: the families overlap outright.
    CHECK(kind_of([] { meijer_g({1, 1, 1, 1, {3.0}, {1.0}}, 0.5); }) == ErrorKind::contour_failure);
    // G^{1,1}_{1,1}(x | a; b) = Gamma(1 - a + b) x^b (1 + x)^(a - b - 1).
    CHECK(rel(meijer_g({1, 1, 1, 1, {0.3}, {0.9}}, 2.0).value,
              std::tgamma(1.6) * std::pow(2.0, 0.9) * std::pow(3.0, -1.6)) < 1e-9);
    // Non-decaying integrand.
    CHECK(kind_of([] { meijer_g({1, 1, 2, 2, {0.5, 0.5}, {0.1, 0.2}}, 0.5); }) == ErrorKind::non_convergence);
}

TEST_CASE("meijer_g serial and parallel sums agree exactly")
{
    ContourPolicy serial;
    serial.parallel = false;
    const MeijerGSpec spec{3, 0, 0, 3, {}, {0.3, 1.2, 0.7}};
    const auto a = meijer_g(spec, 2.5, serial);
    const auto b = meijer_g(spec, 2.5);
    CHECK(a.value == b.value);
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("fox_h with non-unit scaling")
{
    // (1/2 pi i) \int Gamma(2s) x^-s ds = exp(-sqrt x) / 2.
    const GammaFactor f[] = {num(0.0, 2.0)};
    for (double x : {0.01, 1.0, 25.0})
        CHECK(rel(fox_h(f, std::log(x)).value, 0.5 * std::exp(-std::sqrt(x))) < 1e-9);
}

TEST_CASE("bivariate fox_h: separable and reducible cases")
{
    BivariateFoxHSpec sep;
    sep.s_factors = {num(0.0, 1.0)};
    sep.t_factors = {num(0.0, 0.0, 1.0)};
    for (double x1 : {0.3, 2.0})
        for (double x2 : {0.1, 1.5}) {
            const auto r = fox_h_bivariate(sep, x1, x2);
            CHECK(rel(r.value, std::exp(-x1 - x2)) < 1e-8);
        }

    // \iint Gamma(s) Gamma(t) Gamma(A - y s - t) x1^-s x2^-t
    //   = \int Gamma(s) Gamma(A - y s) (1 + x2)^{-(A - y s)} x1^-s ds.
    const double A = 3.5;
    const double y = 2.0;
    BivariateFoxHSpec red;
    red.s_factors = {num(0.0, 1.0)};
    red.t_factors = {num(0.0, 0.0, 1.0)};
    red.outer_factors = {num(A, -y, -1.0)};
    const double x1 = 0.7;
    const double x2 = 0.4;
    const GammaFactor one[] = {num(0.0, 1.0), num(A, -y)};
    const double ref = std::pow(1.0 + x2, -A) * fox_h(one, std::log(x1) - y * std::log1p(x2)).value;
    CHECK(rel(fox_h_bivariate(red, x1, x2).value, ref) < 1e-8);
}

TEST_CASE("bivariate fox_h symmetry")
{
    BivariateFoxHSpec a;
    a.s_factors = {num(0.4, 1.0)};
    a.t_factors = {num(1.1, 0.0, 1.0)};
    a.outer_factors = {num(2.0, -1.0, -1.5)};
    BivariateFoxHSpec b;
    b.s_factors = {num(1.1, 1.0)};
    b.t_factors = {num(0.4, 0.0, 1.0)};
    b.outer_factors = {num(2.0, -1.5, -1.0)};
    CHECK(rel(fox_h_bivariate(a, 0.6, 1.7).value, fox_h_bivariate(b, 1.7, 0.6).value) < 1e-9);
}

TEST_CASE("leading_pole_sum")
{
    // Gamma(s) Gamma(a - s): residues at s = 0, -1, ... give Gamma(a)(1+x)^-a.
    const GammaFactor f[] = {num(0.0, 1.0), num(2.5, -1.0)};
    const auto p = leading_pole_sum(f, std::log(1e-3), PoleWindow::dominant);
    CHECK(p.poles == 1);
    CHECK(p.dominant_pole == 0.0);
    CHECK(rel(p.value, std::tgamma(2.5)) < 1e-14);
    // Double pole of Gamma(s)^2 at 0, split by eps: residue -log x - 2 gamma_E.
    const GammaFactor k0[] = {num(0.0, 1.0), num(0.0, 1.0)};
    const double x = 1e-4;
    const auto q = leading_pole_sum(k0, std::log(x));
    CHECK(q.perturbed);
    CHECK(q.poles == 2);
    // Poles split to -eps and -2 eps: leading error is (3/2) eps log^2 x.
    const double lx = std::log(x);
    CHECK(std::abs(q.value - (-lx - 2.0 * std::numbers::egamma)) < 2e-6 * lx * lx);
}

TEST_CASE("ladder")
{
    const auto l = ladder(3, 1.5);
    REQUIRE(l.size() == 3);
    CHECK(l[0] == doctest::Approx(0.5));
    CHECK(l[2] == doctest::Approx(3.5 / 3.0));
}
