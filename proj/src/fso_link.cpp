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
#include <numbers>
#include <sstream>

#include "rfso/channels.hpp"
#include "rfso/errors.hpp"

namespace rfso::channels {

using specfun::ContourPolicy;
using specfun::MeijerGSpec;

void FsoLinkParams::validate() const
{
    for (double v : {alpha1, alpha2, beta1, beta2, omega1, omega2, xi, mu_r})
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::domain, "fso shape, scale, xi and mu_r must be positive and finite");
    if (r != 1 && r != 2)
        throw Error(ErrorKind::domain, "fso.r must be 1 (heterodyne) or 2 (IM/DD)");
}

double pointing_xi(double w_over_a, double jitter_over_a)
{
    if (!(w_over_a > 0.0) || !(jitter_over_a > 0.0))
        throw Error(ErrorKind::domain, "pointing_xi needs positive beam waist and jitter");
    const double v = std::sqrt(std::numbers::pi / 2.0) / w_over_a;
    const double weq2 = w_over_a * w_over_a * std::sqrt(std::numbers::pi) * std::erf(v) /
                        (2.0 * v * std::exp(-v * v));
    return std::sqrt(weq2) / (2.0 * jitter_over_a);
}

double pointing_preset_xi(const std::string& name)
{
    if (name == "strong")
        return pointing_xi(5.0, kPresetJitterOverA);
    if (name == "weak")
        return pointing_xi(10.0, kPresetJitterOverA);
    throw Error(ErrorKind::config, "unknown pointing preset '" + name + "' (use strong or weak)");
}

std::pair<long, long> best_rational(double x, long max_den)
{
    if (!(x > 0.0) || !std::isfinite(x) || max_den < 1)
        throw Error(ErrorKind::domain, "best_rational needs x > 0 and max_den >= 1");
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    bool exact = false;
    for (int it = 0; it < 64; ++it) {
        const double a_real = std::floor(v);
        if (a_real > 1e15)
            break;
        const long a = static_cast<long>(a_real);
        const long q2 = q0 + a * q1;
        if (q2 > max_den)
            break;
        const long p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = v - a_real;
        if (frac < 1e-12 || std::abs(static_cast<double>(p1) / q1 - x) < 1e-15 * x) {
            exact = true;
            break;
        }
        v = 1.0 / frac;
    }
    if (exact || q1 == 0)
        return {p1, q1};
    // Best semiconvergent below the next convergent.
    const long k = (max_den - q0) / q1;
    const long ps = p0 + k * p1;
    const long qs = q0 + k * q1;
    const double es = std::abs(static_cast<double>(ps) / qs - x);
    const double ec = std::abs(static_cast<double>(p1) / q1 - x);
    if (es < ec)
        return {ps, qs};
    return {p1, q1};
}

DggDerived dgg_derive(const FsoLinkParams& p, int max_denominator)
{
    p.validate();
    if (max_denominator < 1)
        throw Error(ErrorKind::domain, "max_denominator must be >= 1");
    DggDerived d;
    const auto [lam, sig] = best_rational(p.alpha1 / p.alpha2, max_denominator);
    d.lambda = static_cast<int>(lam);
    d.sigma = static_cast<int>(sig);
    d.ratio_error = std::abs(static_cast<double>(lam) / sig - p.alpha1 / p.alpha2);
    if (d.ratio_error > 1e-3) {
        std::ostringstream os;
        os << "alpha1/alpha2 = " << p.alpha1 / p.alpha2 << " approximated by " << lam << "/" << sig
           << " (error " << d.ratio_error << ")";
        d.warnings.push_back(os.str());
    }
    const int L = d.lambda + d.sigma;
    const double y = p.alpha2 * d.lambda;
    const double sigma = d.sigma;
    const double lambda = d.lambda;
    const int r = p.r;
    d.y = y;
    d.n = r * (L + 1);

    const double xi2 = p.xi * p.xi;
    d.tau1.push_back(xi2 / y);
    for (double v : specfun::ladder(d.sigma, p.beta1))
        d.tau1.push_back(v);
    for (double v : specfun::ladder(d.lambda, p.beta2))
        d.tau1.push_back(v);
    d.tau2 = {1.0 + xi2 / y};
    d.tau3 = specfun::ladder(r, d.tau2[0]);
    for (double t : d.tau1)
        for (double v : specfun::ladder(r, t))
            d.tau4.push_back(v);

    const double log2pi = std::log(2.0 * std::numbers::pi);
    const double log_gb = std::lgamma(p.beta1) + std::lgamma(p.beta2);
    const double log_d1 = (1.0 - L / 2.0) * log2pi + (p.beta1 - 0.5) * std::log(sigma) +
                          (p.beta2 - 0.5) * std::log(lambda) + std::log(xi2) - log_gb;
    d.d1 = std::exp(log_d1);
    const double log_d2 = sigma * std::log(p.beta1 / (sigma * p.omega1)) +
                          lambda * std::log(p.beta2 / (lambda * p.omega2));
    d.d2 = std::exp(log_d2);
    double log_d3 = 0.0;
    for (std::size_t g = 1; g < d.tau1.size(); ++g)
        log_d3 += std::lgamma(1.0 / y + d.tau1[g]);
    d.d3 = std::exp(log_d3);
    const double log_z = log_d1 - log_d2 / y + log_d3 - std::log1p(xi2);
    d.z = std::exp(log_z);
    const double log_d4 = (1.0 - r * L / 2.0) * log2pi + (p.beta1 - 0.5) * std::log(sigma) +
                          (p.beta2 - 0.5) * std::log(lambda) + std::log(xi2) +
                          (p.beta1 + p.beta2 - 2.0) * std::log(static_cast<double>(r)) -
                          std::log(y) - log_gb;
    d.d4 = std::exp(log_d4);
    d.log_pdf_arg = log_d2 + y * log_z;
    d.log_d5 = r * (d.log_pdf_arg - L * std::log(static_cast<double>(r)));
    return d;
}

MeijerGSpec fso_cdf_spec(const DggDerived& d)
{
    const int r = static_cast<int>(d.tau3.size());
    MeijerGSpec g;
    g.m = d.n;
    g.n = 1;
    g.p = r + 1;
    g.q = d.n + 1;
    g.a.push_back(1.0);
    g.a.insert(g.a.end(), d.tau3.begin(), d.tau3.end());
    g.b = d.tau4;
    g.b.push_back(0.0);
    return g;
}

namespace {

void require_positive_gamma(double gamma, const char* what)
{
    if (!(gamma >= 0.0))
        throw Error(ErrorKind::domain, std::string(what) + " needs gamma >= 0");
}

// The negligibility floor applies to the product with the prefactor.
ContourPolicy scaled_policy(const ContourPolicy& policy, double scale)
{
    ContourPolicy out = policy;
    out.log_negligible -= std::log(std::abs(scale));
    return out;
}

}  // namespace

double fso_pdf(double gamma, const DggDerived& d, const FsoLinkParams& p, const ContourPolicy& policy)
{
    require_positive_gamma(gamma, "fso_pdf");
    if (gamma == 0.0 || std::isinf(gamma))
        return 0.0;
    const int L = d.lambda + d.sigma;
    MeijerGSpec g{L + 1, 0, 1, L + 1, d.tau2, d.tau1};
    const double log_x = d.log_pdf_arg + (d.y / p.r) * std::log(gamma / p.mu_r);
    const double scale = d.d1 / (p.r * gamma);
    const double v = specfun::meijer_g_log(g, log_x, scaled_policy(policy, scale)).value;
    return std::max(0.0, scale * v);
}

double fso_cdf(double gamma, const DggDerived& d, const FsoLinkParams& p, const ContourPolicy& policy)
{
    require_positive_gamma(gamma, "fso_cdf");
    if (gamma == 0.0)
        return 0.0;
    if (std::isinf(gamma))
        return 1.0;
    const double log_x = d.log_d5 + d.y * std::log(gamma / p.mu_r);
    const double v = d.d4 * specfun::meijer_g_log(fso_cdf_spec(d), log_x, scaled_policy(policy, d.d4)).value;
    return std::clamp(v, 0.0, 1.0);
}

double fso_ccdf(double gamma, const DggDerived& d, const FsoLinkParams& p, const ContourPolicy& policy)
{
    require_positive_gamma(gamma, "fso_ccdf");
    if (gamma == 0.0)
        return 1.0;
    if (std::isinf(gamma))
        return 0.0;
    MeijerGSpec g = fso_cdf_spec(d);
    g.m = d.n + 1;
    g.n = 0;
    const double log_x = d.log_d5 + d.y * std::log(gamma / p.mu_r);
    const double v = d.d4 * specfun::meijer_g_log(g, log_x, scaled_policy(policy, d.d4)).value;
    return std::clamp(v, 0.0, 1.0);
}

double fso_mean_irradiance(const FsoLinkParams& p)
{
    const double xi2 = p.xi * p.xi;
    const double log_ex = std::log(p.omega1 / p.beta1) / p.alpha1 + std::lgamma(p.beta1 + 1.0 / p.alpha1) -
                          std::lgamma(p.beta1);
    const double log_ey = std::log(p.omega2 / p.beta2) / p.alpha2 + std::lgamma(p.beta2 + 1.0 / p.alpha2) -
                          std::lgamma(p.beta2);
    return std::exp(log_ex + log_ey) * xi2 / (xi2 + 1.0);
}

double fso_sample(Rng& rng, const FsoLinkParams& p)
{
    std::gamma_distribution<double> g1(p.beta1, 1.0);
    std::gamma_distribution<double> g2(p.beta2, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double ix = std::pow(p.omega1 * g1(rng) / p.beta1, 1.0 / p.alpha1);
    const double iy = std::pow(p.omega2 * g2(rng) / p.beta2, 1.0 / p.alpha2);
    const double ip = std::pow(u(rng), 1.0 / (p.xi * p.xi));
    const double rel = ix * iy * ip / fso_mean_irradiance(p);
    return p.mu_r * (p.r == 1 ? rel : rel * rel);
}

}  // namespace rfso::channels
