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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "metrics_detail.hpp"
#include "rfso/errors.hpp"
#include "rfso/metrics.hpp"

namespace rfso::metrics {

using specfun::GammaFactor;
using specfun::num;

namespace {

constexpr double kLn2 = std::numbers::ln2;

bool is_left(const GammaFactor& f)
{
    return f.position == specfun::FactorPosition::numerator && f.coef_s > 0.0;
}

bool is_right(const GammaFactor& f)
{
    return f.position == specfun::FactorPosition::numerator && f.coef_s < 0.0;
}

// Residues at every pole of one family that lies no further out than the
// outermost first pole of that family. Closing left counts them positively,
// closing right negatively.
double pole_expansion(std::span<const GammaFactor> f, double log_x, bool left)
{
    double reach = 0.0;
    for (const auto& g : f)
        if (left ? is_left(g) : is_right(g))
            reach = std::max(reach, std::abs(g.offset / g.coef_s));
    std::vector<double> poles;
    for (const auto& g : f) {
        if (!(left ? is_left(g) : is_right(g)))
            continue;
        const double step = 1.0 / std::abs(g.coef_s);
        const double first = -g.offset / g.coef_s;
        for (double p = first; std::abs(p) <= reach + 1e-12; p += left ? -step : step)
            poles.push_back(p);
    }
    std::sort(poles.begin(), poles.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (i > 0 && std::abs(poles[i] - poles[i - 1]) < 1e-9)
            continue;
        const auto r = specfun::residue(f, log_x, poles[i]);
        if (r.sign != 0)
            acc += r.sign * std::exp(r.log_abs);
    }
    return left ? acc : -acc;
}

Value make_value(double v, double err, unsigned flags)
{
    Value out;
    out.value = v;
    out.error = err;
    out.flags = flags;
    return out;
}

void add(Value& into, const Value& v)
{
    into.value += v.value;
    into.error += v.error;
    into.flags |= v.flags;
}

unsigned derived_flags(const channels::DggDerived& d)
{
    return d.warnings.empty() ? flag_none : flag_rational;
}

}  // namespace

specfun::MeijerGSpec asr_rf_spec(int l, double k)
{
    return {2, 2, 2, 2, {0.0, -static_cast<double>(l)}, {0.0, k - 1.0}};
}

AsrCoefficients asr_coefficients(const SystemConfig& cfg, double delta)
{
    cfg.validate();
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw Error(ErrorKind::domain, "delta must be positive and finite");
    AsrCoefficients c;
    c.delta = delta;
    c.k = cfg.intf.shape();
    c.theta = cfg.intf.rate();
    const auto rf = channels::rf_terms(cfg.rf);
    for (const auto& t : rf) {
        for (int l = 0; l < t.order; ++l) {
            AsrRfTerm a;
            a.n1 = t.n1;
            a.n2 = t.n2;
            a.l = l;
            a.weight = t.a1 * std::exp(-std::lgamma(l + 1.0) - std::lgamma(c.k));
            c.rf.push_back(a);
        }
    }
    c.c.resize(static_cast<std::size_t>(cfg.rf.num_users));
    for (int n1 = 0; n1 < cfg.rf.num_users; ++n1)
        c.c[n1] = delta * c.theta / (cfg.rf.beta() * (n1 + 1));

    c.fso = channels::dgg_derive(cfg.fso, cfg.max_denominator);
    specfun::MeijerGSpec ccdf = channels::fso_cdf_spec(c.fso);
    ccdf.m = c.fso.n + 1;
    ccdf.n = 0;
    c.fso_factors = specfun::mellin_factors(ccdf);
    const double y = c.fso.y;
    // E over the INR, then \int g^{-ys} / (1 + g) dg.
    c.fso_factors.push_back(num(c.k, -y));
    c.fso_factors.push_back(num(1.0, -y));
    c.fso_factors.push_back(num(0.0, y));
    c.fso_log_x = c.fso.log_d5 - y * std::log(c.theta * cfg.fso.mu_r * delta);
    c.fso_prefactor = c.fso.d4 / (2.0 * kLn2 * std::tgamma(c.k));
    return c;
}

AsrValue asr_exact(const SystemConfig& cfg, const MetricsPolicy& policy)
{
    const auto c = asr_coefficients(cfg, policy.delta);
    AsrValue out;
    for (const auto& t : c.rf) {
        const double cc = c.c[t.n1];
        const auto e = specfun::meijer_g(asr_rf_spec(t.l, c.k), cc, policy.contour);
        const double w = t.weight * cc / (2.0 * kLn2);
        add(out.r1, make_value(w * e.value, std::abs(w) * e.error_bound, detail::contour_flags(e)));
    }
    const auto e = specfun::fox_h(c.fso_factors, c.fso_log_x,
                                  detail::scaled(policy.contour, std::log(c.fso_prefactor)));
    out.r2 = make_value(c.fso_prefactor * e.value, c.fso_prefactor * e.error_bound,
                        detail::contour_flags(e) | derived_flags(c.fso));
    out.r1.value = std::max(0.0, out.r1.value);
    out.r2.value = std::max(0.0, out.r2.value);
    out.total = out.r1;
    add(out.total, out.r2);
    return out;
}

AsrValue asr_asymptotic(const SystemConfig& cfg, const MetricsPolicy& policy)
{
    const auto c = asr_coefficients(cfg, policy.delta);
    AsrValue out;
    // Large average SNR pushes the RF arguments to infinity (right poles)
    // and the FSO argument to zero (left poles).
    for (const auto& t : c.rf) {
        const double cc = c.c[t.n1];
        const auto f = specfun::mellin_factors(asr_rf_spec(t.l, c.k));
        out.r1.value += t.weight * cc / (2.0 * kLn2) * pole_expansion(f, std::log(cc), false);
    }
    out.r2.value = c.fso_prefactor * pole_expansion(c.fso_factors, c.fso_log_x, true);
    out.r2.flags = derived_flags(c.fso);
    out.total = out.r1;
    add(out.total, out.r2);
    return out;
}

double mean_inverse_shift(double w, double k, double theta)
{
    if (!(w > 0.0) || !(k > 0.0) || !(theta > 0.0))
        throw Error(ErrorKind::domain, "mean_inverse_shift needs w, k, theta > 0");
    // E[1/(Y + w)] = theta h(theta w), h(x) = x^{k-1} \int_0^inf e^-u (x + u)^-k du.
    const double x = theta * w;
    if (x < 1e-8) {
        // Leading terms of e^x x^{k-1} Gamma(1-k, x); the next ones are O(x).
        if (std::abs(k - 1.0) < 1e-12)
            return theta * (-std::log(x) - std::numbers::egamma);
        const double power = std::tgamma(1.0 - k) * std::exp((k - 1.0) * std::log(x));
        if (k < 1.0)
            return theta * (power - 1.0 / (1.0 - k));
        // For k >= 2 the power term is O(x) or smaller (log-corrected at integers).
        return theta * (1.0 / (k - 1.0) + (k < 2.0 ? power : 0.0));
    }
    if (std::isinf(x))
        return 0.0;
    if (x >= 1.0) {
        // h(x) = x^-1 \int e^-u (1 + u/x)^-k du keeps everything O(1).
        boost::math::quadrature::exp_sinh<double> es;
        const double v = es.integrate([&](double u) { return std::exp(-u - k * std::log1p(u / x)); }, 1e-13);
        return theta * v / x;
    }
    auto body = [&](double u) { return std::exp(-u - k * std::log(x + u)); };
    double h = 0.0;
    {
        boost::math::quadrature::tanh_sinh<double> ts;
        boost::math::quadrature::exp_sinh<double> es;
        const double head = ts.integrate(body, 0.0, 1.0, 1e-13);
        const double tail = es.integrate([&](double v) { return body(1.0 + v); }, 1e-13);
        h = std::exp((k - 1.0) * std::log(x)) * (head + tail);
    }
    return theta * h;
}

double rate_quadrature(const std::function<double(double)>& ccdf,
                       const std::function<double(double)>& weight, double tolerance)
{
    auto f = [&](double w) {
        const double s = ccdf(w);
        return s == 0.0 ? 0.0 : s * weight(w);
    };
    try {
        // Unit split point: the 1/(1+g) kernel changes behaviour there.
        boost::math::quadrature::tanh_sinh<double> ts;
        boost::math::quadrature::exp_sinh<double> es;
        const double head = ts.integrate(f, 0.0, 1.0, tolerance);
        const double tail = es.integrate([&](double v) { return f(1.0 + v); }, tolerance);
        return (head + tail) / kLn2;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::quadrature, std::string("rate quadrature: ") + e.what());
    }
}

AsrValue asr_quadrature(const SystemConfig& cfg, const MetricsPolicy& policy)
{
    cfg.validate();
    const auto d = channels::dgg_derive(cfg.fso, cfg.max_denominator);
    const double k = cfg.intf.shape();
    const double th = cfg.intf.rate();
    auto weight = [&](double w) { return mean_inverse_shift(w, k, th); };
    const auto rf = channels::rf_terms(cfg.rf);
    auto rf_ccdf = [&](double g) {
        // Survival summed term by term so the tail does not floor at 1e-16.
        double s = 0.0;
        for (const auto& t : rf)
            s += t.a1 * boost::math::gamma_q(static_cast<double>(t.order), t.b0 * g);
        return std::max(0.0, s);
    };
    auto fso_ccdf = [&](double g) { return channels::fso_ccdf(g, d, cfg.fso, policy.contour); };
    AsrValue out;
    out.r1.value = 0.5 * rate_quadrature(rf_ccdf, weight, policy.quad_tolerance);
    out.r2.value = 0.5 * rate_quadrature(fso_ccdf, weight, policy.quad_tolerance);
    out.r2.flags = derived_flags(d);
    out.total = out.r1;
    add(out.total, out.r2);
    return out;
}

}  // namespace rfso::metrics
