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

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "metrics_detail.hpp"
#include "rfso/errors.hpp"
#include "rfso/metrics.hpp"

namespace rfso::metrics {

using specfun::GammaFactor;
using specfun::num;

std::string flag_string(unsigned flags)
{
    static const std::pair<unsigned, const char*> names[] = {
        {flag_clamped, "clamped"},
        {flag_perturbed, "perturbed"},
        {flag_negligible, "negligible"},
        {flag_degenerate_pole, "degenerate_pole"},
        {flag_rational, "rational_approx"},
    };
    std::string out;
    for (const auto& [bit, name] : names) {
        if ((flags & bit) == 0)
            continue;
        if (!out.empty())
            out += '|';
        out += name;
    }
    return out;
}

namespace detail {

unsigned contour_flags(const specfun::ContourEstimate& e)
{
    return (e.perturbed ? flag_perturbed : 0u) | (e.negligible ? flag_negligible : 0u);
}

specfun::ContourPolicy scaled(const specfun::ContourPolicy& policy, double log_scale)
{
    specfun::ContourPolicy out = policy;
    out.log_negligible -= log_scale;
    return out;
}

double clamp_probability(double v, unsigned& flags)
{
    constexpr double slack = 1e-6;
    if (!std::isfinite(v) || v < -slack || v > 1.0 + slack)
        throw Error(ErrorKind::non_convergence,
                    "probability " + std::to_string(v) + " outside [0, 1] beyond round-off");
    if (v < 0.0 || v > 1.0) {
        flags |= flag_clamped;
        return std::clamp(v, 0.0, 1.0);
    }
    return v;
}

}  // namespace detail

namespace {

using detail::contour_flags;

void check(const SystemConfig& cfg)
{
    cfg.validate();
}

// CDF of the effective RF hop. Each user term P(order, b0 g Y) averages over
// the Gamma INR to a regularized incomplete beta; no 1 - x step is involved,
// so small outage levels keep their relative accuracy.
double effective_rf_cdf_terms(double gamma, const SystemConfig& cfg,
                              const std::vector<channels::RfTerm>& rf)
{
    const double k = cfg.intf.shape();
    const double th = cfg.intf.rate();
    double acc = 0.0;
    for (const auto& t : rf) {
        const double b = t.b0 * gamma;
        acc += t.a1 * boost::math::ibeta(static_cast<double>(t.order), k, b / (b + th));
    }
    return acc;
}

unsigned derived_flags(const channels::DggDerived& d)
{
    return d.warnings.empty() ? flag_none : flag_rational;
}

}  // namespace

OutageCoefficients outage_coefficients(const SystemConfig& cfg)
{
    check(cfg);
    OutageCoefficients c;
    c.fso = channels::dgg_derive(cfg.fso, cfg.max_denominator);
    c.rf = channels::rf_terms(cfg.rf);
    c.k = cfg.intf.shape();
    c.theta = cfg.intf.rate();
    c.log_b2 = c.fso.log_d5 + c.fso.y * std::log(cfg.gamma_th / (c.theta * cfg.fso.mu_r));
    c.p_n = *std::min_element(c.fso.tau4.begin(), c.fso.tau4.end());
    c.p_n_multiplicity = static_cast<int>(std::count_if(
        c.fso.tau4.begin(), c.fso.tau4.end(), [&](double v) { return std::abs(v - c.p_n) < 1e-9; }));

    const double log_pre = std::log(c.fso.d4) - std::lgamma(c.k);
    for (const auto& rt : c.rf) {
        const double log_b1 = std::log(rt.b0 * cfg.gamma_th / c.theta);
        for (int l = 0; l < rt.order; ++l) {
            OutageTerm t;
            t.n1 = rt.n1;
            t.n2 = rt.n2;
            t.l = l;
            t.offset = l + c.k;
            t.log_b1 = log_b1;
            const double lw = std::log(std::abs(rt.a1)) + l * log_b1 - std::lgamma(l + 1.0) + log_pre;
            t.weight = (rt.a1 < 0.0 ? -1.0 : 1.0) * std::exp(lw);
            c.terms.push_back(t);
        }
    }
    return c;
}

specfun::BivariateFoxHSpec outage_term_spec(const OutageCoefficients& c, const OutageTerm& t)
{
    specfun::BivariateFoxHSpec spec;
    spec.s_factors = specfun::mellin_factors(channels::fso_cdf_spec(c.fso));
    spec.t_factors = {num(0.0, 0.0, 1.0)};
    spec.outer_factors = {num(t.offset, -c.fso.y, -1.0)};
    return spec;
}

double effective_rf_cdf(double gamma, const SystemConfig& cfg)
{
    check(cfg);
    if (!(gamma >= 0.0))
        throw Error(ErrorKind::domain, "effective_rf_cdf needs gamma >= 0");
    if (gamma == 0.0)
        return 0.0;
    if (std::isinf(gamma))
        return 1.0;
    return std::clamp(effective_rf_cdf_terms(gamma, cfg, channels::rf_terms(cfg.rf)), 0.0, 1.0);
}

double effective_rf_pdf(double gamma, const SystemConfig& cfg)
{
    check(cfg);
    if (!(gamma > 0.0) || std::isinf(gamma))
        return 0.0;
    const double k = cfg.intf.shape();
    const double th = cfg.intf.rate();
    double acc = 0.0;
    for (const auto& t : channels::rf_terms(cfg.rf)) {
        const double lden = std::log(th + t.b0 * gamma);
        const double lb = std::log(t.b0);
        const double lg = std::log(gamma);
        for (int l = 0; l < t.order; ++l) {
            // d/dg of C theta^k b0^l g^l (theta + b0 g)^-(l+k), negated.
            const double lc = std::lgamma(l + k) - std::lgamma(l + 1.0) - std::lgamma(k) + k * std::log(th) +
                              l * lb;
            double v = std::exp(lc + std::log(l + k) + lb + l * lg - (l + k + 1.0) * lden);
            if (l > 0)
                v -= std::exp(lc + std::log(static_cast<double>(l)) + (l - 1.0) * lg - (l + k) * lden);
            acc += t.a1 * v;
        }
    }
    return std::max(0.0, acc);
}

Value effective_fso_cdf(double gamma, const SystemConfig& cfg, const MetricsPolicy& policy)
{
    check(cfg);
    if (!(gamma >= 0.0))
        throw Error(ErrorKind::domain, "effective_fso_cdf needs gamma >= 0");
    Value out;
    if (gamma == 0.0)
        return out;
    if (std::isinf(gamma)) {
        out.value = 1.0;
        return out;
    }
    const auto d = channels::dgg_derive(cfg.fso, cfg.max_denominator);
    const double k = cfg.intf.shape();
    const double th = cfg.intf.rate();
    auto f = specfun::mellin_factors(channels::fso_cdf_spec(d));
    f.push_back(num(k, -d.y));
    const double log_x = d.log_d5 + d.y * std::log(gamma / (th * cfg.fso.mu_r));
    const double log_pre = std::log(d.d4) - std::lgamma(k);
    const auto e = specfun::fox_h(f, log_x, detail::scaled(policy.contour, log_pre));
    out.flags = contour_flags(e) | derived_flags(d);
    out.value = detail::clamp_probability(std::exp(log_pre) * e.value, out.flags);
    out.error = std::exp(log_pre) * e.error_bound;
    return out;
}

Value outage_exact(const SystemConfig& cfg, const MetricsPolicy& policy)
{
    const auto c = outage_coefficients(cfg);
    Value out;
    out.flags = derived_flags(c.fso);
    double joint = 0.0;
    for (const auto& t : c.terms) {
        const auto spec = outage_term_spec(c, t);
        const double log_w = std::log(std::abs(t.weight));
        const auto e = specfun::fox_h_bivariate_log(spec, c.log_b2, t.log_b1,
                                                    detail::scaled(policy.contour, log_w));
        joint += t.weight * e.value;
        out.error += std::abs(t.weight) * e.error_bound;
        out.flags |= contour_flags(e);
    }
    const double rf = effective_rf_cdf_terms(cfg.gamma_th, cfg, c.rf);
    out.value = detail::clamp_probability(rf + joint, out.flags);
    return out;
}

Value outage_asymptotic(const SystemConfig& cfg, const MetricsPolicy& /*policy*/)
{
    const auto c = outage_coefficients(cfg);
    Value out;
    out.flags = derived_flags(c.fso);
    if (c.p_n_multiplicity > 1)
        out.flags |= flag_degenerate_pole;
    // The t-integral of each joint term is elementary; what remains is closed
    // to the left and truncated after the pole at -p_n.
    const auto base = specfun::mellin_factors(channels::fso_cdf_spec(c.fso));
    double joint = 0.0;
    for (const auto& t : c.terms) {
        std::vector<GammaFactor> f = base;
        f.push_back(num(t.offset, -c.fso.y));
        const double l1p = std::log1p(std::exp(t.log_b1));
        const auto r = specfun::residue(f, c.log_b2 - c.fso.y * l1p, -c.p_n);
        if (r.sign == 0)
            continue;
        joint += t.weight * r.sign * std::exp(r.log_abs - t.offset * l1p);
    }
    const double rf = effective_rf_cdf_terms(cfg.gamma_th, cfg, c.rf);
    out.value = rf + joint;
    return out;
}

Value outage_quadrature(const SystemConfig& cfg, const MetricsPolicy& policy,
                        const OutageQuadratureOptions& options)
{
    check(cfg);
    const auto d = channels::dgg_derive(cfg.fso, cfg.max_denominator);
    const double k = cfg.intf.shape();
    const double th = cfg.intf.rate();
    unsigned flags = derived_flags(d);

    // P_out = E_I[F_RF(I g) + (1 - F_RF(I g)) F_FSO(I g)], integrated over the
    // INR quantile u so the Gamma weight becomes uniform.
    auto integrand = [&](double u, double uc) {
        const double z = (u <= 0.5 ? boost::math::gamma_p_inv(k, u) : boost::math::gamma_q_inv(k, uc)) / th;
        const double g = z * cfg.gamma_th;
        const double f_rf = channels::rf_cdf_best(g, cfg.rf);
        if (options.rf_only)
            return f_rf;
        const double f_fso = channels::fso_cdf(g, d, cfg.fso, policy.contour);
        return f_rf + (1.0 - f_rf) * f_fso;
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    double v = 0.0;
    try {
        v = ts.integrate(integrand, 0.0, 1.0, policy.quad_tolerance, &err, &l1, &levels);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::quadrature, std::string("outage quadrature: ") + e.what());
    }
    Value out;
    out.flags = flags;
    out.value = detail::clamp_probability(v, out.flags);
    out.error = err * std::max(l1, std::abs(v));
    return out;
}

}  // namespace rfso::metrics
