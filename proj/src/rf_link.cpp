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
#include <numeric>

#include "rfso/channels.hpp"
#include "rfso/errors.hpp"

namespace rfso::channels {

void RfLinkParams::validate() const
{
    if (m_rf < 1)
        throw Error(ErrorKind::domain, "rf.m must be an integer >= 1");
    if (!(avg_snr > 0.0) || !std::isfinite(avg_snr))
        throw Error(ErrorKind::domain, "rf average SNR must be positive and finite");
    if (num_users < 1)
        throw Error(ErrorKind::domain, "rf.users must be >= 1");
}

std::vector<std::vector<double>> zeta_table(int K, int m)
{
    if (K < 1 || m < 1)
        throw Error(ErrorKind::domain, "zeta_table needs K >= 1 and m >= 1");
    std::vector<double> a(static_cast<std::size_t>(m));
    a[0] = 1.0;
    for (int l = 1; l < m; ++l)
        a[l] = a[l - 1] / l;

    // Power-series exponentiation: for P(x) = sum a_l x^l with a_0 = 1,
    // c_k of P^p satisfies k c_k = sum_{l=1}^{k} ((p + 1) l - k) a_l c_{k-l}.
    std::vector<std::vector<double>> table(static_cast<std::size_t>(K));
    for (int n1 = 0; n1 < K; ++n1) {
        const int top = n1 * (m - 1);
        auto& c = table[n1];
        c.assign(static_cast<std::size_t>(top) + 1, 0.0);
        c[0] = 1.0;
        for (int k = 1; k <= top; ++k) {
            double acc = 0.0;
            for (int l = 1; l <= std::min(k, m - 1); ++l)
                acc += ((n1 + 1.0) * l - k) * a[l] * c[k - l];
            c[k] = acc / k;
        }
    }
    return table;
}

std::vector<RfTerm> rf_terms(const RfLinkParams& p)
{
    p.validate();
    const int K = p.num_users;
    const int m = p.m_rf;
    const auto zeta = zeta_table(K, m);
    std::vector<RfTerm> terms;
    for (int n1 = 0; n1 < K; ++n1) {
        // log C(K-1, n1)
        const double log_binom =
            std::lgamma(K + 0.0) - std::lgamma(n1 + 1.0) - std::lgamma(K - n1 + 0.0);
        for (int n2 = 0; n2 <= n1 * (m - 1); ++n2) {
            const double z = zeta[n1][n2];
            if (z == 0.0)
                continue;
            const int order = m + n2;
            const double log_mag = std::log(static_cast<double>(K)) + std::lgamma(order + 0.0) -
                                   std::lgamma(m + 0.0) + log_binom + std::log(z) -
                                   order * std::log(n1 + 1.0);
            RfTerm t;
            t.n1 = n1;
            t.n2 = n2;
            t.order = order;
            t.a1 = ((n1 % 2 == 0) ? 1.0 : -1.0) * std::exp(log_mag);
            t.b0 = p.beta() * (n1 + 1);
            terms.push_back(t);
        }
    }
    return terms;
}

namespace {

// e^{-x} sum_{l<order} x^l / l!, the Poisson upper tail Q(order, x).
double poisson_head(int order, double x) { return 1.0 - specfun::reg_lower_gamma(order, x); }

}  // namespace

double rf_cdf_best(double gamma, const RfLinkParams& p)
{
    if (!(gamma >= 0.0))
        throw Error(ErrorKind::domain, "rf_cdf_best needs gamma >= 0");
    if (gamma == 0.0)
        return 0.0;
    double acc = 0.0;
    for (const auto& t : rf_terms(p))
        acc += t.a1 * (1.0 - poisson_head(t.order, t.b0 * gamma));
    return std::clamp(acc, 0.0, 1.0);
}

double rf_pdf_best(double gamma, const RfLinkParams& p)
{
    p.validate();
    if (!(gamma > 0.0))
        return 0.0;
    const double b = p.beta();
    const double F = specfun::reg_lower_gamma(p.m_rf, b * gamma);
    const double log_f1 = p.m_rf * std::log(b) + (p.m_rf - 1) * std::log(gamma) - b * gamma -
                          std::lgamma(p.m_rf + 0.0);
    return p.num_users * std::pow(F, p.num_users - 1) * std::exp(log_f1);
}

double rf_sample_best(Rng& rng, const RfLinkParams& p)
{
    std::gamma_distribution<double> g(p.m_rf, p.avg_snr / p.m_rf);
    double best = 0.0;
    for (int k = 0; k < p.num_users; ++k)
        best = std::max(best, g(rng));
    return best;
}

void InterferenceParams::validate() const
{
    if (num_interferers < 1)
        throw Error(ErrorKind::domain, "interference.n must be >= 1");
    if (!(m1 >= 0.5))
        throw Error(ErrorKind::domain, "interference.m1 must be >= 0.5");
    if (!(omega_i1 > 0.0) || !std::isfinite(omega_i1))
        throw Error(ErrorKind::domain, "interference mean INR must be positive and finite");
}

double inr_pdf(double gamma, const InterferenceParams& q)
{
    if (!(gamma > 0.0))
        return 0.0;
    const double k = q.shape();
    const double th = q.rate();
    return std::exp(k * std::log(th) + (k - 1.0) * std::log(gamma) - th * gamma - std::lgamma(k));
}

double inr_cdf(double gamma, const InterferenceParams& q)
{
    if (!(gamma > 0.0))
        return 0.0;
    return specfun::reg_lower_gamma(q.shape(), q.rate() * gamma);
}

double inr_sample(Rng& rng, const InterferenceParams& q)
{
    std::gamma_distribution<double> g(q.m1, q.omega_i1 / q.m1);
    double sum = 0.0;
    for (int i = 0; i < q.num_interferers; ++i)
        sum += g(rng);
    return sum;
}

void SystemConfig::validate() const
{
    rf.validate();
    fso.validate();
    intf.validate();
    if (!(gamma_th > 0.0) || !std::isfinite(gamma_th))
        throw Error(ErrorKind::domain, "threshold must be positive and finite");
    if (max_denominator < 1)
        throw Error(ErrorKind::domain, "max_denominator must be >= 1");
}

}  // namespace rfso::channels
