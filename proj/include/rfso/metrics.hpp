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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rfso/channels.hpp"
#include "rfso/specfun.hpp"

namespace rfso::metrics {

using channels::SystemConfig;

/// Bit flags attached to a metric value.
enum Flag : unsigned {
    flag_none = 0,
    /// Result sat in [-1e-6, 0) or (1, 1 + 1e-6] and was clamped.
    flag_clamped = 1u << 0,
    /// Contour poles were split by the abscissa shift.
    flag_perturbed = 1u << 1,
    /// Some contour term fell below the double range and was reported as 0.
    flag_negligible = 1u << 2,
    /// The dominant pole is shared by several gamma factors.
    flag_degenerate_pole = 1u << 3,
    /// lambda/sigma misses alpha1/alpha2 by more than 1e-3.
    flag_rational = 1u << 4,
};

/// "clamped|perturbed" style rendering; empty for flag_none.
std::string flag_string(unsigned flags);

struct Value {
    double value = 0.0;
    /// Accumulated contour or quadrature error estimate.
    double error = 0.0;
    unsigned flags = flag_none;
};

struct MetricsPolicy {
    specfun::ContourPolicy contour;
    /// Relative tolerance of the Boost quadratures.
    double quad_tolerance = 1e-10;
    /// Scales every average SNR in the rate closed forms. 1 is the only
    /// value consistent with the quadrature; other values exist to exercise
    /// the validation report.
    double delta = 1.0;
};

// ---------------------------------------------------------------------------
// Outage probability
// ---------------------------------------------------------------------------

/// One (n1, n2, l) contribution to the joint RF/FSO part of the outage.
struct OutageTerm {
    int n1 = 0;
    int n2 = 0;
    int l = 0;
    /// a1 (b0 g_th / theta)^l / l! * d4 / Gamma(k).
    double weight = 0.0;
    /// Outer coupling offset l + k.
    double offset = 0.0;
    /// log of b0 g_th / theta.
    double log_b1 = 0.0;
};

struct OutageCoefficients {
    channels::DggDerived fso;
    std::vector<channels::RfTerm> rf;
    /// Aggregate INR shape m1 N and rate m1 / omega.
    double k = 1.0;
    double theta = 1.0;
    /// log of d5 (g_th omega / (m1 mu_r))^y.
    double log_b2 = 0.0;
    /// Smallest tau4 entry.
    double p_n = 0.0;
    /// Number of tau4 entries within 1e-9 of p_n.
    int p_n_multiplicity = 1;
    std::vector<OutageTerm> terms;
};

OutageCoefficients outage_coefficients(const SystemConfig& cfg);

/// s, t and outer factors of one joint term (x1 = b2, x2 = b1).
specfun::BivariateFoxHSpec outage_term_spec(const OutageCoefficients& c, const OutageTerm& t);

/// CDF of gamma_RF / gamma_I in closed form.
double effective_rf_cdf(double gamma, const SystemConfig& cfg);
double effective_rf_pdf(double gamma, const SystemConfig& cfg);
/// CDF of gamma_FSO / gamma_I as a single Fox-H integral.
Value effective_fso_cdf(double gamma, const SystemConfig& cfg, const MetricsPolicy& policy = {});

Value outage_exact(const SystemConfig& cfg, const MetricsPolicy& policy = {});
Value outage_asymptotic(const SystemConfig& cfg, const MetricsPolicy& policy = {});

struct OutageQuadratureOptions {
    /// Replace the FSO survival function by 1 (RF-only sanity mode).
    bool rf_only = false;
};
Value outage_quadrature(const SystemConfig& cfg, const MetricsPolicy& policy = {},
                        const OutageQuadratureOptions& options = {});

// ---------------------------------------------------------------------------
// Achievable sum rate
// ---------------------------------------------------------------------------

struct AsrRfTerm {
    int n1 = 0;
    int n2 = 0;
    int l = 0;
    /// a1 / (l! Gamma(k)).
    double weight = 0.0;
};

struct AsrCoefficients {
    double delta = 1.0;
    double k = 1.0;
    double theta = 1.0;
    /// Per-user-term scale c = delta theta / b0, indexed like AsrRfTerm::n1.
    std::vector<double> c;
    std::vector<AsrRfTerm> rf;
    channels::DggDerived fso;
    /// Univariate integrand of the FSO rate and its argument.
    std::vector<specfun::GammaFactor> fso_factors;
    double fso_log_x = 0.0;
    /// d4 / (2 ln 2 Gamma(k)).
    double fso_prefactor = 0.0;
};

AsrCoefficients asr_coefficients(const SystemConfig& cfg, double delta = 1.0);

/// Meijer-G of one RF rate term: G^{2,2}_{2,2}(c | 0, -l; 0, k - 1).
specfun::MeijerGSpec asr_rf_spec(int l, double k);

struct AsrValue {
    Value total;
    Value r1;
    Value r2;
};

AsrValue asr_exact(const SystemConfig& cfg, const MetricsPolicy& policy = {});
AsrValue asr_asymptotic(const SystemConfig& cfg, const MetricsPolicy& policy = {});
AsrValue asr_quadrature(const SystemConfig& cfg, const MetricsPolicy& policy = {});

/// E[1 / (Y + w)] for Y ~ Gamma(shape k, rate theta).
double mean_inverse_shift(double w, double k, double theta);

/// (1 / ln 2) \int_0^inf ccdf(w) weight(w) dw, where weight(w) = E[1/(Y + w)]
/// for the interference Y. Equals E[log2(1 + X / Y)] for X with survival ccdf.
double rate_quadrature(const std::function<double(double)>& ccdf,
                       const std::function<double(double)>& weight, double tolerance);

}  // namespace rfso::metrics
