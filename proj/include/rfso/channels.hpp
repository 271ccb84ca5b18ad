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

#include <random>
#include <string>
#include <vector>

#include "rfso/specfun.hpp"

namespace rfso::channels {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// RF hop: best of K i.i.d. Nakagami-m users
// ---------------------------------------------------------------------------

struct RfLinkParams {
    int m_rf = 1;
    /// Linear average SNR per user.
    double avg_snr = 1.0;
    int num_users = 1;

    double beta() const { return m_rf / avg_snr; }
    void validate() const;
};

/// zeta[n1][n2] = coefficient of x^n2 in (sum_{l<m} x^l / l!)^n1,
/// 0 <= n1 <= K-1, 0 <= n2 <= n1 (m-1).
std::vector<std::vector<double>> zeta_table(int K, int m);

/// One term of the best-user CDF expansion:
/// F(g) = sum a1 (1 - e^{-b0 g} sum_{l<order} (b0 g)^l / l!).
struct RfTerm {
    int n1 = 0;
    int n2 = 0;
    /// Number of Poisson terms, m_rf + n2.
    int order = 1;
    double a1 = 0.0;
    double b0 = 0.0;
};

std::vector<RfTerm> rf_terms(const RfLinkParams& p);

double rf_cdf_best(double gamma, const RfLinkParams& p);
double rf_pdf_best(double gamma, const RfLinkParams& p);
double rf_sample_best(Rng& rng, const RfLinkParams& p);

// ---------------------------------------------------------------------------
// FSO hop: double generalized gamma turbulence with pointing errors
// ---------------------------------------------------------------------------

struct FsoLinkParams {
    double alpha1 = 2.1;
    double alpha2 = 2.0;
    double beta1 = 4.0;
    double beta2 = 4.5;
    double omega1 = 1.0676;
    double omega2 = 1.06;
    /// Pointing-error parameter: equivalent beam waist over twice the jitter.
    double xi = 1.0;
    /// 1 = heterodyne, 2 = IM/DD.
    int r = 1;
    /// Linear average electrical SNR.
    double mu_r = 1.0;

    void validate() const;
};

/// xi for a Gaussian beam of waist w on a circular aperture of radius a with
/// radial jitter sigma_s (both ratios relative to a).
double pointing_xi(double w_over_a, double jitter_over_a);

/// Jitter used by the named pointing presets, in aperture radii.
inline constexpr double kPresetJitterOverA = 3.0;
/// xi for the "strong" (w/a = 5) and "weak" (w/a = 10) pointing-error presets.
double pointing_preset_xi(const std::string& name);

struct DggDerived {
    int lambda = 1;
    int sigma = 1;
    /// alpha2 * lambda.
    double y = 1.0;
    /// r (lambda + sigma + 1).
    int n = 1;
    /// E[I] / A0 under the rational approximation.
    double z = 1.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
    double log_d5 = 0.0;
    /// log of the PDF Meijer-G argument at gamma = mu_r.
    double log_pdf_arg = 0.0;
    std::vector<double> tau1;
    std::vector<double> tau2;
    std::vector<double> tau3;
    std::vector<double> tau4;
    /// |lambda/sigma - alpha1/alpha2|.
    double ratio_error = 0.0;
    std::vector<std::string> warnings;
};

inline constexpr int kDefaultMaxDenominator = 25;

/// Best rational approximation num/den of x with den <= max_den.
std::pair<long, long> best_rational(double x, long max_den);

DggDerived dgg_derive(const FsoLinkParams& p, int max_denominator = kDefaultMaxDenominator);

/// Meijer-G whose value at D5 (gamma/mu_r)^y, times d4, is the CDF.
specfun::MeijerGSpec fso_cdf_spec(const DggDerived& d);

double fso_pdf(double gamma, const DggDerived& d, const FsoLinkParams& p,
               const specfun::ContourPolicy& policy = {});
double fso_cdf(double gamma, const DggDerived& d, const FsoLinkParams& p,
               const specfun::ContourPolicy& policy = {});
/// 1 - CDF, evaluated on its own contour so the upper tail keeps full
/// relative accuracy.
double fso_ccdf(double gamma, const DggDerived& d, const FsoLinkParams& p,
                const specfun::ContourPolicy& policy = {});

/// E[I] / A0 with the exact alpha1 (no rational approximation).
double fso_mean_irradiance(const FsoLinkParams& p);
double fso_sample(Rng& rng, const FsoLinkParams& p);

// ---------------------------------------------------------------------------
// Aggregate co-channel interference
// ---------------------------------------------------------------------------

struct InterferenceParams {
    int num_interferers = 1;
    double m1 = 1.0;
    /// Mean INR per interferer.
    double omega_i1 = 1.0;

    double shape() const { return m1 * num_interferers; }
    double rate() const { return m1 / omega_i1; }
    void validate() const;
};

double inr_pdf(double gamma, const InterferenceParams& q);
double inr_cdf(double gamma, const InterferenceParams& q);
double inr_sample(Rng& rng, const InterferenceParams& q);

struct SystemConfig {
    RfLinkParams rf;
    FsoLinkParams fso;
    InterferenceParams intf;
    double gamma_th = 1.0;
    int max_denominator = kDefaultMaxDenominator;

    void validate() const;
};

}  // namespace rfso::channels
