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

#include <complex>
#include <span>
#include <vector>

namespace rfso::specfun {

using cplx = std::complex<double>;

/// Principal branch of log Gamma(z), analytic off the non-positive real axis.
/// Throws Error{pole_of_gamma} within 1e-12 of a non-positive integer.
cplx log_gamma(cplx z);

/// log|Gamma(x)| and sign(Gamma(x)) for real x that is not a pole.
double log_abs_gamma(double x, int* sign);

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

// ---------------------------------------------------------------------------
// Mellin-Barnes integrands
// ---------------------------------------------------------------------------

/// G^{m,n}_{p,q}(x | a; b) with the usual ordering: a[0..n) and b[0..m) are
/// the numerator parameters.
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    int p = 0;
    int q = 0;
    std::vector<double> a;
    std::vector<double> b;

    void validate() const;
};

enum class FactorPosition { numerator, denominator };

/// Gamma(offset + coef_s*s + coef_t*t), raised to +1 or -1.
struct GammaFactor {
    double offset = 0.0;
    double coef_s = 0.0;
    double coef_t = 0.0;
    FactorPosition position = FactorPosition::numerator;
};

inline GammaFactor num(double offset, double coef_s, double coef_t = 0.0)
{
    return {offset, coef_s, coef_t, FactorPosition::numerator};
}

inline GammaFactor den(double offset, double coef_s, double coef_t = 0.0)
{
    return {offset, coef_s, coef_t, FactorPosition::denominator};
}

/// Integrand of (2 pi i)^-2 \iint Phi(s,t) x1^-s x2^-t ds dt. Factors in
/// s_factors must have coef_t == 0, t_factors coef_s == 0; outer_factors may
/// couple both variables.
struct BivariateFoxHSpec {
    std::vector<GammaFactor> outer_factors;
    std::vector<GammaFactor> s_factors;
    std::vector<GammaFactor> t_factors;
};

struct ContourPolicy {
    /// Pole perturbation used when the two pole families touch.
    double abscissa_shift = 1e-6;
    /// Relative truncation/discretisation tolerance.
    double tolerance = 1e-11;
    /// Largest |Im s| (and |Im t|) the trapezoid grid may reach.
    double max_imaginary_extent = 400.0;
    /// Maximum nodes per integration axis.
    int node_budget = 1 << 16;
    /// Run the node sums through the OpenMP kernel.
    bool parallel = true;
    /// When the grid cannot be closed and the integrand never exceeds
    /// exp(log_negligible) over the allowed band, report 0 instead of failing.
    double log_negligible = -800.0;
};

struct ContourEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    double abscissa_s = 0.0;
    double abscissa_t = 0.0;
    long nodes = 0;
    /// Pole parameters were shifted by multiples of abscissa_shift.
    bool perturbed = false;
    /// The value was replaced by 0 under ContourPolicy::log_negligible.
    bool negligible = false;
};

/// Mellin-Barnes gamma factors of a Meijer-G function (coef_s = 1).
std::vector<GammaFactor> mellin_factors(const MeijerGSpec& spec);

ContourEstimate meijer_g(const MeijerGSpec& spec, double x, const ContourPolicy& policy = {});
ContourEstimate meijer_g_log(const MeijerGSpec& spec, double log_x,
                             const ContourPolicy& policy = {});

/// Univariate Fox-H style integral (2 pi i)^-1 \int Phi(s) e^{-s log_x} ds.
ContourEstimate fox_h(std::span<const GammaFactor> factors, double log_x,
                      const ContourPolicy& policy = {});

ContourEstimate fox_h_bivariate(const BivariateFoxHSpec& spec, double x1, double x2,
                                const ContourPolicy& policy = {});
ContourEstimate fox_h_bivariate_log(const BivariateFoxHSpec& spec, double log_x1,
                                    double log_x2, const ContourPolicy& policy = {});

enum class PoleWindow {
    /// Only the poles coinciding with the rightmost left-family pole.
    dominant,
    /// Every left-family pole at or right of the leftmost "first" pole.
    first_poles,
};

struct PoleSum {
    double value = 0.0;
    double dominant_pole = 0.0;
    int poles = 0;
    bool perturbed = false;
};

/// Small-argument expansion of a univariate integrand: sum of residues at the
/// left-family poles selected by `window`. Coincident poles are split by
/// distinct multiples of eps so every residue is simple.
PoleSum leading_pole_sum(std::span<const GammaFactor> factors, double log_x,
                         PoleWindow window = PoleWindow::first_poles, double eps = 1e-6);

/// psi^(n)(x) for real x off the poles; n = 0 is the digamma function.
double polygamma(int n, double x);

/// Residue of Phi(s) x^-s at s0, exact for poles of any order. The value is
/// sign * exp(log_abs); order <= 0 means s0 is not a pole (sign = 0).
struct ResidueTerm {
    double log_abs = 0.0;
    int sign = 0;
    int order = 0;
};
ResidueTerm residue(std::span<const GammaFactor> factors, double log_x, double s0);

/// Gauss multiplication ladder Delta(k : x) = [x/k, (x+1)/k, ..., (x+k-1)/k].
std::vector<double> ladder(int k, double x);

}  // namespace rfso::specfun
