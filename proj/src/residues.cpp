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

// Polygamma functions and exact residues of gamma-product integrands,
// including poles of any order.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

namespace rfso::specfun {

namespace {

// B_2k for k = 1..10.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,         -1.0 / 30.0,     1.0 / 42.0,         -1.0 / 30.0,   5.0 / 66.0,
    -691.0 / 2730.0,   7.0 / 6.0,       -3617.0 / 510.0,    43867.0 / 798.0, -174611.0 / 330.0,
};

bool on_pole(double u)
{
    return u <= 0.5 && std::abs(u - std::round(u)) <= 1e-9 * std::max(1.0, std::abs(u));
}

}  // namespace

double polygamma(int n, double x)
{
    if (n < 0)
        throw Error(ErrorKind::domain, "polygamma order must be >= 0");
    if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-12)
        throw Error(ErrorKind::pole_of_gamma, "polygamma at non-positive integer");
    const double fact_n = std::tgamma(n + 1.0);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    // psi^(n)(x) = psi^(n)(x + 1) - (-1)^n n! / x^(n+1)
    double acc = 0.0;
    const double target = 20.0 + n;
    while (x < target) {
        acc -= sgn * fact_n / std::pow(x, n + 1);
        x += 1.0;
    }
    double asym;
    if (n == 0) {
        asym = std::log(x) - 0.5 / x;
        double xp = x * x;
        for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
            asym -= kBernoulli[k - 1] / (2.0 * k * xp);
            xp *= x * x;
        }
    } else {
        // (-1)^(n+1) [ (n-1)!/x^n + n!/(2 x^(n+1)) + sum B_2k (2k+n-1)!/((2k)! x^(2k+n)) ]
        double s = std::tgamma(n + 0.0) / std::pow(x, n) + fact_n / (2.0 * std::pow(x, n + 1));
        for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
            const double two_k = 2.0 * k;
            s += kBernoulli[k - 1] * std::exp(std::lgamma(two_k + n) - std::lgamma(two_k + 1.0)) /
                 std::pow(x, two_k + n);
        }
        asym = -sgn * s;
    }
    return acc + asym;
}

ResidueTerm residue(std::span<const GammaFactor> factors, double log_x, double s0)
{
    ResidueTerm out;
    int order = 0;
    for (const auto& f : factors) {
        if (f.coef_t != 0.0)
            throw Error(ErrorKind::domain, "residue takes univariate factors");
        const double u0 = f.offset + f.coef_s * s0;
        if (on_pole(u0)) {
            if (f.coef_s == 0.0)
                throw Error(ErrorKind::pole_of_gamma, "constant gamma factor at a pole");
            order += f.position == FactorPosition::numerator ? 1 : -1;
        }
    }
    out.order = order;
    if (order <= 0)
        return out;

    const int N = order - 1;
    std::vector<double> c(static_cast<std::size_t>(N) + 1, 0.0);
    double c0 = -s0 * log_x;
    int sign = 1;
    if (N >= 1)
        c[1] -= log_x;
    std::vector<double> psi1(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 1; k <= N; ++k)
        psi1[k] = polygamma(k - 1, 1.0);

    for (const auto& f : factors) {
        const double pw = f.position == FactorPosition::numerator ? 1.0 : -1.0;
        const double a = f.coef_s;
        const double u0 = f.offset + a * s0;
        if (on_pole(u0)) {
            // Gamma(-n + a e) = Gamma(1 + a e) / (a e) / prod_{j<n} ((j - n) + a e)
            const int n = static_cast<int>(-std::round(u0));
            c0 -= pw * std::log(std::abs(a));
            if (a < 0.0)
                sign = -sign;
            if (n % 2 == 1)
                sign = -sign;
            double ak = 1.0;
            for (int k = 1; k <= N; ++k) {
                ak *= a;
                c[k] += pw * psi1[k] * ak / std::tgamma(k + 1.0);
            }
            for (int j = 0; j < n; ++j) {
                const double d = j - n;
                c0 -= pw * std::log(std::abs(d));
                double r = 1.0;
                for (int k = 1; k <= N; ++k) {
                    r *= a / d;
                    // -log(1 + r e) = sum_k (-1)^k r^k e^k / k
                    c[k] += pw * ((k % 2 == 0) ? 1.0 : -1.0) * r / k;
                }
            }
        } else if (a == 0.0) {
            int sg = 1;
            c0 += pw * log_abs_gamma(u0, &sg);
            sign *= sg;
        } else {
            int sg = 1;
            c0 += pw * log_abs_gamma(u0, &sg);
            sign *= sg;
            double ak = 1.0;
            for (int k = 1; k <= N; ++k) {
                ak *= a;
                c[k] += pw * polygamma(k - 1, u0) * ak / std::tgamma(k + 1.0);
            }
        }
    }
    // Coefficient of e^N in exp(sum c_k e^k).
    std::vector<double> b(static_cast<std::size_t>(N) + 1, 0.0);
    b[0] = 1.0;
    for (int m = 1; m <= N; ++m) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j)
            acc += j * c[j] * b[m - j];
        b[m] = acc / m;
    }
    if (b[N] == 0.0)
        return out;
    out.sign = sign * (b[N] > 0.0 ? 1 : -1);
    out.log_abs = c0 + std::log(std::abs(b[N]));
    return out;
}

}  // namespace rfso::specfun
