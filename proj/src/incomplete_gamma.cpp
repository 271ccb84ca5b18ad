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
#include <limits>
#include <string>

#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

namespace rfso::specfun {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// x < a + 1
double lower_series(double a, double x, double log_prefactor)
{
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < kMaxIterations; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            return sum * std::exp(log_prefactor);
    }
    throw Error(ErrorKind::non_convergence, "incomplete gamma series");
}

// Upper Q(a,x) by modified Lentz, x >= a + 1
double upper_continued_fraction(double a, double x, double log_prefactor)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps)
            return std::exp(log_prefactor) * h;
    }
    throw Error(ErrorKind::non_convergence, "incomplete gamma continued fraction");
}

}  // namespace

double reg_lower_gamma(double a, double x)
{
    if (!(a > 0.0) || !(x >= 0.0))
        throw Error(ErrorKind::domain, "reg_lower_gamma requires a > 0, x >= 0 (a=" +
                                           std::to_string(a) + ", x=" + std::to_string(x) + ")");
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0)
        return std::min(1.0, lower_series(a, x, log_prefactor));
    return std::max(0.0, 1.0 - upper_continued_fraction(a, x, log_prefactor));
}

}  // namespace rfso::specfun
