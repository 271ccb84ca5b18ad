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

// Residue sums for the small-argument behaviour of univariate integrands.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

namespace rfso::specfun {

namespace {

bool near_nonpositive_integer(double u)
{
    return u <= 0.5 && std::abs(u - std::round(u)) < 1e-12;
}

struct Pole {
    double s;
    std::size_t factor;
    int k;
};

bool same(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

}  // namespace

PoleSum leading_pole_sum(std::span<const GammaFactor> factors_in, double log_x, PoleWindow window,
                         double eps)
{
    std::vector<GammaFactor> factors(factors_in.begin(), factors_in.end());
    std::vector<std::size_t> left;
    double right_edge = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const auto& f = factors[j];
        if (f.coef_t != 0.0)
            throw Error(ErrorKind::domain, "leading_pole_sum takes univariate factors");
        if (f.position != FactorPosition::numerator || f.coef_s == 0.0)
            continue;
        if (f.coef_s > 0.0)
            left.push_back(j);
        else
            right_edge = std::min(right_edge, -f.offset / f.coef_s);
    }
    if (left.empty())
        throw Error(ErrorKind::domain, "integrand has no left pole family");

    auto first_pole = [&](std::size_t j) { return -factors[j].offset / factors[j].coef_s; };
    auto collect = [&]() {
        double lo = first_pole(left[0]);
        double hi = lo;
        for (auto j : left) {
            lo = std::min(lo, first_pole(j));
            hi = std::max(hi, first_pole(j));
        }
        const double bound = window == PoleWindow::dominant ? hi : lo;
        std::vector<Pole> poles;
        for (auto j : left) {
            const auto& f = factors[j];
            for (int k = 0;; ++k) {
                const double s = -(f.offset + k) / f.coef_s;
                if (s < bound && !same(s, bound))
                    break;
                poles.push_back({s, j, k});
                if (k > 10000)
                    throw Error(ErrorKind::domain, "pole window too wide");
            }
        }
        return poles;
    };

    std::vector<Pole> poles = collect();
    for (const auto& p : poles)
        if (p.s >= right_edge || same(p.s, right_edge))
            throw Error(ErrorKind::contour_failure, "left and right pole families overlap");

    // A pole collides if any other left factor is singular at the same point,
    // whether or not that factor's pole is inside the window.
    auto collides = [&]() {
        for (const auto& p : poles)
            for (auto j : left) {
                if (j == p.factor)
                    continue;
                const double u = factors[j].offset + factors[j].coef_s * p.s;
                if (u <= 0.5 && std::abs(u - std::round(u)) < 1e-9)
                    return true;
            }
        return false;
    };
    PoleSum out;
    if (collides()) {
        for (std::size_t i = 0; i < left.size(); ++i)
            factors[left[i]].offset += static_cast<double>(i + 1) * eps * factors[left[i]].coef_s;
        out.perturbed = true;
        poles = collect();
        if (collides())
            throw Error(ErrorKind::degenerate_pole, "pole perturbation did not separate the poles");
    }

    double total = 0.0;
    double dominant = -std::numeric_limits<double>::infinity();
    for (const auto& p : poles) {
        const auto& fp = factors[p.factor];
        // Residue of Gamma(o + a s) at s = -(o + k)/a is (-1)^k / (k! a).
        double log_mag = -std::lgamma(p.k + 1.0) - std::log(fp.coef_s) - p.s * log_x;
        int sign = (p.k % 2 == 0) ? 1 : -1;
        bool zero = false;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (j == p.factor)
                continue;
            const auto& f = factors[j];
            const double u = f.offset + f.coef_s * p.s;
            if (near_nonpositive_integer(u)) {
                if (f.position == FactorPosition::denominator) {
                    zero = true;
                    break;
                }
                throw Error(ErrorKind::degenerate_pole, "higher-order pole in the residue window");
            }
            int sg = 1;
            const double lg = log_abs_gamma(u, &sg);
            log_mag += f.position == FactorPosition::numerator ? lg : -lg;
            sign *= sg;
        }
        ++out.poles;
        dominant = std::max(dominant, p.s);
        if (!zero)
            total += sign * std::exp(log_mag);
    }
    out.value = total;
    out.dominant_pole = dominant;
    return out;
}

}  // namespace rfso::specfun
