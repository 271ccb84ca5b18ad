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

// Helpers shared by the unit tests and the acceptance binary.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace rfso::testing {

/// Rigorous upper bound on the Kolmogorov-Smirnov distance between the
/// empirical CDF of `sorted` and a continuous CDF, from `cells` evaluations
/// of the CDF at empirical quantiles. Exceeds the exact distance by at most
/// the largest CDF increment across one cell.
inline double ks_upper_bound(const std::vector<double>& sorted,
                             const std::function<double(double)>& cdf, int cells)
{
    const std::size_t n = sorted.size();
    std::vector<double> knots;
    for (int i = 1; i < cells; ++i)
        knots.push_back(sorted[static_cast<std::size_t>(static_cast<double>(i) / cells * (n - 1))]);
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double bound = 0.0;
    double f_prev = 0.0;
    double fn_prev = 0.0;  // empirical CDF at the previous knot
    for (std::size_t i = 0; i <= knots.size(); ++i) {
        const bool last = i == knots.size();
        const double f = last ? 1.0 : cdf(knots[i]);
        // Empirical mass strictly below and at the knot.
        const double below =
            last ? 1.0
                 : static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), knots[i]) - sorted.begin()) / n;
        const double at =
            last ? 1.0
                 : static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), knots[i]) - sorted.begin()) / n;
        // On (prev, knot): F in [f_prev, f], Fn in [fn_prev, below].
        bound = std::max({bound, f - fn_prev, below - f_prev, std::abs(at - f)});
        f_prev = f;
        fn_prev = at;
    }
    return bound;
}

inline std::vector<double> logspace(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(std::pow(10.0, lo + (hi - lo) * i / (n - 1)));
    return out;
}

}  // namespace rfso::testing
