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

// Node-sum kernels behind the Mellin-Barnes contour engine. The serial
// versions are the reference; the OpenMP versions must agree bit-for-bit,
// which holds because each row is summed by exactly one thread and rows are
// combined afterwards in index order.

#include <complex>
#include <vector>

#include "rfso/specfun.hpp"

namespace rfso::specfun::kernels {

/// Log of the integrand Phi(s,t) x1^-s x2^-t on the contour
/// s = cs + i tau_s, t = ct + i tau_t.
class ContourIntegrand {
public:
    ContourIntegrand(std::vector<GammaFactor> s_factors, std::vector<GammaFactor> t_factors,
                     std::vector<GammaFactor> outer_factors, double log_x1, double log_x2,
                     double cs, double ct, bool bivariate);

    cplx log_s_part(double tau_s) const;
    cplx log_t_part(double tau_t) const;
    cplx log_outer(double tau_s, double tau_t) const;
    cplx log_value(double tau_s, double tau_t) const
    {
        return log_s_part(tau_s) + log_t_part(tau_t) + log_outer(tau_s, tau_t);
    }

    bool has_t() const { return has_t_; }
    bool has_outer() const { return !outer_.empty(); }

private:
    std::vector<GammaFactor> s_;
    std::vector<GammaFactor> t_;
    std::vector<GammaFactor> outer_;
    double log_x1_;
    double log_x2_;
    double cs_;
    double ct_;
    bool has_t_;
};

/// Half-plane trapezoid grid in sinh-mapped coordinates:
/// tau_s = w_s sinh(i h_s) for i in [0, n_s], tau_t = w_t sinh(j h_t) for
/// j in [-n_t, n_t] (n_t = 0 for univariate integrands). Every pole lies on
/// the imaginary tau axis, so with w set to the pole distance the mapped
/// integrand is analytic in a strip of half-width pi/2 whatever w is.
struct Grid {
    double h_s = 1.0;
    int n_s = 0;
    double w_s = 1.0;
    double h_t = 1.0;
    int n_t = 0;
    double w_t = 1.0;
};

struct GridSum {
    /// Sum over the full plane of exp(log F - shift) times the Jacobian,
    /// using F(-tau) = conj F(tau). Not multiplied by the step sizes.
    double sum = 0.0;
    /// Same sum of |F| (roundoff floor).
    double abs_sum = 0.0;
    long nodes = 0;
};

GridSum sum_grid_serial(const ContourIntegrand& f, const Grid& grid, double shift);
GridSum sum_grid_parallel(const ContourIntegrand& f, const Grid& grid, double shift);

}  // namespace rfso::specfun::kernels
