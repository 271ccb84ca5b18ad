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

#include "rfso/contour_kernels.hpp"

#include <cmath>

namespace rfso::specfun::kernels {

namespace {

inline cplx accumulate(const std::vector<GammaFactor>& factors, cplx s, cplx t)
{
    cplx acc = 0.0;
    for (const auto& f : factors) {
        const cplx lg = log_gamma(f.offset + f.coef_s * s + f.coef_t * t);
        acc += (f.position == FactorPosition::numerator) ? lg : -lg;
    }
    return acc;
}

struct Parts {
    std::vector<cplx> s;
    std::vector<cplx> t;
};

inline double tau_s(const Grid& g, int i) { return g.w_s * std::sinh(i * g.h_s); }
inline double tau_t(const Grid& g, int j) { return g.w_t * std::sinh(j * g.h_t); }

// Log parts include the log Jacobian w cosh(u) of the sinh map.
Parts tabulate(const ContourIntegrand& f, const Grid& grid, bool parallel)
{
    Parts parts;
    parts.s.resize(static_cast<std::size_t>(grid.n_s) + 1);
    parts.t.resize(2 * static_cast<std::size_t>(grid.n_t) + 1);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i <= grid.n_s; ++i)
        parts.s[i] = f.log_s_part(tau_s(grid, i)) + std::log(grid.w_s * std::cosh(i * grid.h_s));
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = -grid.n_t; j <= grid.n_t; ++j)
        parts.t[j + grid.n_t] =
            f.has_t() ? f.log_t_part(tau_t(grid, j)) + std::log(grid.w_t * std::cosh(j * grid.h_t))
                      : cplx{};
    return parts;
}

struct Row {
    cplx sum;
    double abs_sum;
};

inline Row row_sum(const ContourIntegrand& f, const Grid& grid, const Parts& parts, int i,
                   double shift)
{
    Row row{0.0, 0.0};
    const double ts = tau_s(grid, i);
    for (int j = -grid.n_t; j <= grid.n_t; ++j) {
        cplx lv = parts.s[i] + parts.t[j + grid.n_t] - shift;
        if (f.has_outer())
            lv += f.log_outer(ts, tau_t(grid, j));
        const cplx v = std::exp(lv);
        row.sum += v;
        row.abs_sum += std::exp(lv.real());
    }
    return row;
}

GridSum combine(const std::vector<Row>& rows, long nodes)
{
    GridSum out;
    out.nodes = nodes;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double w = (i == 0) ? 1.0 : 2.0;
        out.sum += w * rows[i].sum.real();
        out.abs_sum += w * rows[i].abs_sum;
    }
    return out;
}

long node_count(const Grid& grid)
{
    return static_cast<long>(grid.n_s + 1) * (2L * grid.n_t + 1);
}

}  // namespace

ContourIntegrand::ContourIntegrand(std::vector<GammaFactor> s_factors,
                                   std::vector<GammaFactor> t_factors,
                                   std::vector<GammaFactor> outer_factors, double log_x1,
                                   double log_x2, double cs, double ct, bool bivariate)
    : s_(std::move(s_factors)),
      t_(std::move(t_factors)),
      outer_(std::move(outer_factors)),
      log_x1_(log_x1),
      log_x2_(log_x2),
      cs_(cs),
      ct_(ct),
      has_t_(bivariate)
{
}

cplx ContourIntegrand::log_s_part(double tau_s) const
{
    const cplx s{cs_, tau_s};
    return accumulate(s_, s, 0.0) - s * log_x1_;
}

cplx ContourIntegrand::log_t_part(double tau_t) const
{
    const cplx t{ct_, tau_t};
    return accumulate(t_, 0.0, t) - t * log_x2_;
}

cplx ContourIntegrand::log_outer(double tau_s, double tau_t) const
{
    return accumulate(outer_, cplx{cs_, tau_s}, cplx{ct_, tau_t});
}

GridSum sum_grid_serial(const ContourIntegrand& f, const Grid& grid, double shift)
{
    const Parts parts = tabulate(f, grid, false);
    std::vector<Row> rows(static_cast<std::size_t>(grid.n_s) + 1);
    for (int i = 0; i <= grid.n_s; ++i)
        rows[i] = row_sum(f, grid, parts, i, shift);
    return combine(rows, node_count(grid));
}

GridSum sum_grid_parallel(const ContourIntegrand& f, const Grid& grid, double shift)
{
    const Parts parts = tabulate(f, grid, true);
    std::vector<Row> rows(static_cast<std::size_t>(grid.n_s) + 1);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i <= grid.n_s; ++i)
        rows[i] = row_sum(f, grid, parts, i, shift);
    return combine(rows, node_count(grid));
}

}  // namespace rfso::specfun::kernels
