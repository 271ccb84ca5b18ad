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

// Mellin-Barnes contour engine shared by the Meijer-G and Fox-H evaluators.
//
// The contour is a vertical line (a product of two lines for bivariate
// integrands) inside the region where every numerator gamma factor has a
// positive real argument. Within that region the abscissa is moved to the
// minimum of the real-axis integrand magnitude, which is a saddle point of the
// integrand along the vertical line, so the integrand is non-oscillatory near
// tau = 0 and cancellation is minimal. The integral is then a truncated
// trapezoid sum, refined by step halving.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "rfso/contour_kernels.hpp"
#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

namespace rfso::specfun {

namespace {

using kernels::ContourIntegrand;
using kernels::Grid;
using kernels::GridSum;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Problem {
    std::vector<GammaFactor> s;
    std::vector<GammaFactor> t;
    std::vector<GammaFactor> outer;
    double log_x1 = 0.0;
    double log_x2 = 0.0;
    bool bivariate = false;
};

bool is_numerator(const GammaFactor& f) { return f.position == FactorPosition::numerator; }

template <typename Fn>
void for_each_factor(const Problem& pb, Fn&& fn)
{
    for (const auto& f : pb.s)
        fn(f);
    for (const auto& f : pb.t)
        fn(f);
    for (const auto& f : pb.outer)
        fn(f);
}

// Real-axis log magnitude of the integrand. Denominator factors with small
// arguments are skipped because 1/Gamma has zeros there.
double real_objective(const Problem& pb, double cs, double ct)
{
    double g = -cs * pb.log_x1 - ct * pb.log_x2;
    bool feasible = true;
    for_each_factor(pb, [&](const GammaFactor& f) {
        const double u = f.offset + f.coef_s * cs + f.coef_t * ct;
        if (is_numerator(f)) {
            if (u <= 0.0)
                feasible = false;
            else
                g += std::lgamma(u);
        } else if (u > 0.5) {
            g -= std::lgamma(u);
        }
    });
    return feasible ? g : kInf;
}

template <typename Fn>
double golden_minimize(Fn&& fn, double lo, double hi)
{
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = fn(x1);
    double f2 = fn(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = fn(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = fn(x2);
        }
    }
    return 0.5 * (a + b);
}

// Minimise fn over the open interval (lo, hi), either end possibly infinite.
template <typename Fn>
double minimize_on_interval(Fn&& fn, double lo, double hi)
{
    const double pad_lo = std::isfinite(lo) ? 1e-12 * std::max(1.0, std::abs(lo)) : 0.0;
    const double pad_hi = std::isfinite(hi) ? 1e-12 * std::max(1.0, std::abs(hi)) : 0.0;
    double a = lo + pad_lo;
    double b = hi - pad_hi;
    if (!std::isfinite(a) || !std::isfinite(b)) {
        double x0;
        if (std::isfinite(a))
            x0 = a + 1.0;
        else if (std::isfinite(b))
            x0 = b - 1.0;
        else
            x0 = 0.0;
        const double dir = std::isfinite(b) ? -1.0 : 1.0;
        double step = 1.0;
        double f0 = fn(x0);
        while (step < 1e7) {
            const double x1 = x0 + dir * step;
            if (std::isfinite(lo) && x1 <= lo)
                break;
            if (std::isfinite(hi) && x1 >= hi)
                break;
            const double f1 = fn(x1);
            if (!(f1 < f0))
                break;
            x0 = x1;
            f0 = f1;
            step *= 2.0;
        }
        if (dir > 0) {
            if (!std::isfinite(a))
                a = x0 - step;
            b = x0 + step;
        } else {
            if (!std::isfinite(b))
                b = x0 + step;
            a = x0 - step;
        }
        if (std::isfinite(lo))
            a = std::max(a, lo + pad_lo);
        if (std::isfinite(hi))
            b = std::min(b, hi - pad_hi);
    }
    return golden_minimize(fn, a, b);
}

struct Interval {
    double lo = -kInf;
    double hi = kInf;
};

// Allowed growth of the real-axis log magnitude when the abscissa is moved
// off the saddle. Costs at most ~2 digits to cancellation and keeps the
// contour away from poles, where the trapezoid step would have to shrink.
constexpr double kSaddleSlack = 4.6;

// Move c_star toward the part of (lo, hi) at distance >= 1 from both ends
// (its midpoint when narrower), as far as the objective stays within slack.
template <typename Fn>
double relax_from_poles(Fn&& fn, double lo, double hi, double c_star, double slack = kSaddleSlack)
{
    double a = lo + 1.0;
    double b = hi - 1.0;
    if (!(a <= b))
        a = b = 0.5 * (lo + hi);
    const double target = std::clamp(c_star, a, b);
    if (target == c_star)
        return c_star;
    const double limit = fn(c_star) + slack;
    if (fn(target) <= limit)
        return target;
    double good = c_star;
    double bad = target;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (good + bad);
        (fn(mid) <= limit ? good : bad) = mid;
    }
    return good;
}

// Numerator constraints coef_s*c + offset > 0 along s with t held at ct.
Interval s_interval(const Problem& pb, double ct)
{
    Interval iv;
    for_each_factor(pb, [&](const GammaFactor& f) {
        if (!is_numerator(f) || f.coef_s == 0.0)
            return;
        const double bound = -(f.offset + f.coef_t * ct) / f.coef_s;
        if (f.coef_s > 0.0)
            iv.lo = std::max(iv.lo, bound);
        else
            iv.hi = std::min(iv.hi, bound);
    });
    return iv;
}

Interval t_interval(const Problem& pb, double cs)
{
    Interval iv;
    for_each_factor(pb, [&](const GammaFactor& f) {
        if (!is_numerator(f) || f.coef_t == 0.0)
            return;
        const double bound = -(f.offset + f.coef_s * cs) / f.coef_t;
        if (f.coef_t > 0.0)
            iv.lo = std::max(iv.lo, bound);
        else
            iv.hi = std::min(iv.hi, bound);
    });
    return iv;
}

void check_constant_factors(const Problem& pb)
{
    for_each_factor(pb, [&](const GammaFactor& f) {
        if (is_numerator(f) && f.coef_s == 0.0 && f.coef_t == 0.0 && f.offset <= 0.0 &&
            f.offset == std::floor(f.offset))
            throw Error(ErrorKind::contour_failure, "constant numerator factor sits on a pole");
    });
}

// Shift the left-family numerator factors whose first pole is at or right of
// `hi` so the families separate. Returns false if nothing could be moved.
bool perturb_colliding(std::vector<GammaFactor>& factors, double hi, double eps, int& counter)
{
    bool moved = false;
    for (auto& f : factors) {
        if (!is_numerator(f) || f.coef_s <= 0.0)
            continue;
        if (-f.offset / f.coef_s >= hi - 1e-9 * std::max(1.0, std::abs(hi))) {
            f.offset += (++counter) * eps * f.coef_s;
            moved = true;
        }
    }
    return moved;
}

struct Placement {
    double cs = 0.0;
    double ct = 0.0;
    bool perturbed = false;
};

Placement place_univariate(Problem& pb, const ContourPolicy& policy)
{
    Placement pl;
    Interval iv = s_interval(pb, 0.0);
    if (!(iv.lo < iv.hi)) {
        const double gap = iv.lo - iv.hi;
        int counter = 0;
        const double tol = 1e-9 * std::max(1.0, std::abs(iv.hi));
        if (gap <= tol && perturb_colliding(pb.s, iv.hi, policy.abscissa_shift, counter)) {
            pl.perturbed = true;
            iv = s_interval(pb, 0.0);
        }
        if (!(iv.lo < iv.hi))
            throw Error(ErrorKind::contour_failure,
                        "pole families overlap: left pole " + std::to_string(-iv.lo) +
                            " right pole " + std::to_string(iv.hi));
    }
    if (!std::isfinite(iv.lo) && !std::isfinite(iv.hi))
        throw Error(ErrorKind::non_convergence, "integrand has no numerator gamma factors");
    auto fn = [&](double c) { return real_objective(pb, c, 0.0); };
    pl.cs = relax_from_poles(fn, iv.lo, iv.hi, minimize_on_interval(fn, iv.lo, iv.hi));
    return pl;
}

struct Line {
    double a;
    double b;
    double o;
};

bool solve3(std::array<std::array<double, 4>, 3> m, std::array<double, 3>& x)
{
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        if (std::abs(m[piv][col]) < 1e-14)
            return false;
        std::swap(m[piv], m[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col)
                continue;
            const double k = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c)
                m[r][c] -= k * m[col][c];
        }
    }
    for (int i = 0; i < 3; ++i)
        x[i] = m[i][3] / m[i][i];
    return true;
}

// Centre of the largest disc inside {a cs + b ct + o > 0} (clipped to a box).
Placement chebyshev_centre(const Problem& pb)
{
    std::vector<Line> lines;
    for_each_factor(pb, [&](const GammaFactor& f) {
        if (!is_numerator(f) || (f.coef_s == 0.0 && f.coef_t == 0.0))
            return;
        const double norm = std::hypot(f.coef_s, f.coef_t);
        Line l{f.coef_s / norm, f.coef_t / norm, f.offset / norm};
        for (auto& e : lines) {
            if (std::abs(e.a - l.a) < 1e-14 && std::abs(e.b - l.b) < 1e-14) {
                e.o = std::min(e.o, l.o);
                return;
            }
        }
        lines.push_back(l);
    });
    constexpr double box = 60.0;
    lines.push_back({1.0, 0.0, box});
    lines.push_back({-1.0, 0.0, box});
    lines.push_back({0.0, 1.0, box});
    lines.push_back({0.0, -1.0, box});

    double best = -kInf;
    Placement pl;
    const std::size_t n = lines.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                std::array<std::array<double, 4>, 3> m{};
                const std::array<const Line*, 3> sel{&lines[i], &lines[j], &lines[k]};
                for (int r = 0; r < 3; ++r)
                    m[r] = {sel[r]->a, sel[r]->b, -1.0, -sel[r]->o};
                std::array<double, 3> x{};
                if (!solve3(m, x))
                    continue;
                if (x[2] <= best)
                    continue;
                bool ok = true;
                for (const auto& l : lines)
                    if (l.a * x[0] + l.b * x[1] + l.o - x[2] < -1e-10) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    best = x[2];
                    pl.cs = x[0];
                    pl.ct = x[1];
                }
            }
    if (!(best > 1e-12))
        throw Error(ErrorKind::contour_failure, "no contour pair separates the pole families");
    return pl;
}

Placement place_bivariate(const Problem& pb)
{
    Placement pl = chebyshev_centre(pb);
    double prev = real_objective(pb, pl.cs, pl.ct);
    for (int sweep = 0; sweep < 40; ++sweep) {
        const Interval is = s_interval(pb, pl.ct);
        pl.cs = minimize_on_interval([&](double c) { return real_objective(pb, c, pl.ct); }, is.lo,
                                     is.hi);
        const Interval it = t_interval(pb, pl.cs);
        pl.ct = minimize_on_interval([&](double c) { return real_objective(pb, pl.cs, c); }, it.lo,
                                     it.hi);
        const double cur = real_objective(pb, pl.cs, pl.ct);
        if (prev - cur < 1e-10 * std::max(1.0, std::abs(cur)))
            break;
        prev = cur;
    }
    // Half the slack per axis keeps the combined growth within kSaddleSlack.
    const Interval is = s_interval(pb, pl.ct);
    auto fs = [&](double c) { return real_objective(pb, c, pl.ct); };
    pl.cs = relax_from_poles(fs, is.lo, is.hi, pl.cs, 0.5 * kSaddleSlack);
    const Interval it = t_interval(pb, pl.cs);
    auto ft = [&](double c) { return real_objective(pb, pl.cs, c); };
    pl.ct = relax_from_poles(ft, it.lo, it.hi, pl.ct, 0.5 * kSaddleSlack);
    return pl;
}

// Distance from the contour to the nearest numerator pole, measured along s
// (axis 0) or t (axis 1).
double strip_width(const Problem& pb, const Placement& pl, int axis)
{
    double w = kInf;
    for_each_factor(pb, [&](const GammaFactor& f) {
        const double coef = axis == 0 ? f.coef_s : f.coef_t;
        if (!is_numerator(f) || coef == 0.0)
            return;
        const double u = f.offset + f.coef_s * pl.cs + f.coef_t * pl.ct;
        // Past a crossed pole the nearest one may lie on either side.
        const double d = u >= 0.0 ? u : std::abs(u - std::round(u));
        w = std::min(w, d / std::abs(coef));
    });
    return w;
}

class Engine {
public:
    Engine(const Problem& pb, const Placement& pl, const ContourPolicy& policy)
        : policy_(policy),
          f_(pb.s, pb.t, pb.outer, pb.log_x1, pb.log_x2, pl.cs, pl.ct, pb.bivariate),
          bivariate_(pb.bivariate)
    {
        // Pole distances set the sinh-map scales; capped so that wide strips
        // do not stretch the grid past the region where the integrand lives.
        ws_ = std::min(1.0, strip_width(pb, pl, 0));
        wt_ = bivariate_ ? std::min(1.0, strip_width(pb, pl, 1)) : 1.0;
        // Reference magnitude for scaling and truncation. Probing a few points
        // guards against an abscissa that sits near a zero of 1/Gamma.
        double ref = -kInf;
        for (double tau : {0.0, 0.25, 1.0, 4.0})
            ref = std::max(ref, f_.log_value(tau * ws_, 0.0).real());
        if (bivariate_)
            for (double tau : {0.25, 1.0, 4.0})
                ref = std::max(ref, f_.log_value(0.0, tau * wt_).real());
        shift_ = ref + std::log(ws_) + (bivariate_ ? std::log(wt_) : 0.0);
        // Truncate where the integrand falls this far below its central value.
        cutoff_ = std::min(-40.0, std::log(policy.tolerance) - 25.0);
    }

    ContourEstimate run(const Placement& pl)
    {
        ContourEstimate est;
        est.abscissa_s = pl.cs;
        est.abscissa_t = pl.ct;
        est.perturbed = pl.perturbed;

        const double us = march(0);
        if (!bivariate_) {
            finish(est, refine_line(us));
            return est;
        }
        double ut = march(1);
        const double hs = refine_slice(us, 0);
        const double ht = refine_slice(ut, 1);
        double us2 = us;
        extend_box(us2, ut, hs, ht);

        Grid g = make_grid(hs, us2, ht, ut);
        GridSum prev = sum(g);
        est.nodes += prev.nodes;
        for (;;) {
            const Grid fine = make_grid(g.h_s / 2.0, us2, g.h_t / 2.0, ut);
            const GridSum cur = sum(fine);
            const double diff = std::abs(cur.sum - prev.sum);
            if (converged(diff, cur)) {
                finish(est, cur, diff);
                return est;
            }
            est.nodes += cur.nodes;
            g = fine;
            prev = cur;
        }
    }

    /// Upper estimate of (1/2 pi) \int |F| along the contour (univariate).
    double abs_integral(long& nodes)
    {
        const double us = march(0);
        const GridSum a = sum(make_grid(0.25, us, 1.0, 0.0));
        const GridSum b = sum(make_grid(0.125, us, 1.0, 0.0));
        nodes += a.nodes + b.nodes;
        // The trapezoid sums of a smooth positive function agree to a few
        // percent at these steps; the factor 2 covers the remainder.
        return 2.0 * std::max(a.abs_sum, b.abs_sum) * std::exp(shift_) / kTwoPi;
    }

    /// Rough log of (2 pi)^-d \int |F| over the allowed band.
    double log_band_magnitude() const
    {
        std::vector<double> taus{0.0};
        for (double t = 1.0 / 64.0; t < policy_.max_imaginary_extent; t *= 1.25)
            taus.push_back(t);
        taus.push_back(policy_.max_imaginary_extent);
        double peak = -kInf;
        for (double ts : taus)
            for (double sgn : {1.0, -1.0}) {
                if (!bivariate_) {
                    peak = std::max(peak, f_.log_value(sgn * ts, 0.0).real());
                    continue;
                }
                for (double tt : taus) {
                    peak = std::max(peak, f_.log_value(sgn * ts, tt).real());
                    peak = std::max(peak, f_.log_value(sgn * ts, -tt).real());
                }
            }
        const double len = std::log(2.0 * policy_.max_imaginary_extent / kTwoPi);
        return peak + (bivariate_ ? 2.0 : 1.0) * len;
    }

private:
    double tau(int axis, double u) const { return (axis == 0 ? ws_ : wt_) * std::sinh(u); }

    // Mapped log magnitude along one axis, relative to the centre.
    double axis_log_mag(int axis, double u) const
    {
        const double w = axis == 0 ? ws_ : wt_;
        const cplx lv = axis == 0 ? f_.log_value(tau(0, u), 0.0) : f_.log_value(0.0, tau(1, u));
        return lv.real() + std::log(w * std::cosh(u)) + std::log(axis == 0 ? wt_ : ws_) - shift_;
    }

    double point_log_mag(double us, double ut) const
    {
        return f_.log_value(tau(0, us), tau(1, ut)).real() + std::log(ws_ * std::cosh(us)) +
               std::log(wt_ * std::cosh(ut)) - shift_;
    }

    double u_limit(int axis) const
    {
        return std::asinh(policy_.max_imaginary_extent / (axis == 0 ? ws_ : wt_));
    }

    double march(int axis) const
    {
        const double limit = u_limit(axis);
        double u = 0.0;
        int below = 0;
        while (true) {
            u += 0.125;
            if (u > limit)
                throw Error(ErrorKind::non_convergence,
                            "integrand not negligible at |Im| = " +
                                std::to_string(policy_.max_imaginary_extent));
            const double v = axis_log_mag(axis, u);
            if (v > 600.0)
                throw Error(ErrorKind::non_convergence, "integrand grows away from the saddle");
            below = (v < cutoff_) ? below + 1 : 0;
            if (below >= 3)
                return u;
        }
    }

    Grid make_grid(double hs, double us, double ht, double ut) const
    {
        Grid g;
        g.h_s = hs;
        g.w_s = ws_;
        g.n_s = static_cast<int>(std::ceil(us / hs));
        if (bivariate_) {
            g.h_t = ht;
            g.w_t = wt_;
            g.n_t = static_cast<int>(std::ceil(ut / ht));
        }
        if (g.n_s > policy_.node_budget || g.n_t > policy_.node_budget)
            throw Error(ErrorKind::non_convergence,
                        "quadrature node budget exhausted (" + std::to_string(policy_.node_budget) +
                            " per axis)");
        return g;
    }

    // Node sum times the cell area, so sums on different grids compare.
    GridSum sum(const Grid& g) const
    {
        GridSum s = policy_.parallel ? kernels::sum_grid_parallel(f_, g, shift_)
                                     : kernels::sum_grid_serial(f_, g, shift_);
        const double area = g.h_s * (bivariate_ ? g.h_t : 1.0);
        s.sum *= area;
        s.abs_sum *= area;
        return s;
    }

    bool converged(double diff, const GridSum& cur) const
    {
        return diff <= policy_.tolerance * std::abs(cur.sum) || diff <= floor(cur);
    }

    static double floor(const GridSum& s) { return 64.0 * kEps * s.abs_sum; }

    GridSum refine_line(double extent)
    {
        double h = 0.5;
        GridSum prev = sum(make_grid(h, extent, 1.0, 0.0));
        long nodes = prev.nodes;
        for (;;) {
            GridSum cur = sum(make_grid(h / 2.0, extent, 1.0, 0.0));
            nodes += cur.nodes;
            const double diff = std::abs(cur.sum - prev.sum);
            if (converged(diff, cur)) {
                cur.nodes = nodes;
                last_diff_ = diff;
                return cur;
            }
            h /= 2.0;
            prev = cur;
        }
    }

    // Step size resolving the central slice along one axis.
    double refine_slice(double extent, int axis) const
    {
        auto slice_sum = [&](double h) {
            const int n = static_cast<int>(std::ceil(extent / h));
            if (n > policy_.node_budget)
                throw Error(ErrorKind::non_convergence, "quadrature node budget exhausted");
            double s = 0.0;
            double a = 0.0;
            const double w = axis == 0 ? ws_ : wt_;
            for (int i = 0; i <= n; ++i) {
                const double u = i * h;
                const cplx lv = (axis == 0 ? f_.log_value(tau(0, u), 0.0) : f_.log_value(0.0, tau(1, u))) +
                                std::log(w * std::cosh(u)) - shift_;
                const double wgt = i == 0 ? 1.0 : 2.0;
                s += wgt * std::exp(lv).real();
                a += wgt * std::exp(lv.real());
            }
            return std::pair{s * h, a * h};
        };
        double h = 0.5;
        auto prev = slice_sum(h);
        for (;;) {
            auto cur = slice_sum(h / 2.0);
            const double diff = std::abs(cur.first - prev.first);
            if (diff <= policy_.tolerance * std::abs(cur.first) || diff <= 64.0 * kEps * cur.second)
                return h;
            h /= 2.0;
            prev = cur;
        }
    }

    // Grow the bivariate box until the integrand is negligible on its edges.
    void extend_box(double& us, double& ut, double hs, double ht) const
    {
        for (int it = 0; it < 40; ++it) {
            double worst_s = -kInf;
            double worst_t = -kInf;
            const int nt = static_cast<int>(std::ceil(ut / ht));
            const int ns = static_cast<int>(std::ceil(us / hs));
            for (int j = -nt; j <= nt; ++j)
                worst_s = std::max(worst_s, point_log_mag(us, j * ht));
            for (int i = 0; i <= ns; ++i) {
                worst_t = std::max(worst_t, point_log_mag(i * hs, ut));
                worst_t = std::max(worst_t, point_log_mag(i * hs, -ut));
            }
            bool grown = false;
            if (worst_s > cutoff_) {
                us += 0.5;
                grown = true;
            }
            if (worst_t > cutoff_) {
                ut += 0.5;
                grown = true;
            }
            if (!grown)
                return;
            if (us > u_limit(0) || ut > u_limit(1))
                break;
        }
        throw Error(ErrorKind::non_convergence, "bivariate integrand not negligible on the box edge");
    }

    void finish(ContourEstimate& est, const GridSum& s, double diff = -1.0)
    {
        if (diff < 0.0)
            diff = last_diff_;
        const double two_pi_pow = bivariate_ ? kTwoPi * kTwoPi : kTwoPi;
        const double scale = std::exp(shift_) / two_pi_pow;
        est.value = s.sum * scale;
        est.error_bound = (diff + floor(s) + std::exp(cutoff_) * s.abs_sum) * scale;
        est.nodes += s.nodes;
        if (!std::isfinite(est.value))
            throw Error(ErrorKind::non_convergence, "contour integral overflowed");
    }

    ContourPolicy policy_;
    ContourIntegrand f_;
    bool bivariate_;
    double ws_ = 1.0;
    double wt_ = 1.0;
    double shift_ = 0.0;
    double cutoff_ = -40.0;
    double last_diff_ = 0.0;
};

void check_decay(const std::vector<GammaFactor>& factors, const char* what)
{
    double rate = 0.0;
    for (const auto& f : factors)
        rate += (is_numerator(f) ? 1.0 : -1.0) * std::abs(f.coef_s);
    if (!(rate > 1e-12))
        throw Error(ErrorKind::non_convergence,
                    std::string(what) + ": integrand does not decay along the contour");
}

// Beyond this |log x| the saddle hugs a pole and the integrand oscillates at
// frequency |log x|; shifting the contour past the nearest poles is cheaper.
constexpr double kCrossingLogX = 25.0;
// Required suppression log of the shifted-contour integral.
constexpr double kCrossingMargin = 45.0;
constexpr std::size_t kCrossingMaxPoles = 4;

// Move the contour past the poles nearest to it on the side the argument
// pulls toward, collecting their residues exactly.
std::optional<ContourEstimate> evaluate_with_crossing(const Problem& pb, const Placement& pl,
                                                      const ContourPolicy& policy)
{
    const bool left = pb.log_x1 < 0.0;
    std::vector<double> poles;
    for (const auto& f : pb.s) {
        if (!is_numerator(f) || f.coef_s == 0.0 || (f.coef_s > 0.0) != left)
            continue;
        for (int k = 0; k < 4096; ++k) {
            const double sp = -(f.offset + k) / f.coef_s;
            if (std::abs(sp - pl.cs) > 60.0)
                break;
            poles.push_back(sp);
        }
    }
    if (poles.empty())
        return std::nullopt;
    std::sort(poles.begin(), poles.end(),
              [&](double a, double b) { return std::abs(a - pl.cs) < std::abs(b - pl.cs); });
    std::vector<double> clusters;
    for (double sp : poles)
        if (clusters.empty() || std::abs(sp - clusters.back()) > 1e-9 * std::max(1.0, std::abs(sp)))
            clusters.push_back(sp);

    const double dir = left ? -1.0 : 1.0;
    const double mag = std::abs(pb.log_x1);
    std::size_t last = clusters.size();
    double c_new = 0.0;
    // Only a handful of isolated poles: long runs of residues cancel badly.
    for (std::size_t i = 0; i < clusters.size() && i < kCrossingMaxPoles; ++i) {
        const double gap = i + 1 < clusters.size() ? std::abs(clusters[i + 1] - clusters[i]) : 1.0;
        if (gap < 1e-3)
            continue;
        const double cand = clusters[i] + dir * std::min(0.5 * gap, 0.5);
        if (mag * std::abs(clusters[0] - cand) >= kCrossingMargin) {
            last = i;
            c_new = cand;
            break;
        }
    }
    if (last == clusters.size())
        return std::nullopt;

    // Residues summed relative to the largest one.
    std::vector<ResidueTerm> terms;
    double top = -kInf;
    for (std::size_t i = 0; i <= last; ++i) {
        const ResidueTerm r = residue(pb.s, pb.log_x1, clusters[i]);
        if (r.sign == 0)
            continue;
        terms.push_back(r);
        top = std::max(top, r.log_abs);
    }
    double sum = 0.0;
    double abs_sum = 0.0;
    for (const auto& r : terms) {
        sum += r.sign * std::exp(r.log_abs - top);
        abs_sum += std::exp(r.log_abs - top);
    }
    // Closing to the right traverses the poles clockwise.
    const double scale = terms.empty() ? 0.0 : std::exp(top);
    const double pole_value = (left ? 1.0 : -1.0) * sum * scale;
    const double pole_error = 64.0 * kEps * abs_sum * scale;

    Placement shifted = pl;
    shifted.cs = c_new;
    Engine engine(pb, shifted, policy);
    ContourEstimate est;
    est.abscissa_s = c_new;
    est.perturbed = pl.perturbed;
    const double bound = engine.abs_integral(est.nodes);
    if (bound <= 0.1 * policy.tolerance * std::abs(pole_value)) {
        est.value = pole_value;
        est.error_bound = bound + pole_error;
        return est;
    }
    const long nodes = est.nodes;
    est = engine.run(shifted);
    est.nodes += nodes;
    est.value += pole_value;
    est.error_bound += pole_error;
    return est;
}

ContourEstimate run_or_negligible(const Problem& pb, const Placement& pl,
                                  const ContourPolicy& policy)
{
    Engine engine(pb, pl, policy);
    try {
        return engine.run(pl);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::non_convergence)
            throw;
        const double bound = engine.log_band_magnitude();
        if (!(bound < policy.log_negligible))
            throw;
        ContourEstimate est;
        est.abscissa_s = pl.cs;
        est.abscissa_t = pl.ct;
        est.perturbed = pl.perturbed;
        est.negligible = true;
        est.error_bound = std::exp(bound);
        return est;
    }
}

ContourEstimate evaluate(Problem pb, const ContourPolicy& policy)
{
    if (!(policy.tolerance > 0.0) || policy.node_budget < 64)
        throw Error(ErrorKind::domain, "contour policy needs tolerance > 0 and node budget >= 64");
    check_constant_factors(pb);
    if (pb.bivariate) {
        const Placement pl = place_bivariate(pb);
        return run_or_negligible(pb, pl, policy);
    }
    const Placement pl = place_univariate(pb, policy);
    if (std::abs(pb.log_x1) > kCrossingLogX) {
        try {
            if (auto est = evaluate_with_crossing(pb, pl, policy))
                return *est;
        } catch (const Error&) {
            // fall through to the direct contour
        }
    }
    return run_or_negligible(pb, pl, policy);
}

}  // namespace

void MeijerGSpec::validate() const
{
    if (m < 0 || n < 0 || p < 0 || q < 0 || m > q || n > p)
        throw Error(ErrorKind::domain, "Meijer-G orders need 0 <= m <= q and 0 <= n <= p");
    if (static_cast<int>(a.size()) != p || static_cast<int>(b.size()) != q)
        throw Error(ErrorKind::domain, "Meijer-G parameter lists do not match p, q");
}

std::vector<GammaFactor> mellin_factors(const MeijerGSpec& spec)
{
    spec.validate();
    std::vector<GammaFactor> out;
    out.reserve(static_cast<std::size_t>(spec.p + spec.q));
    for (int j = 0; j < spec.m; ++j)
        out.push_back(num(spec.b[j], 1.0));
    for (int k = 0; k < spec.n; ++k)
        out.push_back(num(1.0 - spec.a[k], -1.0));
    for (int j = spec.m; j < spec.q; ++j)
        out.push_back(den(1.0 - spec.b[j], -1.0));
    for (int k = spec.n; k < spec.p; ++k)
        out.push_back(den(spec.a[k], 1.0));
    return out;
}

ContourEstimate meijer_g(const MeijerGSpec& spec, double x, const ContourPolicy& policy)
{
    if (!(x > 0.0))
        throw Error(ErrorKind::domain, "meijer_g needs x > 0");
    return meijer_g_log(spec, std::log(x), policy);
}

ContourEstimate meijer_g_log(const MeijerGSpec& spec, double log_x, const ContourPolicy& policy)
{
    const auto factors = mellin_factors(spec);
    return fox_h(factors, log_x, policy);
}

ContourEstimate fox_h(std::span<const GammaFactor> factors, double log_x,
                      const ContourPolicy& policy)
{
    Problem pb;
    pb.s.assign(factors.begin(), factors.end());
    for (const auto& f : pb.s)
        if (f.coef_t != 0.0)
            throw Error(ErrorKind::domain, "univariate integrand has a t-dependent factor");
    check_decay(pb.s, "fox_h");
    pb.log_x1 = log_x;
    return evaluate(std::move(pb), policy);
}

ContourEstimate fox_h_bivariate(const BivariateFoxHSpec& spec, double x1, double x2,
                                const ContourPolicy& policy)
{
    if (!(x1 > 0.0) || !(x2 > 0.0))
        throw Error(ErrorKind::domain, "fox_h_bivariate needs x1, x2 > 0");
    return fox_h_bivariate_log(spec, std::log(x1), std::log(x2), policy);
}

ContourEstimate fox_h_bivariate_log(const BivariateFoxHSpec& spec, double log_x1, double log_x2,
                                    const ContourPolicy& policy)
{
    Problem pb;
    pb.s = spec.s_factors;
    pb.t = spec.t_factors;
    pb.outer = spec.outer_factors;
    for (const auto& f : pb.s)
        if (f.coef_t != 0.0)
            throw Error(ErrorKind::domain, "s_factors must not depend on t");
    for (const auto& f : pb.t)
        if (f.coef_s != 0.0)
            throw Error(ErrorKind::domain, "t_factors must not depend on s");
    pb.log_x1 = log_x1;
    pb.log_x2 = log_x2;
    pb.bivariate = true;
    return evaluate(std::move(pb), policy);
}

std::vector<double> ladder(int k, double x)
{
    if (k < 1)
        throw Error(ErrorKind::domain, "ladder length must be positive");
    std::vector<double> out(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
        out[j] = (x + j) / k;
    return out;
}

}  // namespace rfso::specfun
