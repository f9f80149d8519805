#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "curvlab/error.hpp"
#include "curvlab/format.hpp"
#include "curvlab/grid.hpp"

namespace curvlab {

struct BumpOptions {
    /// Sharpness of the curvature cutoff exp(-shape u^2 / (1 - u^2)).
    double shape = 1.0;
    /// r0 must leave at least this fraction of [y, r_max] as plateau.
    double plateau_margin = 0.1;
    std::size_t knots = 4096;
};

/// Profile f of the rotationally symmetric disk dr^2 + f(r)^2 dtheta^2.
///
/// Built from a curvature profile kappa(r) = amplitude / r0^2 * k(r / r0) with
/// k(u) = exp(-shape u^2 / (1 - u^2)) on [0, 1) and 0 beyond, i.e. positive,
/// even, strictly decreasing and flat to all orders at r0. f solves
/// f'' = -kappa f, f(0) = 0, f'(0) = 1, and the two shooting parameters
/// (amplitude, and r0 through shape) are tuned so that f'(r0) = 0, f(r0) = y.
class BumpFn {
public:
    double y = 0.0;
    double r0 = 0.0;
    double r_max = 0.0;
    double amplitude = 0.0;
    double shape = 0.0;
    /// |f'(r0)| and |f(r0) - y| after the shoot.
    double slope_residual = 0.0;
    double height_residual = 0.0;

    static double profile(double u, double shape) {
        if (u >= 1.0) return 0.0;
        return std::exp(-shape * u * u / (1.0 - u * u));
    }

    /// Disk curvature -f''/f.
    double curvature(double r) const { return amplitude / (r0 * r0) * profile(std::abs(r) / r0, shape); }

    /// f, f', f'' at r in [0, r_max] (extended as a constant beyond r_max).
    Jet eval(double r) const {
        if (r >= r0) return {y, 0.0, 0.0};
        if (r <= 0.0) return {0.0, 1.0, 0.0};
        const double u = r / r0;
        const double h = 1.0 / static_cast<double>(g_.size() - 1);
        const auto k = std::min(static_cast<std::size_t>(u / h), g_.size() - 2);
        auto [g, gp] = step({g_[k], gp_[k]}, static_cast<double>(k) * h, u - static_cast<double>(k) * h,
                            amplitude, shape);
        return {r0 * g, gp, -amplitude * profile(u, shape) * g / r0};
    }

    /// Dimensionless state (g, g') of g'' = -c k(u) g after one RK4 step.
    static std::pair<double, double> step(std::pair<double, double> s, double u, double h, double c, double shape) {
        auto rhs = [&](double x, double g, double gp) { return std::pair{gp, -c * profile(x, shape) * g}; };
        const auto [a1, b1] = rhs(u, s.first, s.second);
        const auto [a2, b2] = rhs(u + 0.5 * h, s.first + 0.5 * h * a1, s.second + 0.5 * h * b1);
        const auto [a3, b3] = rhs(u + 0.5 * h, s.first + 0.5 * h * a2, s.second + 0.5 * h * b2);
        const auto [a4, b4] = rhs(u + h, s.first + h * a3, s.second + h * b3);
        return {s.first + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4), s.second + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)};
    }

    /// (g(1), g'(1)) for amplitude c; optionally records the knots.
    static std::pair<double, double> shoot(double c, double shape, std::size_t m, std::vector<double>* g = nullptr,
                                           std::vector<double>* gp = nullptr) {
        std::pair<double, double> s{0.0, 1.0};
        const double h = 1.0 / static_cast<double>(m);
        if (g) {
            g->assign(m + 1, 0.0);
            gp->assign(m + 1, 0.0);
            (*gp)[0] = 1.0;
        }
        for (std::size_t k = 0; k < m; ++k) {
            s = step(s, static_cast<double>(k) * h, h, c, shape);
            if (g) {
                (*g)[k + 1] = s.first;
                (*gp)[k + 1] = s.second;
            }
        }
        return s;
    }

    friend BumpFn build_bump(double, double, double, const BumpOptions&);

private:
    std::vector<double> g_;
    std::vector<double> gp_;
};

namespace detail {

/// Smallest amplitude c with g'(1) = 0 for the given shape.
inline double bump_amplitude(double shape, std::size_t m) {
    double lo = 0.0;
    double hi = 1.0;
    int guard = 0;
    while (BumpFn::shoot(hi, shape, m).second > 0.0) {
        lo = hi;
        hi *= 1.25;
        if (++guard > 200) throw Error(ErrorCode::ShootingFailed, "no amplitude bracket for shape " + fmt17(shape));
    }
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        [&](double c) { return BumpFn::shoot(c, shape, m).second; }, lo, hi,
        boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (a + b);
}

}  // namespace detail

/// Plateau height y = rho sqrt(a) / sqrt(a - 1) of the bump for cone parameter a.
inline double plateau_height(double a, double rho) { return rho * std::sqrt(a) / std::sqrt(a - 1.0); }

inline BumpFn build_bump(double a, double rho, double r_max, const BumpOptions& opt = {}) {
    if (!(a > 1.0)) throw Error(ErrorCode::InvalidParams, "a must exceed 1");
    if (!(rho > 0.0) || !(r_max > 0.0)) throw Error(ErrorCode::InvalidParams, "rho and r_max must be positive");
    const double y = plateau_height(a, rho);
    if (!(y < r_max))
        throw Error(ErrorCode::InvalidParams, "plateau height y = " + fmt17(y) + " must satisfy y < r_max = " + fmt17(r_max));

    const std::size_t m = opt.knots;
    const double cap = r_max - opt.plateau_margin * (r_max - y);
    auto radius = [&](double shape) {
        const double c = detail::bump_amplitude(shape, m);
        return std::pair{c, y / BumpFn::shoot(c, shape, m).first};
    };

    double shape = opt.shape;
    auto [c, r0] = radius(shape);
    if (r0 > cap) {
        // Flatter curvature profiles push f(r0)/r0 up towards 2/pi.
        constexpr double min_shape = 1e-4;
        const auto [c_min, r0_min] = radius(min_shape);
        if (r0_min > cap)
            throw Error(ErrorCode::ShootingFailed,
                        "monotone-curvature bump cannot reach y = " + fmt17(y) + " before r_max = " + fmt17(r_max) +
                            " (best r0 = " + fmt17(r0_min) + ", cap = " + fmt17(cap) + ")");
        std::uintmax_t iters = 200;
        auto [lo, hi] = boost::math::tools::toms748_solve([&](double d) { return radius(d).second - cap; }, min_shape,
                                                          shape, boost::math::tools::eps_tolerance<double>(40), iters);
        shape = lo;
        std::tie(c, r0) = radius(shape);
        (void)hi;
        (void)c_min;
    }

    BumpFn f;
    f.y = y;
    f.r0 = r0;
    f.r_max = r_max;
    f.amplitude = c;
    f.shape = shape;
    const auto end = BumpFn::shoot(c, shape, m, &f.g_, &f.gp_);
    f.slope_residual = std::abs(end.second);
    f.height_residual = std::abs(r0 * end.first - y);
    if (f.slope_residual > 1e-8 || f.height_residual > 1e-8)
        throw Error(ErrorCode::ShootingFailed, "residuals f'(r0) = " + fmt17(end.second) +
                                                   ", f(r0) - y = " + fmt17(r0 * end.first - y));
    return f;
}

}  // namespace curvlab
