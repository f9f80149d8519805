#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "curvlab/bump.hpp"
#include "curvlab/error.hpp"
#include "curvlab/format.hpp"
#include "curvlab/profiles.hpp"
#include "curvlab/space.hpp"

namespace curvlab {

struct PlateauHeights {
    double y_minus = 0.0;
    double y_plus = 0.0;
};

/// Grove-Ziller data: two disk bundles glued along a collar where
/// phi = psi = xi = b, each built from Q_{a,b} and a bump function.
struct GZParams {
    SpaceKind space = SpaceKind::s4();
    double a = 4.0 / 3.0;
    double b = 0.0;
    double rho_minus = 0.0;
    double rho_plus = 0.0;
    double y_minus = 0.0;
    double y_plus = 0.0;
    double r0 = 0.0;
    BumpFn bump_minus;
    BumpFn bump_plus;
};

/// Largest admissible b for the space: b < (pi/3 or pi/6) sqrt(a-1)/sqrt(a).
inline double max_plateau_value(const SpaceKind& space, double a) {
    const double c = space.name == Space::S4 ? std::numbers::pi / 3.0 : std::numbers::pi / 6.0;
    return c * std::sqrt(a - 1.0) / std::sqrt(a);
}

inline PlateauHeights validate_gz_params(const SpaceKind& space, double a, double b) {
    if (!(a > 1.0)) throw Error(ErrorCode::InvalidParams, "a > 1 violated (a = " + fmt17(a) + ")");
    if (!(a <= 4.0 / 3.0 + 1e-12)) throw Error(ErrorCode::InvalidParams, "a <= 4/3 violated (a = " + fmt17(a) + ")");
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidParams, "b > 0 violated (b = " + fmt17(b) + ")");
    const double bmax = max_plateau_value(space, a);
    if (!(b < bmax))
        throw Error(ErrorCode::InvalidParams,
                    "b < " + std::string(space.name == Space::S4 ? "pi/3" : "pi/6") + " sqrt(a-1)/sqrt(a) = " +
                        fmt17(bmax) + " violated (b = " + fmt17(b) + ")");
    const PlateauHeights y{plateau_height(a, space.rho_ratio_minus * b), plateau_height(a, space.rho_ratio_plus * b)};
    if (!(y.y_minus < space.r_max_minus))
        throw Error(ErrorCode::InvalidParams, "y_minus < r_max_minus violated (y_minus = " + fmt17(y.y_minus) + ")");
    if (!(y.y_plus < space.r_max_plus))
        throw Error(ErrorCode::InvalidParams, "y_plus < r_max_plus violated (y_plus = " + fmt17(y.y_plus) + ")");
    return y;
}

/// Validates (a, b) and shoots both bump functions.
inline GZParams make_gz_params(const SpaceKind& space, double a, double b, const BumpOptions& opt = {}) {
    const PlateauHeights y = validate_gz_params(space, a, b);
    GZParams p;
    p.space = space;
    p.a = a;
    p.b = b;
    p.rho_minus = space.rho_ratio_minus * b;
    p.rho_plus = space.rho_ratio_plus * b;
    p.y_minus = y.y_minus;
    p.y_plus = y.y_plus;
    p.bump_minus = build_bump(a, p.rho_minus, space.r_max_minus, opt);
    p.bump_plus = build_bump(a, p.rho_plus, space.r_max_plus, opt);
    p.r0 = p.bump_minus.r0;
    return p;
}

/// b sqrt(a) f / sqrt(f^2 + a rho^2) and its first two derivatives.
inline Jet gz_collapsing_profile(const BumpFn& bump, double a, double b, double rho, double r) {
    if (r >= bump.r0) return {b, 0.0, 0.0};
    const Jet f = bump.eval(r);
    const double c = b * std::sqrt(a);
    const double ar2 = a * rho * rho;
    const double d = f.v * f.v + ar2;
    const double sd = std::sqrt(d);
    const double d32 = d * sd;
    return {c * f.v / sd, c * ar2 * f.d1 / d32, c * ar2 * (f.d2 / d32 - 3.0 * f.v * f.d1 * f.d1 / (d32 * d))};
}

/// Grove-Ziller jets at r, with z = L - r.
inline ProfileJets gz_jets(const GZParams& p, double r, double z) {
    const Jet flat{p.b, 0.0, 0.0};
    ProfileJets j{flat, flat, flat};
    if (r <= p.space.r_max_minus) {
        j.phi = gz_collapsing_profile(p.bump_minus, p.a, p.b, p.rho_minus, r);
    } else {
        const Jet x = gz_collapsing_profile(p.bump_plus, p.a, p.b, p.rho_plus, z);
        j.xi = {x.v, -x.d1, x.d2};
    }
    return j;
}

/// Closed-form Grove-Ziller triple on [0, L] with exact derivatives.
inline ProfileTriple gz_closed_form(const GZParams& p) {
    return {p.space, p.space.L, [p](double r, double z) { return gz_jets(p, r, z); }};
}

inline ProfileTriple gz_profiles(const GZParams& p, std::size_t n_grid) { return sample(gz_closed_form(p), n_grid); }

}  // namespace curvlab
