#pragma once

#include <numbers>
#include <string_view>

namespace curvlab {

enum class Space { S4, CP2 };

/// Orbit-space data of the SO(3) cohomogeneity one action on S^4 or CP^2.
///
/// The orbit space is [0, L]; r = 0 and r = L are the singular orbits.
/// rho_ratio_* is the radius of the collapsing circle K/H, in units of the
/// plateau value b, and r_max_* are the gluing radii of the two disk bundles.
struct SpaceKind {
    Space name;
    double L;
    double pole_slope_0;  // phi'(0)
    double pole_slope_L;  // xi'(L)
    double rho_ratio_minus;
    double rho_ratio_plus;
    double r_max_minus;
    double r_max_plus;

    static constexpr SpaceKind s4() {
        constexpr double pi = std::numbers::pi;
        return {Space::S4, pi / 3.0, 2.0, -2.0, 0.5, 0.5, pi / 6.0, pi / 6.0};
    }

    static constexpr SpaceKind cp2() {
        constexpr double pi = std::numbers::pi;
        return {Space::CP2, pi / 4.0, 1.0, -2.0, 1.0, 0.5, pi / 6.0, pi / 12.0};
    }

    static constexpr SpaceKind of(Space s) { return s == Space::S4 ? s4() : cp2(); }

    constexpr bool operator==(const SpaceKind&) const = default;
};

inline std::string_view to_string(Space s) { return s == Space::S4 ? "s4" : "cp2"; }

}  // namespace curvlab
