#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "curvlab/space.hpp"

namespace curvlab {

struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Values and first two arclength derivatives of phi, psi, xi at one point.
struct ProfileJets {
    Jet phi;
    Jet psi;
    Jet xi;
};

inline ProfileJets affine(double s, const ProfileJets& a, const ProfileJets& b) {
    auto mix = [s](const Jet& x, const Jet& y) {
        return Jet{(1.0 - s) * x.v + s * y.v, (1.0 - s) * x.d1 + s * y.d1, (1.0 - s) * x.d2 + s * y.d2};
    };
    return {mix(a.phi, b.phi), mix(a.psi, b.psi), mix(a.xi, b.xi)};
}

enum Field : int { kH = 0, kPhi = 1, kPsi = 2, kXi = 3 };

/// Reflection rule across a pole: ghost value of field i at distance z past
/// the pole equals sign[i] * (field source[i] at distance z inside).
struct GhostRule {
    std::array<int, 4> source;
    std::array<double, 4> sign;
};

/// r = 0. S^4: phi odd, psi and xi swap. CP^2: phi odd, psi and xi even.
inline GhostRule left_ghost_rule(Space s) {
    if (s == Space::S4) return {{kH, kPhi, kXi, kPsi}, {1.0, -1.0, 1.0, 1.0}};
    return {{kH, kPhi, kPsi, kXi}, {1.0, -1.0, 1.0, 1.0}};
}

/// r = L, both spaces: xi odd, phi and psi swap.
inline GhostRule right_ghost_rule(Space) { return {{kH, kPsi, kPhi, kXi}, {1.0, 1.0, 1.0, -1.0}}; }

/// Uniform-grid samples of (h, phi, psi, xi) on [0, N*dr] with parity ghosts.
/// h is the coefficient of dr in the metric h^2 dr^2 + ...; profiles that are
/// already parametrized by arclength carry h = 1.
struct FieldSet {
    Space space = Space::S4;
    double dr = 0.0;
    std::array<std::vector<double>, 4> f;

    std::size_t intervals() const { return f[kPhi].size() - 1; }

    /// Value at node j, which may lie up to three nodes outside [0, N].
    double at(int field, long j) const {
        const long n = static_cast<long>(intervals());
        if (j < 0) {
            const GhostRule g = left_ghost_rule(space);
            return g.sign[field] * f[g.source[field]][static_cast<std::size_t>(-j)];
        }
        if (j > n) {
            const GhostRule g = right_ghost_rule(space);
            return g.sign[field] * f[g.source[field]][static_cast<std::size_t>(2 * n - j)];
        }
        return f[field][static_cast<std::size_t>(j)];
    }

    /// Sixth-order central first derivative in the coordinate r.
    double d_r(int field, long k) const {
        return (at(field, k + 3) - 9.0 * at(field, k + 2) + 45.0 * at(field, k + 1) - 45.0 * at(field, k - 1) +
                9.0 * at(field, k - 2) - at(field, k - 3)) /
               (60.0 * dr);
    }

    /// Sixth-order central second derivative in the coordinate r.
    double d_rr(int field, long k) const {
        return (2.0 * (at(field, k + 3) + at(field, k - 3)) - 27.0 * (at(field, k + 2) + at(field, k - 2)) +
                270.0 * (at(field, k + 1) + at(field, k - 1)) - 490.0 * at(field, k)) /
               (180.0 * dr * dr);
    }

    /// Jets with respect to arclength ds = h dr at node k.
    ProfileJets arclength_jets(long k) const {
        const double h = at(kH, k);
        const double hr = d_r(kH, k);
        auto jet = [&](int field) {
            const double fr = d_r(field, k);
            const double frr = d_rr(field, k);
            return Jet{at(field, k), fr / h, (frr - fr * hr / h) / (h * h)};
        };
        return {jet(kPhi), jet(kPsi), jet(kXi)};
    }
};

/// Lagrange weights at x for nodes xs (small node counts only).
template <std::size_t M>
std::array<double, M> lagrange_weights(const std::array<double, M>& xs, double x) {
    std::array<double, M> w{};
    for (std::size_t i = 0; i < M; ++i) {
        double num = 1.0;
        double den = 1.0;
        for (std::size_t j = 0; j < M; ++j) {
            if (j == i) continue;
            num *= x - xs[j];
            den *= xs[i] - xs[j];
        }
        w[i] = num / den;
    }
    return w;
}

}  // namespace curvlab
