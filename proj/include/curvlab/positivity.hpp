#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/gz.hpp"
#include "curvlab/profiles.hpp"

namespace curvlab {

/// {tau : R + tau * star is positive semidefinite}, a closed interval or empty.
struct TauInterval {
    bool empty = true;
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return empty ? 0.0 : hi - lo; }
};

enum class Verdict { StrictlyPositive, NonnegativeOnly, Mixed };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::StrictlyPositive: return "StrictlyPositive";
        case Verdict::NonnegativeOnly: return "NonnegativeOnly";
        case Verdict::Mixed: return "Mixed";
    }
    return "?";
}

struct PositivityCertificate {
    Verdict verdict = Verdict::Mixed;
    bool has_witness = false;
    double witness_tau = 0.0;
    TauInterval interval;
    /// Largest smallest eigenvalue of R + tau * star: at the witness when
    /// there is one, over all tau otherwise.
    double margin = 0.0;
};

struct PositivityOptions {
    /// Relative tolerance for degenerate intervals and for slightly negative
    /// diagonal entries produced by finite differences.
    double degenerate_tol = 1e-9;
};

/// Smallest eigenvalue of [[p, m + tau], [m + tau, q]].
inline double min_eig(const Sym2& s, double tau = 0.0) {
    const double h = 0.5 * (s.p - s.q);
    return 0.5 * (s.p + s.q) - std::hypot(h, s.m + tau);
}

inline double min_eig(const CurvatureBlocks& b, double tau) {
    return std::min({min_eig(b.R[0], tau), min_eig(b.R[1], tau), min_eig(b.R[2], tau)});
}

/// Per block: empty if a diagonal entry is negative, else
/// [-m - sqrt(pq), -m + sqrt(pq)]; intersected over the three blocks.
inline TauInterval tau_interval(const CurvatureBlocks& b, const PositivityOptions& opt = {}) {
    const double scale = 1.0 + b.max_abs();
    TauInterval out{false, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const Sym2& s : b.R) {
        if (s.p < -opt.degenerate_tol * scale || s.q < -opt.degenerate_tol * scale) return {};
        const double w = std::sqrt(std::max(0.0, s.p) * std::max(0.0, s.q));
        out.lo = std::max(out.lo, -s.m - w);
        out.hi = std::min(out.hi, -s.m + w);
    }
    if (out.lo > out.hi) {
        if (out.lo - out.hi > opt.degenerate_tol * (1.0 + std::abs(out.lo) + std::abs(out.hi))) return {};
        const double c = 0.5 * (out.lo + out.hi);
        out.lo = out.hi = c;
    }
    return out;
}

struct TauOptimum {
    double tau_star = 0.0;
    double margin = 0.0;
};

/// max over tau in [-T, T], T = 10 max|entry| + 1, of the concave function
/// lambda_min(R + tau * star), by golden-section search.
inline TauOptimum max_min_eig(const CurvatureBlocks& b) {
    const double T = 10.0 * b.max_abs() + 1.0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = -T, hi = T;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = min_eig(b, x1), f2 = min_eig(b, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * T; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = min_eig(b, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = min_eig(b, x1);
        }
    }
    const double t = 0.5 * (lo + hi);
    return {t, min_eig(b, t)};
}

inline PositivityCertificate certify(const CurvatureBlocks& b, const PositivityOptions& opt = {}) {
    PositivityCertificate c;
    c.interval = tau_interval(b, opt);
    if (c.interval.empty) {
        c.verdict = Verdict::Mixed;
        c.margin = max_min_eig(b).margin;
        return c;
    }
    c.has_witness = true;
    c.witness_tau = 0.5 * (c.interval.lo + c.interval.hi);
    c.margin = min_eig(b, c.witness_tau);
    const double w = c.interval.width();
    const bool degenerate = w < opt.degenerate_tol * (1.0 + std::abs(c.interval.lo) + std::abs(c.interval.hi));
    c.verdict = degenerate || !(c.margin > 0.0) ? Verdict::NonnegativeOnly : Verdict::StrictlyPositive;
    return c;
}

/// Unit simple 2-vector X ^ Y in the block basis (e23, e01, e31, e02, e12, e03).
struct Plane {
    std::array<double, 6> sigma{};
    /// Index into the block basis for coordinate planes, -1 for sampled ones.
    int coordinate = -1;
};

inline std::array<double, 6> wedge(const std::array<double, 4>& x, const std::array<double, 4>& y) {
    std::array<double, 6> s{};
    for (int k = 0; k < 6; ++k) {
        const int i = kBasisPlanes[k][0], j = kBasisPlanes[k][1];
        s[k] = x[i] * y[j] - x[j] * y[i];
    }
    return s;
}

/// <R sigma, sigma>.
inline double sectional(const CurvatureBlocks& b, const std::array<double, 6>& s) {
    double v = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double u = s[2 * i], w = s[2 * i + 1];
        v += b.R[i].p * u * u + 2.0 * b.R[i].m * u * w + b.R[i].q * w * w;
    }
    return v;
}

/// <star sigma, sigma>; vanishes exactly on simple 2-vectors.
inline double star_pairing(const std::array<double, 6>& s) { return 2.0 * (s[0] * s[1] + s[2] * s[3] + s[4] * s[5]); }

inline std::string plane_name(int coordinate) {
    static constexpr std::array<std::string_view, 6> names{"e2^e3", "e0^e1", "e3^e1", "e0^e2", "e1^e2", "e0^e3"};
    return coordinate >= 0 ? std::string(names[static_cast<std::size_t>(coordinate)]) : std::string("sampled");
}

struct SampledMinimum {
    double min_sec = 0.0;
    Plane plane;
};

/// Minimum of sec over the six coordinate planes and n random planes spanned
/// by Gram-Schmidt-orthonormalized Gaussian pairs (mt19937_64 seeded by `seed`).
inline SampledMinimum min_sec_bruteforce(const CurvatureBlocks& b, std::size_t n, std::uint64_t seed = 0) {
    SampledMinimum out;
    out.min_sec = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 6; ++k) {
        Plane p;
        p.sigma[static_cast<std::size_t>(k)] = 1.0;
        p.coordinate = k;
        const double v = sectional(b, p.sigma);
        if (v < out.min_sec) out = {v, p};
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (std::size_t i = 0; i < n; ++i) {
        std::array<double, 4> x{}, y{};
        for (auto& v : x) v = gauss(rng);
        for (auto& v : y) v = gauss(rng);
        double nx = 0.0;
        for (double v : x) nx += v * v;
        nx = std::sqrt(nx);
        for (auto& v : x) v /= nx;
        double d = 0.0;
        for (int k = 0; k < 4; ++k) d += x[k] * y[k];
        for (int k = 0; k < 4; ++k) y[k] -= d * x[k];
        double ny = 0.0;
        for (double v : y) ny += v * v;
        ny = std::sqrt(ny);
        if (!(ny > 1e-12)) continue;
        for (auto& v : y) v /= ny;
        Plane p;
        p.sigma = wedge(x, y);
        const double v = sectional(b, p.sigma);
        if (v < out.min_sec) out = {v, p};
    }
    return out;
}

/// The explicit tau_s(r) making R_s + tau_s * star positive definite for small s:
/// the Grove-Ziller witness shifted by a locally constant multiple of s. On S^4
/// the plus half mirrors the minus half, which flips the sign of tau.
inline double explicit_tau_witness(const GZParams& params, double s, double r) {
    const double b = params.b;
    const double b2 = b * b, b3 = b2 * b;
    const ProfileJets j = gz_jets(params, r, params.space.L - r);
    const bool minus = r <= params.space.r_max_minus;
    if (params.space.name == Space::S4) {
        const double c = 2.0 * (std::numbers::sqrt3 - b) / b3;
        return minus ? -j.phi.d1 / (2.0 * b2) + c * s : -j.xi.d1 / (2.0 * b2) - c * s;
    }
    if (minus) return -j.phi.d1 / (2.0 * b2) + (3.0 / (2.0 * b) + (1.0 - b) / b3) * s;
    // The plus-half shift is stated for the orientation of z = L - r.
    return -j.xi.d1 / (2.0 * b2) - (std::numbers::sqrt2 - 2.0 * b) / b3 * s;
}

struct ExpansionRow {
    int block = 0;           // 1..3
    std::string entry;       // eta, mu, nu
    double r = 0.0;
    double slope = 0.0;      // one-sided difference quotient of the entry in s at s = 0
    double expected = 0.0;   // leading coefficient
    double rel_error = 0.0;
};

namespace detail {

/// Evaluates f at distances 1..4 delta from the pole and extrapolates to r
/// when r is closer than delta; f must be smooth up to the pole.
template <class F>
auto near_pole(F f, double r, double L) {
    const double delta = L / 1024.0;
    const double d0 = r, dL = L - r;
    if (d0 >= delta && dL >= delta) return f(r);
    const bool left = d0 < dL;
    const auto w = lagrange_weights<4>({1.0, 2.0, 3.0, 4.0}, (left ? d0 : dL) / delta);
    auto acc = f(left ? delta : L - delta) * w[0];
    for (int k = 1; k < 4; ++k) acc = acc + f(left ? (k + 1) * delta : L - (k + 1) * delta) * w[k];
    return acc;
}

struct Coeffs {
    double eta = 0.0, mu = 0.0, nu = 0.0;
    Coeffs operator*(double c) const { return {eta * c, mu * c, nu * c}; }
    Coeffs operator+(const Coeffs& o) const { return {eta + o.eta, mu + o.mu, nu + o.nu}; }
};

}  // namespace detail

/// Difference quotients in s at s = 0 of the block entries of R_s, the
/// curvature of (1 - s) g_GZ + s g_standard, against the leading
/// coefficients of their expansions. Block 1 on the minus half is compared
/// with the exact first-order coefficient; the other blocks with its limit at
/// the nearer pole (minus half: blocks 2, 3; CP^2 plus half: blocks 1, 2).
inline std::vector<ExpansionRow> expansion_check(const GZParams& params, double r, double h = 1e-4) {
    const SpaceKind& sp = params.space;
    const ProfileTriple g0 = gz_closed_form(params);
    const ProfileTriple g1 = standard_profiles(sp);
    const double b = params.b;
    const double b2 = b * b, b3 = b2 * b;
    const double L = sp.L;

    auto blocks = [&](double s) { return curvature_blocks(interpolate(s, g0, g1), r); };
    const CurvatureBlocks R0 = blocks(0.0);
    const CurvatureBlocks slope = (blocks(h) * 4.0 - R0 * 3.0 - blocks(2.0 * h)) * (0.5 / h);

    std::vector<ExpansionRow> rows;
    auto add = [&](int block, const char* entry, double got, double want) {
        rows.push_back({block, entry, r, got, want, std::abs(got - want) / std::abs(want)});
    };
    const bool minus = r <= sp.r_max_minus;
    if (minus) {
        auto first_block = [&](double x) {
            const ProfileJets j0 = g0.exact_jets(x);
            const ProfileJets j1 = g1.exact_jets(x);
            const double f0 = j0.phi.v, f0p = j0.phi.d1, f0pp = j0.phi.d2;
            const double dphi = j1.phi.v - f0, dphip = j1.phi.d1 - f0p;
            const double dsum = (j1.psi.v - j0.psi.v) + (j1.xi.v - j0.xi.v);
            return detail::Coeffs{
                3.0 * f0 / (2.0 * b2 * b3) * (f0 * dsum - b * dphi) - dsum / b3,
                f0 * (j1.psi.d1 + j1.xi.d1) / (2.0 * b3) - dphip / b2 + f0p / b3 * dsum,
                (-j1.phi.d2 * f0 + f0pp * j1.phi.v) / (f0 * f0)};
        };
        const detail::Coeffs c1 = detail::near_pole(first_block, r, L);
        add(1, "eta", slope.R[0].p, c1.eta);
        add(1, "mu", slope.R[0].m, c1.mu);
        add(1, "nu", slope.R[0].q, c1.nu);
        if (sp.name == Space::S4) {
            const double e = std::numbers::sqrt3 / b;
            const double m = -2.0 * (std::numbers::sqrt3 - b) / b3;
            for (int i = 1; i < 3; ++i) {
                add(i + 1, "eta", slope.R[i].p, e);
                add(i + 1, "mu", slope.R[i].m, m);
                add(i + 1, "nu", slope.R[i].q, e);
            }
        } else {
            add(2, "eta", slope.R[1].p, 1.0 / b);
            add(2, "mu", slope.R[1].m, -3.0 / (2.0 * b) - (1.0 - b) / b3);
            add(2, "nu", slope.R[1].q, 1.0 / b);
            add(3, "eta", slope.R[2].p, 4.0 / b);
            add(3, "mu", slope.R[2].m, 3.0 / (2.0 * b) - (1.0 - b) / b3);
            add(3, "nu", slope.R[2].q, 4.0 / b);
        }
    } else if (sp.name == Space::CP2) {
        // Coefficients in terms of z = L - r: reversing e0 flips the sign of
        // the off-diagonal entries.
        const double e = 1.0 / (b * std::numbers::sqrt2);
        const double m = -(std::numbers::sqrt2 - 2.0 * b) / b3;
        for (int i = 0; i < 2; ++i) {
            add(i + 1, "eta", slope.R[i].p, e);
            add(i + 1, "mu", -slope.R[i].m, m);
            add(i + 1, "nu", slope.R[i].q, e);
        }
    }
    return rows;
}

}  // namespace curvlab
