#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include "curvlab/error.hpp"
#include "curvlab/format.hpp"
#include "curvlab/grid.hpp"
#include "curvlab/gz.hpp"
#include "curvlab/profiles.hpp"

namespace curvlab {

/// Symmetric 2x2 matrix [[p, m], [m, q]].
struct Sym2 {
    double p = 0.0;
    double m = 0.0;
    double q = 0.0;

    Sym2 operator+(const Sym2& o) const { return {p + o.p, m + o.m, q + o.q}; }
    Sym2 operator-(const Sym2& o) const { return {p - o.p, m - o.m, q - o.q}; }
    Sym2 operator*(double c) const { return {c * p, c * m, c * q}; }
    double max_abs() const { return std::max({std::abs(p), std::abs(m), std::abs(q)}); }
};

/// Curvature operator along the geodesic in the basis
/// (e23, e01 | e31, e02 | e12, e03): diagonal entries are sectional
/// curvatures of coordinate planes, off-diagonal ones the mixed R_ijkl.
struct CurvatureBlocks {
    double r = 0.0;
    std::array<Sym2, 3> R;

    CurvatureBlocks operator*(double c) const { return {r, {R[0] * c, R[1] * c, R[2] * c}}; }
    CurvatureBlocks operator+(const CurvatureBlocks& o) const { return {r, {R[0] + o.R[0], R[1] + o.R[1], R[2] + o.R[2]}}; }
    CurvatureBlocks operator-(const CurvatureBlocks& o) const { return {r, {R[0] - o.R[0], R[1] - o.R[1], R[2] - o.R[2]}}; }
    double max_abs() const { return std::max({R[0].max_abs(), R[1].max_abs(), R[2].max_abs()}); }
    double bianchi_sum() const { return R[0].m + R[1].m + R[2].m; }
};

/// Ricci curvatures of the orthonormal frame e0 (radial), e1, e2, e3 (Killing).
struct RicciDiagonal {
    double r = 0.0;
    std::array<double, 4> ric{};
};

struct CurvatureOptions {
    /// Allowed disagreement between the cubic and quadratic pole extrapolants,
    /// relative to 1 + |value|.
    double pole_tol = 1e-3;
};

/// Blocks from values and arclength derivatives at a regular point.
inline CurvatureBlocks blocks_from_jets(const ProfileJets& j, double r = 0.0) {
    const double x = j.phi.v, y = j.psi.v, z = j.xi.v;
    const double x1 = j.phi.d1, y1 = j.psi.d1, z1 = j.xi.d1;
    const double x2 = x * x, y2 = y * y, z2 = z * z;
    const double den = 4.0 * x2 * y2 * z2;
    CurvatureBlocks b;
    b.r = r;
    b.R[0].p = (y2 * y2 + z2 * z2 - x2 * x2 + 2.0 * (z2 - x2) * (x2 - y2)) / den - y1 * z1 / (y * z);
    b.R[0].m = y1 * (y2 + x2 - z2) / (2.0 * x * y2 * z) + z1 * (z2 + x2 - y2) / (2.0 * x * y * z2) - x1 / (y * z);
    b.R[0].q = -j.phi.d2 / x;
    b.R[1].p = (x2 * x2 + z2 * z2 - y2 * y2 + 2.0 * (x2 - y2) * (y2 - z2)) / den - x1 * z1 / (x * z);
    b.R[1].m = x1 * (x2 + y2 - z2) / (2.0 * x2 * y * z) + z1 * (z2 + y2 - x2) / (2.0 * x * y * z2) - y1 / (x * z);
    b.R[1].q = -j.psi.d2 / y;
    b.R[2].p = (x2 * x2 + y2 * y2 - z2 * z2 + 2.0 * (y2 - z2) * (z2 - x2)) / den - x1 * y1 / (x * y);
    b.R[2].m = x1 * (x2 + z2 - y2) / (2.0 * x2 * y * z) + y1 * (y2 + z2 - x2) / (2.0 * x * y2 * z) - z1 / (x * y);
    b.R[2].q = -j.xi.d2 / z;
    return b;
}

inline RicciDiagonal ricci_from_blocks(const CurvatureBlocks& b) {
    const auto& [r1, r2, r3] = b.R;
    return {b.r, {r1.q + r2.q + r3.q, r1.q + r3.p + r2.p, r2.q + r3.p + r1.p, r3.q + r2.p + r1.p}};
}

/// Hodge star on 2-vectors in the same basis: three copies of [[0, 1], [1, 0]].
inline std::array<Sym2, 3> hodge_star() { return {Sym2{0.0, 1.0, 0.0}, Sym2{0.0, 1.0, 0.0}, Sym2{0.0, 1.0, 0.0}}; }

/// Index pairs of the six basis 2-vectors, in block order.
inline constexpr std::array<std::array<int, 2>, 6> kBasisPlanes{
    {{2, 3}, {0, 1}, {3, 1}, {0, 2}, {1, 2}, {0, 3}}};

/// 6x6 matrix of the curvature operator in the block basis.
inline std::array<std::array<double, 6>, 6> operator_matrix(const CurvatureBlocks& b) {
    std::array<std::array<double, 6>, 6> M{};
    for (int i = 0; i < 3; ++i) {
        M[2 * i][2 * i] = b.R[i].p;
        M[2 * i][2 * i + 1] = M[2 * i + 1][2 * i] = b.R[i].m;
        M[2 * i + 1][2 * i + 1] = b.R[i].q;
    }
    return M;
}

/// Full tensor R(e_a, e_b, e_c, e_d) = <R(e_a ^ e_b), e_c ^ e_d>.
inline std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> curvature_tensor(const CurvatureBlocks& b) {
    const auto M = operator_matrix(b);
    // e_a ^ e_b as (basis index, sign); index -1 for a == b.
    auto locate = [](int a, int c) -> std::pair<int, double> {
        for (int k = 0; k < 6; ++k) {
            if (kBasisPlanes[k][0] == a && kBasisPlanes[k][1] == c) return {k, 1.0};
            if (kBasisPlanes[k][0] == c && kBasisPlanes[k][1] == a) return {k, -1.0};
        }
        return {-1, 0.0};
    };
    std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> T{};
    for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d)
                for (int e = 0; e < 4; ++e) {
                    const auto [i, si] = locate(a, c);
                    const auto [j, sj] = locate(d, e);
                    if (i >= 0 && j >= 0) T[a][c][d][e] = si * sj * M[i][j];
                }
    return T;
}

/// Ric(e_i, e_j) = sum_k R(e_i, e_k, e_j, e_k), summed over the full tensor.
inline std::array<std::array<double, 4>, 4> ricci_frame_sums(const CurvatureBlocks& b) {
    const auto T = curvature_tensor(b);
    std::array<std::array<double, 4>, 4> ric{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) ric[i][j] += T[i][k][j][k];
    return ric;
}

namespace detail {

/// Quintic extrapolation from samples at distances 1..6 (in units of the
/// spacing) to distance x, checked against the quartic through 1..5.
inline CurvatureBlocks extrapolate_pole(const std::array<CurvatureBlocks, 6>& v, double x, double tol, double r) {
    const auto w6 = lagrange_weights<6>({1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, x);
    const auto w5 = lagrange_weights<5>({1.0, 2.0, 3.0, 4.0, 5.0}, x);
    CurvatureBlocks c6 = v[0] * w6[0];
    CurvatureBlocks c5 = v[0] * w5[0];
    for (int k = 1; k < 6; ++k) c6 = c6 + v[k] * w6[k];
    for (int k = 1; k < 5; ++k) c5 = c5 + v[k] * w5[k];
    c6.r = r;
    const double gap = (c6 - c5).max_abs();
    if (!(gap <= tol * (1.0 + c6.max_abs())))
        throw Error(ErrorCode::PoleEvaluationFailed,
                    "pole extrapolants disagree by " + fmt17(gap) + " at r = " + fmt17(r));
    return c6;
}

}  // namespace detail

/// Blocks at every node of a field set (lapse h allowed), the two pole nodes
/// by extrapolation from the six nearest interior nodes.
inline std::vector<CurvatureBlocks> node_blocks(const FieldSet& fs, const CurvatureOptions& opt = {}) {
    const long n = static_cast<long>(fs.intervals());
    std::vector<CurvatureBlocks> out(static_cast<std::size_t>(n + 1));
    for (long k = 1; k < n; ++k)
        out[static_cast<std::size_t>(k)] = blocks_from_jets(fs.arclength_jets(k), static_cast<double>(k) * fs.dr);
    auto at = [&](long k) { return out[static_cast<std::size_t>(k)]; };
    out[0] = detail::extrapolate_pole({at(1), at(2), at(3), at(4), at(5), at(6)}, 0.0, opt.pole_tol, 0.0);
    out[static_cast<std::size_t>(n)] =
        detail::extrapolate_pole({at(n - 1), at(n - 2), at(n - 3), at(n - 4), at(n - 5), at(n - 6)}, 0.0,
                                 opt.pole_tol, static_cast<double>(n) * fs.dr);
    return out;
}

/// Blocks at all nodes of a sampled triple (closed forms are sampled on n intervals).
inline std::vector<CurvatureBlocks> curvature_profile(const ProfileTriple& p, std::size_t n = 1024,
                                                      const CurvatureOptions& opt = {}) {
    const ProfileTriple s = sample(p, p.sampled() ? p.samples().intervals() : n);
    std::vector<CurvatureBlocks> out = node_blocks(s.fields(), opt);
    out.back().r = s.length();
    return out;
}

/// Blocks at r in [0, L]. Sampled triples use finite differences (4-point
/// interpolation between nodes); closed forms use their exact derivatives,
/// extrapolated within L/1024 of a pole.
inline CurvatureBlocks curvature_blocks(const ProfileTriple& p, double r, const CurvatureOptions& opt = {}) {
    const double L = p.length();
    if (!(r >= -1e-12 * L && r <= L * (1.0 + 1e-12)))
        throw Error(ErrorCode::OutOfRange, "r = " + fmt17(r) + " outside [0, L]");
    r = std::clamp(r, 0.0, L);
    if (p.sampled()) {
        const auto& s = p.samples();
        const std::vector<CurvatureBlocks> nodes = node_blocks(p.fields(), opt);
        const long n = static_cast<long>(s.intervals());
        const double x = r / s.dr;
        const double k = std::round(x);
        if (std::abs(x - k) < 1e-9) {
            CurvatureBlocks b = nodes[static_cast<std::size_t>(k)];
            b.r = r;
            return b;
        }
        const long j0 = std::clamp(static_cast<long>(std::floor(x)) - 1, 0L, n - 3);
        std::array<double, 4> xs{};
        for (int i = 0; i < 4; ++i) xs[i] = static_cast<double>(j0 + i);
        const auto w = lagrange_weights<4>(xs, x);
        CurvatureBlocks b{r, {}};
        for (int i = 0; i < 4; ++i) b = b + nodes[static_cast<std::size_t>(j0 + i)] * w[i];
        b.r = r;
        return b;
    }
    const double delta = L / 1024.0;
    const double d0 = r;
    const double dL = L - r;
    if (d0 >= delta && dL >= delta) return blocks_from_jets(p.closed_form()(r, dL), r);
    const bool left = d0 < dL;
    std::array<CurvatureBlocks, 6> v;
    for (int k = 0; k < 6; ++k) {
        const double rk = left ? (k + 1) * delta : L - (k + 1) * delta;
        v[k] = blocks_from_jets(p.closed_form()(rk, L - rk), rk);
    }
    return detail::extrapolate_pole(v, (left ? d0 : dL) / delta, opt.pole_tol, r);
}

inline RicciDiagonal ricci_diagonal(const ProfileTriple& p, double r, const CurvatureOptions& opt = {}) {
    return ricci_from_blocks(curvature_blocks(p, r, opt));
}

/// Curvature of the round-torus-fibred S^3 metric dr^2 + phi^2 dth1^2 + xi^2 dth2^2:
/// the diagonal curvature operator entries -phi''/phi, -xi''/xi, -phi'xi'/(phi xi).
inline std::array<double, 3> s3_torus_curvature(const std::function<Jet(double)>& phi,
                                                const std::function<Jet(double)>& xi, double r) {
    const Jet f = phi(r);
    const Jet g = xi(r);
    return {-f.d2 / f.v, -g.d2 / g.v, -f.d1 * g.d1 / (f.v * g.v)};
}

/// Grove-Ziller blocks in terms of phi alone, valid on (0, r_max_minus].
inline CurvatureBlocks gz_blocks_closed_form(const GZParams& params, const ProfileTriple& p, double r) {
    if (!(r > 0.0 && r <= params.space.r_max_minus * (1.0 + 1e-12)))
        throw Error(ErrorCode::OutOfRange, "r = " + fmt17(r) + " outside (0, r_max_minus]");
    const Jet f = p.exact_jets(r).phi;
    const double b2 = params.b * params.b;
    const double b4 = b2 * b2;
    CurvatureBlocks out;
    out.r = r;
    out.R[0] = {(4.0 * b2 - 3.0 * f.v * f.v) / (4.0 * b4), -f.d1 / b2, -f.d2 / f.v};
    out.R[1] = {f.v * f.v / (4.0 * b4), f.d1 / (2.0 * b2), 0.0};
    out.R[2] = out.R[1];
    return out;
}

struct InequalityCheck {
    double min_value = std::numeric_limits<double>::infinity();
    double r_at_min = 0.0;
    bool pass = false;
};

/// min over nodes in (0, r_max_minus] of (4b^2 - 3 phi^2)(-phi'') - 9 phi phi'^2.
/// Uses exact derivatives when the triple carries them.
inline InequalityCheck gz_inequality_check(const GZParams& params, const ProfileTriple& p, double tol = 1e-8) {
    const ProfileTriple s = sample(p, p.sampled() ? p.samples().intervals() : 2048);
    const auto& d = s.samples();
    const FieldSet fs = s.fields();
    const double b2 = params.b * params.b;
    InequalityCheck out;
    for (std::size_t k = 1; k <= d.intervals(); ++k) {
        const double r = d.node(k);
        if (r > params.space.r_max_minus * (1.0 + 1e-12)) break;
        const Jet f = d.exact.empty() ? fs.arclength_jets(static_cast<long>(k)).phi : d.exact[k].phi;
        const double v = (4.0 * b2 - 3.0 * f.v * f.v) * (-f.d2) - 9.0 * f.v * f.d1 * f.d1;
        if (v < out.min_value) {
            out.min_value = v;
            out.r_at_min = r;
        }
    }
    out.pass = out.min_value >= -tol;
    return out;
}

/// CSV `r,R1_11,R1_12,R1_22,R2_11,R2_12,R2_22,R3_11,R3_12,R3_22`.
inline void write_curvature_csv(std::ostream& os, const std::vector<CurvatureBlocks>& blocks) {
    os << "r,R1_11,R1_12,R1_22,R2_11,R2_12,R2_22,R3_11,R3_12,R3_22\n";
    for (const auto& b : blocks) {
        os << fmt17(b.r);
        for (const auto& s : b.R) os << ',' << fmt17(s.p) << ',' << fmt17(s.m) << ',' << fmt17(s.q);
        os << '\n';
    }
}

}  // namespace curvlab
