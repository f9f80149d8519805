#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "curvlab/curvature.hpp"
#include "curvlab/profiles.hpp"

namespace oracle {

using Values = std::array<double, 3>;
using Profile = std::function<Values(double)>;
using Mat6 = std::array<std::array<double, 6>, 6>;

using Conn = std::array<std::array<std::array<double, 4>, 4>, 4>;

// Structure coefficients C[a][b][c] = <[e_a, e_b], e_c> of the frame
// e0 = d/dr, e_i = X_i / f_i with [X_i, X_j] = bracket * X_k (ijk cyclic).
inline Conn structure(const Values& f, const Values& fp, double bracket) {
    Conn C{};
    for (int i = 1; i <= 3; ++i) {
        C[0][i][i] = -fp[i - 1] / f[i - 1];
        C[i][0][i] = fp[i - 1] / f[i - 1];
    }
    for (int i = 1; i <= 3; ++i) {
        const int j = i % 3 + 1, k = j % 3 + 1;
        const double c = bracket * f[k - 1] / (f[i - 1] * f[j - 1]);
        C[i][j][k] = c;
        C[j][i][k] = -c;
    }
    return C;
}

// Koszul: Gamma[a][b][c] = <nabla_{e_a} e_b, e_c>.
inline Conn christoffel(const Conn& C) {
    Conn G{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) G[a][b][c] = 0.5 * (C[a][b][c] - C[b][c][a] + C[c][a][b]);
    return G;
}

// Curvature operator in the plane basis of curvlab::kBasisPlanes from
// profile values only; r-derivatives by fourth-order differences with step h.
inline Mat6 frame_curvature(const Profile& p, double r, double bracket, double h = 1e-3) {
    auto deriv = [&](double x) {
        const Values a = p(x - 2 * h), b = p(x - h), c = p(x + h), d = p(x + 2 * h);
        Values out{};
        for (int i = 0; i < 3; ++i) out[i] = (a[i] - 8 * b[i] + 8 * c[i] - d[i]) / (12 * h);
        return out;
    };
    auto gamma_at = [&](double x) { return christoffel(structure(p(x), deriv(x), bracket)); };
    const Conn C = structure(p(r), deriv(r), bracket);
    const Conn G = christoffel(C);
    const Conn Gm2 = gamma_at(r - 2 * h), Gm1 = gamma_at(r - h), Gp1 = gamma_at(r + h), Gp2 = gamma_at(r + 2 * h);
    Conn dG{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                dG[a][b][c] = (Gm2[a][b][c] - 8 * Gm1[a][b][c] + 8 * Gp1[a][b][c] - Gp2[a][b][c]) / (12 * h);

    // Rm(a, b, d, e) = <R(e_a, e_b) e_d, e_e>.
    auto Rm = [&](int a, int b, int d, int e) {
        double v = 0.0;
        if (a == 0) v += dG[b][d][e];
        if (b == 0) v -= dG[a][d][e];
        for (int c = 0; c < 4; ++c) {
            v += G[b][d][c] * G[a][c][e] - G[a][d][c] * G[b][c][e];
            v -= C[a][b][c] * G[c][d][e];
        }
        return v;
    };
    Mat6 M{};
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) {
            const auto& P = curvlab::kBasisPlanes[x];
            const auto& Q = curvlab::kBasisPlanes[y];
            M[x][y] = Rm(P[0], P[1], Q[1], Q[0]);
        }
    return M;
}

inline Profile values_of(const curvlab::ProfileTriple& t) {
    return [t](double r) {
        const curvlab::ProfileJets j = t.closed_form()(r, t.length() - r);
        return Values{j.phi.v, j.psi.v, j.xi.v};
    };
}

// c0 + c1 sin(w r + p) per function, positive on the whole line.
inline curvlab::ProfileTriple random_triple(std::mt19937_64& rng, const curvlab::SpaceKind& space) {
    std::uniform_real_distribution<double> amp(0.1, 0.6), base(0.8, 2.0), freq(0.5, 4.0), phase(0.0, 6.3);
    std::array<std::array<double, 4>, 3> c{};
    for (auto& f : c) f = {base(rng), amp(rng), freq(rng), phase(rng)};
    return {space, space.L, [c](double r, double) {
                auto jet = [r](const std::array<double, 4>& f) {
                    const double s = std::sin(f[2] * r + f[3]), co = std::cos(f[2] * r + f[3]);
                    return curvlab::Jet{f[0] + f[1] * s, f[1] * f[2] * co, -f[1] * f[2] * f[2] * s};
                };
                return curvlab::ProfileJets{jet(c[0]), jet(c[1]), jet(c[2])};
            }};
}

}  // namespace oracle
