#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvlab/format.hpp"
#include "curvlab/grid.hpp"
#include "curvlab/profiles.hpp"
#include "curvlab/space.hpp"

namespace curvlab {

struct SmoothnessCondition {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

/// Residuals of the six endpoint conditions (i)-(vi) for one space.
struct SmoothnessReport {
    std::array<SmoothnessCondition, 6> conditions;
    double tol = 0.0;

    bool pass() const {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
    }
    double max_residual() const {
        double m = 0.0;
        for (const auto& c : conditions) m = std::max(m, c.residual);
        return m;
    }
};

enum class Parity { Even, Odd, SquareTimesEven };

namespace detail {

inline constexpr int kFitNodes = 8;

/// Least-squares misfit (max abs) of samples at x_j = j / 7, j = 0..7, by a
/// polynomial of degree <= 6 with the given parity.
inline double parity_fit_residual(const std::array<double, kFitNodes>& v, Parity parity) {
    std::vector<int> powers;
    switch (parity) {
        case Parity::Even: powers = {0, 2, 4, 6}; break;
        case Parity::Odd: powers = {1, 3, 5}; break;
        case Parity::SquareTimesEven: powers = {2, 4, 6}; break;
    }
    Eigen::MatrixXd A(kFitNodes, static_cast<Eigen::Index>(powers.size()));
    Eigen::VectorXd y(kFitNodes);
    for (int j = 0; j < kFitNodes; ++j) {
        const double x = j / 7.0;
        for (std::size_t c = 0; c < powers.size(); ++c) A(j, static_cast<Eigen::Index>(c)) = std::pow(x, powers[c]);
        y(j) = v[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
    return (A * coef - y).cwiseAbs().maxCoeff();
}

/// Sixth-order one-sided derivative from samples f_0..f_6 spaced by h
/// away from the endpoint.
inline double one_sided_slope(const std::array<double, kFitNodes>& f, double h) {
    return (-147.0 * f[0] + 360.0 * f[1] - 450.0 * f[2] + 400.0 * f[3] - 225.0 * f[4] + 72.0 * f[5] - 10.0 * f[6]) /
           (60.0 * h);
}

}  // namespace detail

/// Checks the endpoint conditions on a field set with lapse h: slopes are
/// taken with respect to arclength, parities in the grid coordinate.
inline SmoothnessReport check_smoothness(const FieldSet& fs, const SpaceKind& space, double tol) {
    using detail::kFitNodes;
    const std::size_t n = fs.intervals();
    auto near = [&](int field, bool left) {
        std::array<double, kFitNodes> v{};
        for (int j = 0; j < kFitNodes; ++j)
            v[static_cast<std::size_t>(j)] = fs.f[field][left ? static_cast<std::size_t>(j) : n - static_cast<std::size_t>(j)];
        return v;
    };
    auto combine = [](const std::array<double, kFitNodes>& x, const std::array<double, kFitNodes>& y, double sign) {
        std::array<double, kFitNodes> c{};
        for (int j = 0; j < kFitNodes; ++j) c[j] = x[j] * x[j] + sign * y[j] * y[j];
        return c;
    };
    const auto phi0 = near(kPhi, true);
    const auto psi0 = near(kPsi, true);
    const auto xi0 = near(kXi, true);
    const auto phiL = near(kPhi, false);
    const auto psiL = near(kPsi, false);
    const auto xiL = near(kXi, false);

    // Slopes in arclength away from the pole; at r = L this is -xi'(L).
    const double slope0 = detail::one_sided_slope(phi0, fs.dr) / fs.f[kH].front();
    const double slopeL = detail::one_sided_slope(xiL, fs.dr) / fs.f[kH].back();

    SmoothnessReport rep;
    rep.tol = tol;
    const std::array<double, 6> res{
        std::max({std::abs(phi0[0]), std::abs(slope0 - space.pole_slope_0),
                  detail::parity_fit_residual(phi0, Parity::Odd)}),
        detail::parity_fit_residual(combine(psi0, xi0, 1.0), Parity::Even),
        detail::parity_fit_residual(combine(psi0, xi0, -1.0),
                                    space.name == Space::S4 ? Parity::Odd : Parity::SquareTimesEven),
        std::max({std::abs(xiL[0]), std::abs(-slopeL - space.pole_slope_L),
                  detail::parity_fit_residual(xiL, Parity::Odd)}),
        detail::parity_fit_residual(combine(psiL, phiL, 1.0), Parity::Even),
        detail::parity_fit_residual(combine(psiL, phiL, -1.0), Parity::Odd),
    };
    static constexpr std::array<const char*, 6> kNames{"i", "ii", "iii", "iv", "v", "vi"};
    for (std::size_t i = 0; i < 6; ++i) rep.conditions[i] = {kNames[i], res[i], res[i] < tol};
    return rep;
}

/// Closed forms are sampled on `n` intervals first.
inline SmoothnessReport check_smoothness(const ProfileTriple& p, double tol, std::size_t n = 1024) {
    const ProfileTriple s = sample(p, p.sampled() ? p.samples().intervals() : n);
    return check_smoothness(s.fields(), p.space(), tol);
}

/// JSON object {condition: {residual, pass}}.
inline void write_smoothness_json(std::ostream& os, const SmoothnessReport& rep) {
    os << "{\n";
    for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
        const auto& c = rep.conditions[i];
        os << "  \"" << c.name << "\": {\"residual\": " << fmt17(c.residual)
           << ", \"pass\": " << (c.pass ? "true" : "false") << "}" << (i + 1 < rep.conditions.size() ? "," : "") << '\n';
    }
    os << "}\n";
}

}  // namespace curvlab
