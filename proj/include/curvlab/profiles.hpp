#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "curvlab/error.hpp"
#include "curvlab/format.hpp"
#include "curvlab/grid.hpp"
#include "curvlab/space.hpp"

namespace curvlab {

/// Jets at a point given both as r and as its distance z = L - r to the far
/// pole; callers pass whichever of the two is more accurate for each.
using ClosedForm = std::function<ProfileJets(double r, double z)>;

/// phi, psi, xi at r_k = k * dr, k = 0..N. `exact` optionally carries
/// analytically known derivatives at the same nodes (empty otherwise).
struct SampledProfiles {
    double dr = 0.0;
    std::vector<double> phi;
    std::vector<double> psi;
    std::vector<double> xi;
    std::vector<ProfileJets> exact;

    std::size_t intervals() const { return phi.size() - 1; }
    double node(std::size_t k) const { return static_cast<double>(k) * dr; }
};

/// The metric dr^2 + phi^2 Q|n1 + psi^2 Q|n2 + xi^2 Q|n3 on [0, length].
class ProfileTriple {
public:
    ProfileTriple(SpaceKind space, double length, ClosedForm f)
        : space_(space), length_(length), repr_(std::move(f)) {}

    ProfileTriple(SpaceKind space, double length, SampledProfiles s)
        : space_(space), length_(length), repr_(std::move(s)) {
        const auto& p = std::get<SampledProfiles>(repr_);
        if (p.phi.size() < 9 || p.psi.size() != p.phi.size() || p.xi.size() != p.phi.size())
            throw Error(ErrorCode::GridMismatch, "sampled profiles need equal arrays with at least 9 nodes");
        if (!p.exact.empty() && p.exact.size() != p.phi.size())
            throw Error(ErrorCode::GridMismatch, "exact jets do not match the grid");
    }

    const SpaceKind& space() const { return space_; }
    double length() const { return length_; }
    bool sampled() const { return std::holds_alternative<SampledProfiles>(repr_); }

    const ClosedForm& closed_form() const { return std::get<ClosedForm>(repr_); }
    const SampledProfiles& samples() const { return std::get<SampledProfiles>(repr_); }

    /// Exact jets at r for closed forms; sampled triples answer only at nodes
    /// that carry exact jets.
    ProfileJets exact_jets(double r) const {
        if (!sampled()) return closed_form()(r, length_ - r);
        const auto& s = samples();
        if (s.exact.empty()) throw Error(ErrorCode::OutOfRange, "sampled triple carries no exact derivatives");
        return s.exact[nearest_node(r)];
    }

    /// Index of the grid node at r; throws if r is not (close to) a node.
    std::size_t nearest_node(double r) const {
        const auto& s = samples();
        const double x = r / s.dr;
        const double k = std::round(x);
        if (std::abs(x - k) > 1e-6 || k < 0 || k > static_cast<double>(s.intervals()))
            throw Error(ErrorCode::OutOfRange, "r = " + fmt17(r) + " is not a grid node");
        return static_cast<std::size_t>(k);
    }

    FieldSet fields() const {
        const auto& s = samples();
        FieldSet fs;
        fs.space = space_.name;
        fs.dr = s.dr;
        fs.f[kH].assign(s.phi.size(), 1.0);
        fs.f[kPhi] = s.phi;
        fs.f[kPsi] = s.psi;
        fs.f[kXi] = s.xi;
        return fs;
    }

private:
    SpaceKind space_;
    double length_;
    std::variant<ClosedForm, SampledProfiles> repr_;
};

/// Round metric (sec = 1) on S^4 or Fubini-Study metric (1 <= sec <= 4) on CP^2.
inline ProfileTriple standard_profiles(const SpaceKind& space) {
    // xi is written in terms of z so that it keeps full relative precision near r = L.
    if (space.name == Space::S4) {
        const double L = space.L;
        return {space, L, [L](double r, double z) {
                    const double c = std::cos(r);
                    const double s = std::sin(r);
                    const double cp = std::cos(r - L / 2.0);
                    const double sp = std::sin(r - L / 2.0);
                    const double cx = std::cos(z);
                    const double sx = std::sin(z);
                    return ProfileJets{{2.0 * s, 2.0 * c, -2.0 * s}, {2.0 * cp, -2.0 * sp, -2.0 * cp},
                                       {2.0 * sx, -2.0 * cx, -2.0 * sx}};
                }};
    }
    const double L = space.L;
    return {space, L, [](double r, double z) {
                const double c = std::cos(r);
                const double s = std::sin(r);
                const double c2 = std::sin(2.0 * z);
                const double s2 = std::cos(2.0 * z);
                return ProfileJets{{s, c, -s}, {c, -s, -c}, {c2, -2.0 * s2, -4.0 * c2}};
            }};
}

/// Samples a closed-form triple on N uniform intervals, keeping exact jets.
inline ProfileTriple sample(const ProfileTriple& p, std::size_t n) {
    if (p.sampled()) {
        if (p.samples().intervals() != n) throw Error(ErrorCode::GridMismatch, "cannot resample a sampled triple");
        return p;
    }
    if (n < 8) throw Error(ErrorCode::GridMismatch, "grid needs at least 8 intervals");
    SampledProfiles s;
    s.dr = p.length() / static_cast<double>(n);
    s.phi.resize(n + 1);
    s.psi.resize(n + 1);
    s.xi.resize(n + 1);
    s.exact.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double r = k == n ? p.length() : s.node(k);
        const ProfileJets j = p.closed_form()(r, static_cast<double>(n - k) * s.dr);
        s.phi[k] = j.phi.v;
        s.psi[k] = j.psi.v;
        s.xi[k] = j.xi.v;
        s.exact[k] = j;
    }
    return {p.space(), p.length(), std::move(s)};
}

/// Pointwise (1 - s) p0 + s p1. Mixed closed/sampled inputs are combined on
/// the sampled grid.
inline ProfileTriple interpolate(double s, const ProfileTriple& p0, const ProfileTriple& p1) {
    if (!(p0.space() == p1.space()) || std::abs(p0.length() - p1.length()) > 1e-12 * p0.length())
        throw Error(ErrorCode::GridMismatch, "profiles live on different spaces or intervals");
    if (!p0.sampled() && !p1.sampled()) {
        return {p0.space(), p0.length(),
                [s, f0 = p0.closed_form(), f1 = p1.closed_form()](double r, double z) {
                    return affine(s, f0(r, z), f1(r, z));
                }};
    }
    const std::size_t n = p0.sampled() ? p0.samples().intervals() : p1.samples().intervals();
    const ProfileTriple a = sample(p0, n);
    const ProfileTriple b = sample(p1, n);
    const auto& sa = a.samples();
    const auto& sb = b.samples();
    SampledProfiles out;
    out.dr = sa.dr;
    out.phi.resize(n + 1);
    out.psi.resize(n + 1);
    out.xi.resize(n + 1);
    const bool jets = !sa.exact.empty() && !sb.exact.empty();
    if (jets) out.exact.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        out.phi[k] = (1.0 - s) * sa.phi[k] + s * sb.phi[k];
        out.psi[k] = (1.0 - s) * sa.psi[k] + s * sb.psi[k];
        out.xi[k] = (1.0 - s) * sa.xi[k] + s * sb.xi[k];
        if (jets) out.exact[k] = affine(s, sa.exact[k], sb.exact[k]);
    }
    return {p0.space(), p0.length(), std::move(out)};
}

/// Homothety g -> lambda^2 g: the triple lambda * f(r / lambda) on [0, lambda L].
inline ProfileTriple rescale(const ProfileTriple& p, double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidParams, "rescale factor must be positive");
    auto scale = [lambda](ProfileJets j) {
        for (Jet* x : {&j.phi, &j.psi, &j.xi}) {
            x->v *= lambda;
            x->d2 /= lambda;
        }
        return j;
    };
    if (!p.sampled()) {
        return {p.space(), lambda * p.length(),
                [lambda, scale, f = p.closed_form()](double r, double z) { return scale(f(r / lambda, z / lambda)); }};
    }
    SampledProfiles s = p.samples();
    s.dr *= lambda;
    for (auto* v : {&s.phi, &s.psi, &s.xi})
        for (double& x : *v) x *= lambda;
    for (auto& j : s.exact) j = scale(j);
    return {p.space(), lambda * p.length(), std::move(s)};
}

/// CSV `r,phi,psi,xi`, one row per node.
inline void write_profile_csv(std::ostream& os, const ProfileTriple& p, std::size_t n) {
    const ProfileTriple s = sample(p, n);
    const auto& d = s.samples();
    os << "r,phi,psi,xi\n";
    for (std::size_t k = 0; k <= n; ++k)
        os << fmt17(d.node(k)) << ',' << fmt17(d.phi[k]) << ',' << fmt17(d.psi[k]) << ',' << fmt17(d.xi[k]) << '\n';
}

}  // namespace curvlab
