#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/format.hpp"
#include "curvlab/grid.hpp"
#include "curvlab/positivity.hpp"
#include "curvlab/profiles.hpp"
#include "curvlab/space.hpp"

namespace curvlab {

/// Metric h^2 dr^2 + phi^2 Q|n1 + psi^2 Q|n2 + xi^2 Q|n3 at time t on a fixed grid.
struct FlowState {
    SpaceKind space = SpaceKind::s4();
    double t = 0.0;
    FieldSet fields;

    std::size_t intervals() const { return fields.intervals(); }
    double node(std::size_t k) const { return static_cast<double>(k) * fields.dr; }
};

inline FlowState initial_state(const ProfileTriple& p, std::size_t n = 1024) {
    const ProfileTriple s = sample(p, p.sampled() ? p.samples().intervals() : n);
    return {p.space(), 0.0, s.fields()};
}

struct FlowRhs {
    std::array<std::vector<double>, 4> d;
    /// Largest |entry| of the curvature blocks over all nodes.
    double max_curvature = 0.0;
};

namespace detail {

inline void check_metric(const FieldSet& fs) {
    const std::size_t n = fs.intervals();
    for (std::size_t k = 0; k <= n; ++k) {
        const bool bad = !(fs.f[kH][k] > 0.0) || !(fs.f[kPsi][k] > 0.0) || (k > 0 && !(fs.f[kPhi][k] > 0.0)) ||
                         (k < n && !(fs.f[kXi][k] > 0.0));
        if (bad)
            throw Error(ErrorCode::NonPositiveMetric,
                        "metric coefficient <= 0 at r = " + fmt17(static_cast<double>(k) * fs.dr));
    }
}

/// Even extrapolation in r^2 from distances 1, 2, 3 to the pole.
inline double even_pole_value(double v1, double v2, double v3) { return 1.5 * v1 - 0.6 * v2 + 0.1 * v3; }

}  // namespace detail

/// Ricci flow d/dt g = -2 Ric for the diagonal family:
/// dh/dt = -h ric0, dphi/dt = -phi ric1, dpsi/dt = -psi ric2, dxi/dt = -xi ric3.
inline FlowRhs flow_rhs(const FlowState& s) {
    const FieldSet& fs = s.fields;
    detail::check_metric(fs);
    const long n = static_cast<long>(fs.intervals());
    std::vector<std::array<double, 4>> ric(static_cast<std::size_t>(n + 1));
    FlowRhs out;
    for (long k = 1; k < n; ++k) {
        const CurvatureBlocks b = blocks_from_jets(fs.arclength_jets(k));
        out.max_curvature = std::max(out.max_curvature, b.max_abs());
        ric[static_cast<std::size_t>(k)] = ricci_from_blocks(b).ric;
    }
    // At a pole the Ricci values of the two fields exchanged by the ghost rule
    // agree; average them so the pole value comes from the even part.
    auto pole = [&](long k1, long step, int swap_a, int swap_b) {
        std::array<std::array<double, 4>, 3> v{};
        for (int j = 0; j < 3; ++j) {
            v[j] = ric[static_cast<std::size_t>(k1 + step * j)];
            if (swap_a >= 0) v[j][swap_a] = v[j][swap_b] = 0.5 * (v[j][swap_a] + v[j][swap_b]);
        }
        std::array<double, 4> r{};
        for (int i = 0; i < 4; ++i) r[i] = detail::even_pole_value(v[0][i], v[1][i], v[2][i]);
        return r;
    };
    ric[0] = s.space.name == Space::S4 ? pole(1, 1, 2, 3) : pole(1, 1, -1, -1);
    ric[static_cast<std::size_t>(n)] = pole(n - 1, -1, 1, 2);

    static constexpr std::array<int, 4> kFields{kH, kPhi, kPsi, kXi};
    for (int f : kFields) {
        out.d[f].resize(static_cast<std::size_t>(n + 1));
        for (long k = 0; k <= n; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            out.d[f][kk] = -fs.f[f][kk] * ric[kk][f];
        }
    }
    out.d[kPhi][0] = 0.0;
    out.d[kXi][static_cast<std::size_t>(n)] = 0.0;
    return out;
}

/// dt = min(cfl * (h_min dr)^2, curvature_factor / max|sec|), shortened to land
/// on snapshot times.
struct DtPolicy {
    double cfl = 0.2;
    double curvature_factor = 0.1;
    /// BlowUp once any curvature block entry exceeds this.
    double blowup = 1e6;
    /// StepRejected once a step changes a field by more than this fraction.
    double max_relative_change = 0.1;
};

/// t = 0, then `per_decade` geometric times from `t_first` below t_max, then t_max.
inline std::vector<double> snapshot_times(double t_max, double t_first = 1e-7, int per_decade = 20) {
    std::vector<double> ts{0.0};
    if (!(t_max > 0.0)) return ts;
    for (int i = 0;; ++i) {
        const double t = t_first * std::pow(10.0, static_cast<double>(i) / per_decade);
        if (t >= t_max * (1.0 - 1e-12)) break;
        ts.push_back(t);
    }
    ts.push_back(t_max);
    return ts;
}

struct Trajectory {
    std::vector<FlowState> snapshots;
    std::size_t steps = 0;
};

/// Called at each snapshot; return false to stop integrating.
using SnapshotObserver = std::function<bool(const FlowState&)>;

/// Explicit RK4 method of lines, pinning phi(0) = 0 and xi(L) = 0 after every
/// stage. Throws NonPositiveMetric, StepRejected or BlowUp; snapshots emitted
/// before the failure have already reached the observer.
inline Trajectory integrate(const FlowState& state0, const std::vector<double>& times, const DtPolicy& policy = {},
                            const SnapshotObserver& observer = {}) {
    Trajectory traj;
    FlowState s = state0;
    const std::size_t n = s.intervals();
    auto emit = [&]() {
        traj.snapshots.push_back(s);
        return !observer || observer(s);
    };
    auto pin = [n](FieldSet& fs) {
        fs.f[kPhi][0] = 0.0;
        fs.f[kXi][n] = 0.0;
    };
    auto axpy = [&](const FieldSet& base, const FlowRhs& k, double c) {
        FieldSet out = base;
        for (int f = 0; f < 4; ++f)
            for (std::size_t j = 0; j <= n; ++j) out.f[f][j] += c * k.d[f][j];
        pin(out);
        return out;
    };

    std::size_t next = 0;
    while (next < times.size() && times[next] <= s.t) {
        if (!emit()) return traj;
        ++next;
    }
    while (next < times.size()) {
        const FlowRhs k1 = flow_rhs(s);
        if (!(k1.max_curvature <= policy.blowup))
            throw Error(ErrorCode::BlowUp, "max |curvature| = " + fmt17(k1.max_curvature) + " at t = " + fmt17(s.t));
        const double hmin = *std::min_element(s.fields.f[kH].begin(), s.fields.f[kH].end());
        double dt = policy.cfl * (hmin * s.fields.dr) * (hmin * s.fields.dr);
        if (k1.max_curvature > 0.0) dt = std::min(dt, policy.curvature_factor / k1.max_curvature);
        const double target = times[next];
        const bool lands = s.t + dt >= target * (1.0 - 1e-12);
        if (lands) dt = target - s.t;

        FlowState mid = s;
        mid.fields = axpy(s.fields, k1, 0.5 * dt);
        const FlowRhs k2 = flow_rhs(mid);
        mid.fields = axpy(s.fields, k2, 0.5 * dt);
        const FlowRhs k3 = flow_rhs(mid);
        mid.fields = axpy(s.fields, k3, dt);
        const FlowRhs k4 = flow_rhs(mid);

        FieldSet out = s.fields;
        for (int f = 0; f < 4; ++f) {
            for (std::size_t j = 0; j <= n; ++j) {
                const double inc = dt / 6.0 * (k1.d[f][j] + 2.0 * k2.d[f][j] + 2.0 * k3.d[f][j] + k4.d[f][j]);
                const double old = out.f[f][j];
                out.f[f][j] += inc;
                if (!std::isfinite(out.f[f][j]) || std::abs(inc) > policy.max_relative_change * std::abs(old))
                    if (!(old == 0.0 && inc == 0.0))
                        throw Error(ErrorCode::StepRejected, "step of " + fmt17(dt) + " at t = " + fmt17(s.t) +
                                                                 " changed a field too much; reduce the cfl factor");
            }
        }
        pin(out);
        s.fields = std::move(out);
        s.t = lands ? target : s.t + dt;
        ++traj.steps;
        if (lands) {
            ++next;
            if (!emit()) return traj;
        }
    }
    return traj;
}

/// A plane of negative sectional curvature found in a flowed metric.
struct FlowEvent {
    double t = 0.0;
    double r = 0.0;
    std::size_t node = 0;
    Plane plane;
    double sec = 0.0;
};

struct EventOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    /// sec must fall below -tol * (1 + max|entry|) to count.
    double tol = 1e-8;
};

/// Most negative refined plane among the Mixed nodes of one state, if any.
inline std::optional<FlowEvent> find_negative_plane(const FlowState& s, const EventOptions& opt = {}) {
    const std::vector<CurvatureBlocks> blocks = node_blocks(s.fields);
    std::optional<FlowEvent> best;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        if (certify(blocks[k]).verdict != Verdict::Mixed) continue;
        const SampledMinimum m = min_sec_bruteforce(blocks[k], opt.samples, opt.seed);
        if (!(m.min_sec < -opt.tol * (1.0 + blocks[k].max_abs()))) continue;
        if (!best || m.min_sec < best->sec) best = FlowEvent{s.t, s.node(k), k, m.plane, m.min_sec};
    }
    return best;
}

/// Earliest snapshot carrying a negative plane.
inline std::optional<FlowEvent> detect_mixed_sign(const std::vector<FlowState>& trajectory,
                                                  const EventOptions& opt = {}) {
    for (const FlowState& s : trajectory)
        if (auto e = find_negative_plane(s, opt)) return e;
    return std::nullopt;
}

/// The metric stays diagonal by construction. Returns the largest
/// off-diagonal Ricci frame sum over the nodes, which should vanish too.
inline double monitor_offdiagonal(const FlowState& s) {
    double worst = 0.0;
    for (const CurvatureBlocks& b : node_blocks(s.fields)) {
        const auto ric = ricci_frame_sums(b);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) worst = std::max(worst, std::abs(ric[i][j]));
    }
    return worst;
}

/// Sup distance between s and the Einstein shrinker sqrt(1 - 2 lambda t) * s0.
inline double shrinker_error(const FlowState& s, const FlowState& s0, double einstein_constant) {
    const double c = std::sqrt(1.0 - 2.0 * einstein_constant * s.t);
    double e = 0.0;
    for (int f = 0; f < 4; ++f)
        for (std::size_t j = 0; j < s.fields.f[f].size(); ++j)
            e = std::max(e, std::abs(s.fields.f[f][j] - c * s0.fields.f[f][j]));
    return e;
}

inline double einstein_constant(const SpaceKind& space) { return space.name == Space::S4 ? 3.0 : 6.0; }

/// `t=<t>` line, then CSV `r,h,phi,psi,xi`.
inline void write_snapshot_csv(std::ostream& os, const FlowState& s) {
    os << "t=" << fmt17(s.t) << '\n' << "r,h,phi,psi,xi\n";
    const std::size_t n = s.intervals();
    for (std::size_t k = 0; k <= n; ++k)
        os << fmt17(s.node(k)) << ',' << fmt17(s.fields.f[kH][k]) << ',' << fmt17(s.fields.f[kPhi][k]) << ','
           << fmt17(s.fields.f[kPsi][k]) << ',' << fmt17(s.fields.f[kXi][k]) << '\n';
}

}  // namespace curvlab
