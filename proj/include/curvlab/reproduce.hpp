#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "curvlab/curvature.hpp"
#include "curvlab/error.hpp"
#include "curvlab/flow.hpp"
#include "curvlab/format.hpp"
#include "curvlab/gz.hpp"
#include "curvlab/positivity.hpp"
#include "curvlab/profiles.hpp"

namespace curvlab {

inline constexpr double kDefaultA = 4.0 / 3.0;

inline double default_b(const SpaceKind& space) { return space.name == Space::S4 ? 0.2 : 0.1; }

/// g_s = (1 - s) g_GZ + s g_standard.
inline ProfileTriple interpolated_profiles(const GZParams& gz, double s) {
    return interpolate(s, gz_closed_form(gz), standard_profiles(gz.space));
}

/// Certification of g_s on one grid, with and without the explicit witness.
struct InterpolatedCheck {
    double s = 0.0;
    bool strictly_positive = false;
    bool witness_positive = false;
    /// Smallest certify margin over the nodes.
    double min_margin = 0.0;
    /// Smallest eigenvalue of R_s + tau_s * star over the nodes, tau_s the explicit witness.
    double min_witness_eig = 0.0;

    bool ok() const { return strictly_positive && witness_positive; }
};

inline InterpolatedCheck check_interpolated(const GZParams& gz, double s, std::size_t n) {
    const ProfileTriple p = sample(interpolated_profiles(gz, s), n);
    const std::vector<CurvatureBlocks> blocks = node_blocks(p.fields());
    InterpolatedCheck c;
    c.s = s;
    c.strictly_positive = true;
    c.min_margin = std::numeric_limits<double>::infinity();
    c.min_witness_eig = std::numeric_limits<double>::infinity();
    for (const CurvatureBlocks& b : blocks) {
        const PositivityCertificate cert = certify(b);
        if (cert.verdict != Verdict::StrictlyPositive) c.strictly_positive = false;
        c.min_margin = std::min(c.min_margin, cert.margin);
        c.min_witness_eig = std::min(c.min_witness_eig, min_eig(b, explicit_tau_witness(gz, s, b.r)));
    }
    c.witness_positive = c.min_witness_eig > 0.0;
    return c;
}

struct TheoremBOptions {
    std::size_t grid = 1024;
    /// s = 2^-k is tried for k = 0..ladder_steps.
    int ladder_steps = 40;
    int bisection_steps = 24;
};

struct TheoremBResult {
    double s_star = 0.0;
    InterpolatedCheck at_s_star;
    InterpolatedCheck half;
    InterpolatedCheck quarter;

    bool reproduced() const { return s_star > 0.0 && half.ok() && quarter.ok(); }
};

/// Largest s on a dyadic ladder, refined by bisection, for which g_s certifies
/// positive at every node both by certify and by the explicit witness.
inline TheoremBResult reproduce_theorem_b(const GZParams& gz, const TheoremBOptions& opt = {}) {
    double lo = 0.0;
    InterpolatedCheck lo_check;
    for (int k = 0; k <= opt.ladder_steps; ++k) {
        const double s = std::ldexp(1.0, -k);
        lo_check = check_interpolated(gz, s, opt.grid);
        if (lo_check.ok()) {
            lo = s;
            break;
        }
    }
    if (lo == 0.0)
        throw Error(ErrorCode::ReproductionFailed, "no certified s >= 2^-" + std::to_string(opt.ladder_steps) +
                                                       " (last min witness eigenvalue " +
                                                       fmt17(lo_check.min_witness_eig) + ")");
    TheoremBResult res;
    if (lo < 1.0) {
        double hi = 2.0 * lo;
        for (int i = 0; i < opt.bisection_steps; ++i) {
            const double mid = 0.5 * (lo + hi);
            const InterpolatedCheck c = check_interpolated(gz, mid, opt.grid);
            if (c.ok()) {
                lo = mid;
                lo_check = c;
            } else {
                hi = mid;
            }
        }
    }
    res.s_star = lo;
    res.at_s_star = lo_check;
    res.half = check_interpolated(gz, lo / 2.0, opt.grid);
    res.quarter = check_interpolated(gz, lo / 4.0, opt.grid);
    return res;
}

struct TheoremAOptions {
    std::size_t grid = 1024;
    double t_max = 0.01;
    DtPolicy policy;
    EventOptions events;
};

struct TheoremAResult {
    double s = 0.0;
    InterpolatedCheck initial;
    std::optional<FlowEvent> event;
    Trajectory trajectory;

    bool reproduced() const { return initial.strictly_positive && event.has_value() && event->t > 0.0; }
};

/// Flows g_s until the first snapshot with a negative plane (or t_max).
inline TheoremAResult reproduce_theorem_a(const GZParams& gz, double s, const TheoremAOptions& opt = {},
                                          const SnapshotObserver& observer = {}) {
    TheoremAResult res;
    res.s = s;
    res.initial = check_interpolated(gz, s, opt.grid);
    const FlowState s0 = initial_state(interpolated_profiles(gz, s), opt.grid);
    res.trajectory = integrate(s0, snapshot_times(opt.t_max), opt.policy, [&](const FlowState& st) {
        if (observer && !observer(st)) return false;
        if (st.t == 0.0) return true;
        res.event = find_negative_plane(st, opt.events);
        return !res.event.has_value();
    });
    return res;
}

}  // namespace curvlab
