#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "curvlab/flow.hpp"
#include "curvlab/gz.hpp"
#include "curvlab/reproduce.hpp"
#include "curvlab/smoothness.hpp"

using namespace curvlab;
using Catch::Matchers::WithinAbs;

TEST_CASE("flow_rhs of the Einstein metrics", "[flow]") {
    for (const SpaceKind sp : {SpaceKind::s4(), SpaceKind::cp2()}) {
        const FlowState s = initial_state(standard_profiles(sp), 256);
        const FlowRhs d = flow_rhs(s);
        const double lambda = einstein_constant(sp);
        for (std::size_t k = 0; k <= 256; ++k)
            for (int f = 0; f < 4; ++f) {
                INFO(to_string(sp.name) << " field " << f << " node " << k);
                CHECK_THAT(d.d[f][k], WithinAbs(-lambda * s.fields.f[f][k], 1e-7));
            }
        CHECK(d.d[kPhi][0] == 0.0);
        CHECK(d.d[kXi][256] == 0.0);
    }
}

TEST_CASE("flow_rhs rejects degenerate metrics", "[flow]") {
    FlowState s = initial_state(standard_profiles(SpaceKind::s4()), 64);
    s.fields.f[kPsi][10] = -0.1;
    try {
        flow_rhs(s);
        FAIL("expected NonPositiveMetric");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveMetric);
    }
}

TEST_CASE("snapshot times", "[flow]") {
    const std::vector<double> t = snapshot_times(1e-5);
    CHECK(t.front() == 0.0);
    CHECK(t[1] == 1e-7);
    CHECK(t.back() == 1e-5);
    CHECK(t.size() == 42);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
    CHECK(snapshot_times(0.0).size() == 1);
}

TEST_CASE("integrate to t_max = 0 returns the initial state", "[flow]") {
    const FlowState s0 = initial_state(standard_profiles(SpaceKind::cp2()), 64);
    const Trajectory tr = integrate(s0, snapshot_times(0.0));
    REQUIRE(tr.snapshots.size() == 1);
    CHECK(tr.steps == 0);
    CHECK(tr.snapshots[0].fields.f[kPhi] == s0.fields.f[kPhi]);
    CHECK_FALSE(detect_mixed_sign(tr.snapshots).has_value());
}

TEST_CASE("Einstein shrinker", "[flow]") {
    for (const SpaceKind sp : {SpaceKind::s4(), SpaceKind::cp2()}) {
        const FlowState s0 = initial_state(standard_profiles(sp), 128);
        const double lambda = einstein_constant(sp);
        double worst = 0.0;
        const Trajectory tr = integrate(s0, snapshot_times(0.02), {}, [&](const FlowState& s) {
            worst = std::max(worst, shrinker_error(s, s0, lambda));
            return true;
        });
        CHECK(tr.snapshots.back().t == 0.02);
        CHECK(worst < 1e-5);
        CHECK_FALSE(detect_mixed_sign(tr.snapshots).has_value());
        CHECK(monitor_offdiagonal(tr.snapshots.back()) < 1e-10);
    }
}

TEST_CASE("observer can stop the flow", "[flow]") {
    const FlowState s0 = initial_state(standard_profiles(SpaceKind::s4()), 64);
    int seen = 0;
    const Trajectory tr = integrate(s0, snapshot_times(1e-3), {}, [&](const FlowState&) { return ++seen < 3; });
    CHECK(tr.snapshots.size() == 3);
}

TEST_CASE("unstable steps are rejected", "[flow]") {
    const FlowState s0 = initial_state(standard_profiles(SpaceKind::s4()), 64);
    DtPolicy p;
    p.cfl = 50.0;
    p.curvature_factor = 1e9;
    try {
        integrate(s0, snapshot_times(1e-2), p);
        FAIL("expected a flow error");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::StepRejected || e.code() == ErrorCode::BlowUp ||
               e.code() == ErrorCode::NonPositiveMetric));
    }
}

TEST_CASE("GZ flow develops a negative plane", "[flow][gz]") {
    for (const SpaceKind sp : {SpaceKind::s4(), SpaceKind::cp2()}) {
        const GZParams p = make_gz_params(sp, kDefaultA, default_b(sp));
        const FlowState s0 = initial_state(gz_closed_form(p), 512);
        CHECK_FALSE(find_negative_plane(s0).has_value());
        const Trajectory tr = integrate(s0, snapshot_times(1e-6));
        const auto ev = detect_mixed_sign(tr.snapshots);
        REQUIRE(ev.has_value());
        CHECK(ev->t > 0.0);
        CHECK(ev->sec < 0.0);
        CHECK(monitor_offdiagonal(tr.snapshots.back()) < 1e-10);
        for (const FlowState& s : tr.snapshots) CHECK(check_smoothness(s.fields, sp, 1e-4).pass());
    }
}

TEST_CASE("S4 reflection symmetry is preserved", "[flow][gz]") {
    const GZParams p = make_gz_params(SpaceKind::s4(), kDefaultA, 0.2);
    const FlowState s0 = initial_state(interpolated_profiles(p, 1e-3), 256);
    const Trajectory tr = integrate(s0, snapshot_times(1e-4));
    for (const FlowState& s : tr.snapshots) {
        double worst = 0.0;
        for (std::size_t k = 0; k <= 256; ++k) {
            worst = std::max(worst, std::abs(s.fields.f[kPhi][k] - s.fields.f[kXi][256 - k]));
            worst = std::max(worst, std::abs(s.fields.f[kPsi][k] - s.fields.f[kPsi][256 - k]));
            worst = std::max(worst, std::abs(s.fields.f[kH][k] - s.fields.f[kH][256 - k]));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("snapshot csv", "[flow]") {
    std::ostringstream os;
    write_snapshot_csv(os, initial_state(standard_profiles(SpaceKind::s4()), 8));
    CHECK(os.str().rfind("t=0.0000000000000000e+00\nr,h,phi,psi,xi\n", 0) == 0);
}

TEST_CASE("certified g_s and its flow", "[flow][reproduce]") {
    const GZParams p = make_gz_params(SpaceKind::s4(), kDefaultA, 0.2);
    TheoremBOptions opt;
    opt.grid = 512;
    const TheoremBResult b = reproduce_theorem_b(p, opt);
    CHECK(b.s_star > 0.0);
    CHECK(b.reproduced());
    CHECK(b.at_s_star.ok());
    TheoremAOptions a;
    a.grid = 512;
    const TheoremAResult res = reproduce_theorem_a(p, b.s_star / 2, a);
    CHECK(res.initial.strictly_positive);
    REQUIRE(res.event.has_value());
    CHECK(res.event->t > 0.0);
    CHECK(res.reproduced());
}
