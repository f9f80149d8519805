#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "curvlab/curvature.hpp"
#include "curvlab/gz.hpp"
#include "curvlab/positivity.hpp"
#include "curvlab/reproduce.hpp"

using namespace curvlab;
using Catch::Matchers::WithinAbs;

namespace {

CurvatureBlocks constant_blocks(Sym2 r1, Sym2 r2, Sym2 r3) { return {0.0, {r1, r2, r3}}; }

const CurvatureBlocks kRound = constant_blocks({1, 0, 1}, {1, 0, 1}, {1, 0, 1});
const CurvatureBlocks kFubiniStudy = constant_blocks({1, -1, 1}, {1, -1, 1}, {4, 2, 4});

CurvatureBlocks random_blocks(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    CurvatureBlocks b;
    for (auto& s : b.R) s = {u(rng), u(rng), u(rng)};
    return b;
}

}  // namespace

TEST_CASE("tau intervals of the standard metrics", "[positivity]") {
    TauInterval t = tau_interval(kRound);
    REQUIRE_FALSE(t.empty);
    CHECK_THAT(t.lo, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(t.hi, WithinAbs(1.0, 1e-15));
    t = tau_interval(kFubiniStudy);
    REQUIRE_FALSE(t.empty);
    CHECK_THAT(t.lo, WithinAbs(0.0, 1e-15));
    CHECK_THAT(t.hi, WithinAbs(2.0, 1e-15));
    CHECK(tau_interval(constant_blocks({-1, 0, 1}, {1, 0, 1}, {1, 0, 1})).empty);
}

TEST_CASE("certify", "[positivity]") {
    PositivityCertificate c = certify(kRound);
    CHECK(c.verdict == Verdict::StrictlyPositive);
    CHECK(c.witness_tau == 0.0);
    CHECK_THAT(c.margin, WithinAbs(1.0, 1e-15));

    c = certify(CurvatureBlocks{});
    CHECK(c.verdict == Verdict::NonnegativeOnly);
    CHECK(c.witness_tau == 0.0);

    c = certify(constant_blocks({1, 0, -1}, {1, 0, 1}, {1, 0, 1}));
    CHECK(c.verdict == Verdict::Mixed);
    CHECK_FALSE(c.has_witness);
    CHECK(c.margin < 0.0);
    CHECK(to_string(Verdict::Mixed) == "Mixed");
}

TEST_CASE("GZ blocks are nonnegative with a unique tau", "[positivity][gz]") {
    for (const SpaceKind sp : {SpaceKind::s4(), SpaceKind::cp2()}) {
        const GZParams p = make_gz_params(sp, kDefaultA, default_b(sp));
        const ProfileTriple g = gz_profiles(p, 2048);
        const auto blocks = curvature_profile(g);
        const double b2 = p.b * p.b;
        for (std::size_t k = 1; k < blocks.size(); ++k) {
            const CurvatureBlocks& b = blocks[k];
            if (b.r > sp.r_max_minus) break;
            const PositivityCertificate c = certify(b);
            CHECK(c.verdict == Verdict::NonnegativeOnly);
            CHECK(c.interval.width() < 1e-8);
            CHECK_THAT(c.witness_tau, WithinAbs(-g.exact_jets(b.r).phi.d1 / (2 * b2), 1e-6));
            const SampledMinimum m = min_sec_bruteforce(b, 200, k);
            CHECK(m.min_sec >= -1e-8);
            CHECK(std::abs(b.R[1].q) < 1e-8);  // sec(e0 ^ e2)
        }
    }
}

TEST_CASE("max_min_eig", "[positivity]") {
    TauOptimum o = max_min_eig(kRound);
    CHECK_THAT(o.tau_star, WithinAbs(0.0, 1e-8));
    CHECK_THAT(o.margin, WithinAbs(1.0, 1e-8));
    o = max_min_eig(kFubiniStudy);
    CHECK_THAT(o.tau_star, WithinAbs(1.0, 1e-6));
    CHECK_THAT(o.margin, WithinAbs(1.0, 1e-8));
    o = max_min_eig(constant_blocks({0.3, 0, 0}, {0.3, 0, 0}, {0.3, 0, 0}));
    CHECK_THAT(o.tau_star, WithinAbs(0.0, 1e-6));
    CHECK_THAT(o.margin, WithinAbs(0.0, 1e-8));
}

TEST_CASE("sectional curvature sampling", "[positivity]") {
    CHECK(min_sec_bruteforce(kRound, 1000, 1).min_sec == Catch::Approx(1.0).epsilon(1e-12));
    const SampledMinimum a = min_sec_bruteforce(kFubiniStudy, 500, 42);
    const SampledMinimum b = min_sec_bruteforce(kFubiniStudy, 500, 42);
    CHECK(a.min_sec == b.min_sec);
    CHECK(a.min_sec >= 1.0 - 1e-12);
    // GZ plateau: sec(e0 ^ e2) = 0 is found among the coordinate planes
    const CurvatureBlocks plateau = constant_blocks({6.25, 0, 0}, {6.25, 0, 0}, {6.25, 0, 0});
    const SampledMinimum z = min_sec_bruteforce(plateau, 100, 0);
    CHECK(z.min_sec == 0.0);
    CHECK(plane_name(z.plane.coordinate).find("e0") != std::string::npos);
    // every sampled plane is a unit simple 2-vector
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
        std::array<double, 4> x{}, y{};
        for (auto& v : x) v = g(rng);
        for (auto& v : y) v = g(rng);
        CHECK(std::abs(star_pairing(wedge(x, y))) < 1e-12);
    }
}

TEST_CASE("positivity properties on random blocks", "[positivity][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const CurvatureBlocks b = random_blocks(rng);
        const PositivityCertificate c = certify(b);
        const TauOptimum o = max_min_eig(b);
        INFO("trial " << trial);
        // consistency of the two certifiers
        CHECK((o.margin > 1e-8) == (c.verdict == Verdict::StrictlyPositive));
        CHECK(o.margin >= c.margin - 1e-8);
        // sampled planes never beat the Finsler-Thorpe bound
        CHECK(min_sec_bruteforce(b, 300, trial).min_sec >= o.margin - 1e-8);
        // homothety: verdict invariant, interval scales
        const PositivityCertificate c4 = certify(b * 0.25);
        CHECK(c4.verdict == c.verdict);
        if (!c.interval.empty) {
            CHECK_THAT(c4.interval.lo, WithinAbs(0.25 * c.interval.lo, 1e-12));
            CHECK_THAT(c4.interval.hi, WithinAbs(0.25 * c.interval.hi, 1e-12));
        }
        // adding c * star shifts the interval by -c
        const double shift = 0.3;
        CurvatureBlocks sh = b;
        for (auto& s : sh.R) s.m += shift;
        const TauInterval t = tau_interval(sh);
        CHECK(t.empty == c.interval.empty);
        if (!t.empty) {
            CHECK_THAT(t.lo, WithinAbs(c.interval.lo - shift, 1e-12));
            CHECK_THAT(t.hi, WithinAbs(c.interval.hi - shift, 1e-12));
        }
    }
}

TEST_CASE("explicit tau witness", "[positivity]") {
    const GZParams p4 = make_gz_params(SpaceKind::s4(), kDefaultA, 0.2);
    const double b = p4.b;
    const double plateau = 0.5 * (p4.bump_minus.r0 + p4.space.r_max_minus);
    const ProfileTriple g = gz_closed_form(p4);
    for (double r : {0.01, 0.1, plateau})
        CHECK_THAT(explicit_tau_witness(p4, 0.0, r), WithinAbs(-g.exact_jets(r).phi.d1 / (2 * b * b), 1e-12));
    CHECK_THAT(explicit_tau_witness(p4, 0.01, plateau),
               WithinAbs(0.01 * 2 * (std::numbers::sqrt3 - b) / (b * b * b), 1e-12));
    // S4 plus half mirrors the minus half
    CHECK_THAT(explicit_tau_witness(p4, 0.01, p4.space.L - 0.1), WithinAbs(-explicit_tau_witness(p4, 0.01, 0.1), 1e-9));

    const GZParams pc = make_gz_params(SpaceKind::cp2(), kDefaultA, 0.1);
    const double e = 1e-9;
    const double left = explicit_tau_witness(pc, 0.01, pc.space.r_max_minus);
    const double right = explicit_tau_witness(pc, 0.01, pc.space.r_max_minus + e);
    CHECK(std::abs(left - right) > 1e-3);
}

TEST_CASE("expansion check near the poles", "[positivity][expansion]") {
    // Block 1 on the minus half matches its exact first-order coefficient;
    // the other entries only in the limit at the pole.
    for (const SpaceKind sp : {SpaceKind::s4(), SpaceKind::cp2()}) {
        const GZParams p = make_gz_params(sp, kDefaultA, default_b(sp));
        for (const ExpansionRow& row : expansion_check(p, 0.0)) {
            INFO(to_string(sp.name) << " block " << row.block << " " << row.entry << " slope " << row.slope
                                    << " expected " << row.expected);
            CHECK(row.rel_error < 1e-3);
        }
        for (const ExpansionRow& row : expansion_check(p, 0.3 * p.bump_minus.r0))
            if (row.block == 1) CHECK(row.rel_error < 1e-3);
    }
    const GZParams pc = make_gz_params(SpaceKind::cp2(), kDefaultA, 0.1);
    for (const ExpansionRow& row : expansion_check(pc, pc.space.L)) {
        INFO("CP2 plus half block " << row.block << " " << row.entry);
        CHECK(row.rel_error < 1e-3);
    }
}
