// curvlab: certify, flow, reproduce, profile-dump.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvlab/curvlab.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace curvlab;

namespace {

enum Exit { kOk = 0, kNotReproduced = 1, kInvalidConfig = 2, kNumericalFailure = 3 };

struct RunConfig {
    std::string command;
    std::string which;
    std::string space = "s4";
    std::string metric = "standard";
    std::optional<double> a;
    std::optional<double> b;
    double s = 0.02;
    std::size_t grid = 1024;
    double t_max = 0.01;
    double cfl = 0.2;
    std::uint64_t seed = 0;
    std::string out = "curvlab_out";

    SpaceKind space_kind() const { return space == "cp2" ? SpaceKind::cp2() : SpaceKind::s4(); }
    double a_value() const { return a.value_or(kDefaultA); }
    double b_value() const { return b.value_or(default_b(space_kind())); }
};

// nlohmann prints shortest round-trip doubles; outputs use %.16e throughout.
void write_json(std::ostream& os, const json& j, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                os << pad << json(it.key()).dump() << ": ";
                write_json(os, it.value(), indent + 2);
                os << (i + 1 < j.size() ? ",\n" : "\n");
            }
            os << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                os << pad;
                write_json(os, j[i], indent + 2);
                os << (i + 1 < j.size() ? ",\n" : "\n");
            }
            os << close << "]";
            return;
        }
        case json::value_t::number_float: {
            const double x = j.get<double>();
            if (std::isfinite(x))
                os << fmt17(x);
            else
                os << "null";
            return;
        }
        default: os << j.dump(); return;
    }
}

void save_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    write_json(f, j);
    f << '\n';
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
    return f;
}

json params_json(const RunConfig& c) {
    json p;
    p["metric"] = c.metric;
    if (c.metric != "standard") {
        p["a"] = c.a_value();
        p["b"] = c.b_value();
    }
    if (c.metric == "interpolated") p["s"] = c.s;
    return p;
}

ProfileTriple build_metric(const RunConfig& c) {
    const SpaceKind space = c.space_kind();
    if (c.metric == "standard") return standard_profiles(space);
    const GZParams gz = make_gz_params(space, c.a_value(), c.b_value());
    if (c.metric == "gz") return gz_closed_form(gz);
    if (!(c.s >= 0.0 && c.s <= 1.0)) throw Error(ErrorCode::InvalidConfig, "s must lie in [0, 1]");
    return interpolated_profiles(gz, c.s);
}

json plane_json(const Plane& p) {
    json j;
    j["name"] = plane_name(p.coordinate);
    j["sigma"] = p.sigma;
    return j;
}

json event_json(const FlowEvent& e) {
    json j;
    j["kind"] = "NegativePlane";
    j["t"] = e.t;
    j["r"] = e.r;
    j["node"] = e.node;
    j["plane"] = plane_json(e.plane);
    j["sec"] = e.sec;
    return j;
}

json check_json(const InterpolatedCheck& c) {
    json j;
    j["s"] = c.s;
    j["strictly_positive"] = c.strictly_positive;
    j["witness_positive"] = c.witness_positive;
    j["min_margin"] = c.min_margin;
    j["min_witness_eig"] = c.min_witness_eig;
    return j;
}

int cmd_certify(const RunConfig& c) {
    const ProfileTriple p = sample(build_metric(c), c.grid);
    const std::vector<CurvatureBlocks> blocks = node_blocks(p.fields());
    json nodes = json::array();
    std::size_t count[3] = {0, 0, 0};
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const PositivityCertificate cert = certify(blocks[k]);
        const SampledMinimum m = min_sec_bruteforce(blocks[k], 1000, c.seed + k);
        ++count[static_cast<int>(cert.verdict)];
        json n;
        n["r"] = blocks[k].r;
        n["tau_lo"] = cert.interval.empty ? json(nullptr) : json(cert.interval.lo);
        n["tau_hi"] = cert.interval.empty ? json(nullptr) : json(cert.interval.hi);
        n["margin"] = cert.margin;
        n["verdict"] = std::string(to_string(cert.verdict));
        n["min_sec_sampled"] = m.min_sec;
        nodes.push_back(n);
    }
    save_json(fs::path(c.out) / "certification.json", nodes);
    std::cout << "nodes " << blocks.size() << ": StrictlyPositive " << count[0] << ", NonnegativeOnly " << count[1]
              << ", Mixed " << count[2] << '\n';
    return count[2] == 0 ? kOk : kNotReproduced;
}

int cmd_profile_dump(const RunConfig& c) {
    const ProfileTriple p = build_metric(c);
    const fs::path out(c.out);
    {
        auto f = open_out(out / "profiles.csv");
        write_profile_csv(f, p, c.grid);
    }
    {
        auto f = open_out(out / "curvature.csv");
        write_curvature_csv(f, curvature_profile(p, c.grid));
    }
    const SmoothnessReport rep = check_smoothness(p, 1e-6, c.grid);
    {
        auto f = open_out(out / "smoothness.json");
        write_smoothness_json(f, rep);
    }
    std::cout << "smoothness " << (rep.pass() ? "pass" : "fail") << " (max residual " << fmt17(rep.max_residual())
              << ")\n";
    return kOk;
}

int cmd_flow(const RunConfig& c) {
    const SpaceKind space = c.space_kind();
    const FlowState s0 = initial_state(build_metric(c), c.grid);
    const fs::path out(c.out);
    DtPolicy policy;
    policy.cfl = c.cfl;
    EventOptions ev;
    ev.seed = c.seed;

    json manifest;
    manifest["space"] = std::string(to_string(space.name));
    manifest["params"] = params_json(c);
    manifest["grid"] = {{"intervals", c.grid}, {"dr", s0.fields.dr}, {"length", space.L}};
    manifest["dt_policy"] = {{"cfl", policy.cfl},
                             {"curvature_factor", policy.curvature_factor},
                             {"blowup", policy.blowup},
                             {"max_relative_change", policy.max_relative_change},
                             {"t_max", c.t_max},
                             {"snapshots_per_decade", 20},
                             {"first_snapshot", 1e-7}};
    json events = json::array();
    double shrink = 0.0;
    std::size_t index = 0;
    std::size_t steps = 0;
    FlowState last = s0;
    auto observer = [&](const FlowState& s) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", index++);
        auto f = open_out(out / name);
        write_snapshot_csv(f, s);
        if (c.metric == "standard") shrink = std::max(shrink, shrinker_error(s, s0, einstein_constant(space)));
        if (s.t > 0.0)
            if (auto e = find_negative_plane(s, ev)) events.push_back(event_json(*e));
        last = s;
        return true;
    };
    auto finish = [&](const std::string& status) {
        manifest["status"] = status;
        manifest["steps"] = steps;
        manifest["snapshots"] = index;
        manifest["t_reached"] = last.t;
        if (c.metric == "standard") manifest["shrinker_error"] = shrink;
        manifest["offdiagonal_ricci"] = monitor_offdiagonal(last);
        manifest["events"] = events;
        save_json(out / "manifest.json", manifest);
    };
    try {
        steps = integrate(s0, snapshot_times(c.t_max), policy, observer).steps;
    } catch (const Error& e) {
        finish(e.what());
        throw;
    }
    finish("completed");
    std::cout << "t = " << fmt17(last.t) << ", " << index << " snapshots, " << events.size()
              << " snapshots with a negative plane";
    if (!events.empty()) std::cout << " (first at t = " << fmt17(events.front()["t"].get<double>()) << ")";
    std::cout << '\n';
    return kOk;
}

std::string yes_no(bool x) { return x ? "yes" : "no"; }

void describe(std::ostream& os, const std::string& label, const InterpolatedCheck& k) {
    os << label << " = " << fmt17(k.s) << ": all nodes StrictlyPositive " << yes_no(k.strictly_positive)
       << ", witness positive definite " << yes_no(k.witness_positive) << " (min eigenvalue "
       << fmt17(k.min_witness_eig) << ")\n";
}

int cmd_reproduce(const RunConfig& c) {
    const SpaceKind space = c.space_kind();
    const GZParams gz = make_gz_params(space, c.a_value(), c.b_value());
    const fs::path out(c.out);
    TheoremBOptions bopt;
    bopt.grid = c.grid;
    const TheoremBResult b = reproduce_theorem_b(gz, bopt);

    json summary;
    summary["claim"] = c.which;
    summary["space"] = std::string(to_string(space.name));
    summary["a"] = gz.a;
    summary["b"] = gz.b;
    summary["grid"] = c.grid;
    summary["s_star"] = b.s_star;
    summary["checks"] = {check_json(b.half), check_json(b.quarter)};
    std::ostringstream txt;
    txt << "claim " << c.which << " on " << to_string(space.name) << "\n"
        << "a = " << fmt17(gz.a) << ", b = " << fmt17(gz.b) << ", grid = " << c.grid << "\n"
        << "s* = " << fmt17(b.s_star) << "\n";
    describe(txt, "s*/2", b.half);
    describe(txt, "s*/4", b.quarter);

    bool ok = b.reproduced();
    if (c.which == "thmA") {
        if (!ok) throw Error(ErrorCode::ReproductionFailed, "no certified s to flow from");
        TheoremAOptions aopt;
        aopt.grid = c.grid;
        aopt.t_max = c.t_max;
        aopt.policy.cfl = c.cfl;
        aopt.events.seed = c.seed;
        const TheoremAResult a = reproduce_theorem_a(gz, b.s_star / 2.0, aopt);
        summary["flow"] = {{"s", a.s},
                           {"initial", check_json(a.initial)},
                           {"t_max", c.t_max},
                           {"steps", a.trajectory.steps},
                           {"event", a.event ? event_json(*a.event) : json(nullptr)}};
        txt << "flow from s = " << fmt17(a.s) << " on " << c.grid << " intervals, t_max = " << fmt17(c.t_max) << "\n";
        if (a.event)
            txt << "first negative plane at t = " << fmt17(a.event->t) << ", r = " << fmt17(a.event->r) << ", plane "
                << plane_name(a.event->plane.coordinate) << ", sec = " << fmt17(a.event->sec) << "\n";
        else
            txt << "no negative plane up to t_max\n";
        ok = a.reproduced();
    }
    summary["reproduced"] = ok;
    txt << "result: " << (ok ? "reproduced" : "NOT reproduced") << "\n";
    save_json(out / "summary.json", summary);
    {
        auto f = open_out(out / "summary.txt");
        f << txt.str();
    }
    std::cout << txt.str();
    return ok ? kOk : kNotReproduced;
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParams:
        case ErrorCode::InvalidConfig: return kInvalidConfig;
        case ErrorCode::ReproductionFailed: return kNotReproduced;
        default: return kNumericalFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature certification and Ricci flow of cohomogeneity one metrics on S^4 and CP^2"};
    RunConfig c;
    double a = 0.0, b = 0.0;
    app.add_option("command", c.command, "certify | flow | reproduce | profile-dump")
        ->required()
        ->check(CLI::IsMember({"certify", "flow", "reproduce", "profile-dump"}));
    app.add_option("which", c.which, "thmA | thmB (reproduce only)")->check(CLI::IsMember({"thmA", "thmB"}));
    app.add_option("--space", c.space)->check(CLI::IsMember({"s4", "cp2"}));
    app.add_option("--metric", c.metric)->check(CLI::IsMember({"standard", "gz", "interpolated"}));
    auto* opt_a = app.add_option("--a", a, "Q_{a,b} parameter, 1 < a <= 4/3 (default 4/3)");
    auto* opt_b = app.add_option("--b", b, "plateau value (default 0.2 on s4, 0.1 on cp2)");
    app.add_option("--s", c.s, "interpolation parameter in [0, 1]");
    app.add_option("--grid", c.grid, "number of grid intervals")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 22));
    app.add_option("--tmax", c.t_max, "flow end time")->check(CLI::NonNegativeNumber);
    app.add_option("--cfl", c.cfl, "dt <= cfl (h_min dr)^2")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "seed for sampled planes");
    app.add_option("--out", c.out, "output directory");
    app.set_config("--config", "", "flat key=value file; flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    }
    if (opt_a->count() > 0) c.a = a;
    if (opt_b->count() > 0) c.b = b;
    if (c.command == "reproduce" && c.which.empty()) {
        std::cerr << "invalid configuration: reproduce needs thmA or thmB\n";
        return kInvalidConfig;
    }

    try {
        fs::create_directories(c.out);
        if (c.command == "certify") return cmd_certify(c);
        if (c.command == "flow") return cmd_flow(c);
        if (c.command == "reproduce") return cmd_reproduce(c);
        return cmd_profile_dump(c);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e.code());
    } catch (const fs::filesystem_error& e) {
        std::cerr << e.what() << '\n';
        return kInvalidConfig;
    }
}
