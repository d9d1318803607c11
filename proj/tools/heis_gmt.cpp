// heis_gmt: generators, verifiers and experiment drivers for ball families on the Heisenberg group.
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heis/constants.hpp"
#include "heis/delta_sets.hpp"
#include "heis/duality.hpp"
#include "heis/experiments.hpp"
#include "heis/io.hpp"
#include "heis/measures.hpp"
#include "heis/parallel.hpp"
#include "heis/rational.hpp"
#include "heis/report.hpp"
#include "heis/rng.hpp"

namespace {

using namespace heis;
using json = nlohmann::ordered_json;

enum Exit : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

struct RunConfig {
    std::string subcommand;
    std::string experiment;
    std::string kind;
    std::string suite;
    double delta = 0.0625;
    std::optional<double> t;
    std::optional<double> s;
    double C = 8.0;
    std::size_t directions = 64;
    std::optional<double> pixel;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    std::string in;
    std::string out;
    std::string manifest;
    int threads = 0;

    json to_json() const {
        json j;
        j["subcommand"] = subcommand;
        j["experiment"] = experiment;
        j["kind"] = kind;
        j["suite"] = suite;
        j["delta"] = delta;
        j["t"] = t ? json(*t) : json(nullptr);
        j["s"] = s ? json(*s) : json(nullptr);
        j["C"] = C;
        j["directions"] = directions;
        j["pixel"] = pixel ? json(*pixel) : json(nullptr);
        j["seed"] = seed;
        j["trials"] = trials;
        j["in"] = in;
        j["out"] = out;
        j["manifest"] = manifest;
        j["threads"] = thread_count();
        return j;
    }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Family by kind name; t picks a default kind when none is given.
BallFamily make_family(const RunConfig& cfg) {
    std::string kind = cfg.kind;
    if (kind.empty()) {
        if (!cfg.t) throw UsageError("need --kind or --t");
        const double t = *cfg.t;
        kind = t <= 1.0 ? "horizontal-line" : t <= 2.0 ? "t-axis" : t == 3.0 ? "slab" : t == 4.0 ? "heis-lattice" : "product";
    }
    const double d = cfg.delta;
    const double dim = cfg.s.value_or(cfg.t.value_or(0.0));
    if (kind == "heis-lattice") return gen_heis_lattice(d);
    if (kind == "slab") return gen_heis_lattice(d, 0.0);
    if (kind == "concentrated") return gen_concentrated_family(d);
    if (kind == "horizontal-line") return gen_sharpness_example(SharpnessKind::horizontal_line, {d, 1.0, cfg.C});
    if (kind == "t-axis") return gen_sharpness_example(SharpnessKind::t_axis_subset, {d, dim == 0.0 ? 2.0 : dim, cfg.C});
    if (kind == "product") return gen_sharpness_example(SharpnessKind::product_K0xR, {d, dim == 0.0 ? 3.0 : dim, cfg.C});
    throw UsageError("unknown family kind '" + kind + "'");
}

BallFamily input_family(const RunConfig& cfg) { return cfg.in.empty() ? make_family(cfg) : load_ball_family(cfg.in); }

void emit(const RunConfig& cfg, ExperimentReport& rep) {
    rep.parameters = cfg.to_json();
    rep.provenance = cfg.manifest.empty() ? "none" : file_hash(cfg.manifest);
    const auto j = rep.to_json();
    if (cfg.out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    {
        std::ofstream f(cfg.out + ".json");
        if (!f) throw ResourceError("cannot write " + cfg.out + ".json");
        f << j.dump(2) << '\n';
    }
    std::ofstream csv(cfg.out + ".csv"), svg(cfg.out + ".svg");
    if (!csv || !svg) throw ResourceError("cannot write report series next to " + cfg.out);
    write_csv(csv, rep);
    write_svg(svg, rep);
    std::cout << "report written to " << cfg.out << ".{json,csv,svg}\n";
}

int cmd_gen(const RunConfig& cfg) {
    if (cfg.out.empty()) throw UsageError("gen needs --out");
    const BallFamily F = make_family(cfg);
    save_ball_family(cfg.out, F);
    const auto ver = verify_delta_t_set(F);
    std::cout << "balls " << F.size() << "  t " << F.claimed_t << "  C " << F.claimed_C << "  verify ratio "
              << ver.max_violation_ratio << (ver.passes() ? "  (verified)" : "  (NOT verified)") << '\n';
    return kPass;
}

// Randomized incidence battery: float residuals and exact rationals on dyadic inputs.
int suite_duality(const RunConfig& cfg) {
    const CounterRng base(cfg.seed, hash_key("cli_duality"));
    std::uint64_t bad = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < cfg.trials; ++i) {
        CounterRng g = base.split(i);
        const HeisPoint p(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1));
        HeisPoint ps(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1));
        if (i % 2 == 0) ps = dual_ray(p).at(ps.x);  // incident by construction
        const double r1 = point_line_residual(p, line_of(ps));
        const double r2 = point_ray_residual(ps, dual_ray(p));
        const bool a = r1 <= kIncidenceTol, b = r2 <= kIncidenceTol;
        if (a != b || (i % 2 == 0 && !a)) ++bad;
        if (i % 2 == 0) worst = std::max({worst, r1, r2});
        // dyadic inputs: exact arithmetic must agree in both directions
        auto dy = [&] { return std::ldexp(std::floor(g.uniform(-1024, 1024)), -10); };
        const auto P = to_rational(dy(), dy(), dy());
        RationalTriple Q = to_rational(dy(), dy(), dy());
        if (i % 2 == 0) {
            Q.y = P.x - Q.x * P.y;
            Q.t = P.t - P.x * P.y / 2 + Q.x * P.y * P.y / 2;
        }
        if (incident_point_line_exact(P, Q) != incident_point_ray_exact(Q, P)) ++bad;
        if (i % 2 == 0 && !incident_point_ray_exact(Q, P)) ++bad;
    }
    std::cout << "duality suite: " << cfg.trials << " trials, " << bad << " failures, max residual " << worst << '\n';
    return bad == 0 && worst <= kIncidenceTol ? kPass : kCheckFailed;
}

int cmd_verify(const RunConfig& cfg) {
    if (cfg.suite == "duality") return suite_duality(cfg);
    if (!cfg.suite.empty()) throw UsageError("unknown suite '" + cfg.suite + "'");
    if (cfg.in.empty()) throw UsageError("verify needs --in or --suite");
    if (cfg.kind == "measure") {
        std::ifstream in(cfg.in);
        if (!in) throw ParseError("cannot open " + cfg.in, 0);
        const auto mu = read_measure(in);
        auto g = GridMeasure::for_unit_ball(cfg.delta, 2);
        g.rasterize(mu);
        const auto rep = is_delta_measure(g, cfg.delta, cfg.C);
        std::cout << json{{"check", "delta_measure"}, {"max_ratio", rep.max_ratio}, {"passes", rep.passes},
                          {"witness", {rep.witness.x, rep.witness.y, rep.witness.t}}}
                         .dump()
                  << '\n';
        return rep.passes ? kPass : kCheckFailed;
    }
    const BallFamily F = load_ball_family(cfg.in);
    const auto fam = check_family(F);
    const auto rep = verify_delta_t_set(F);
    json j{{"check", "delta_t_set"},
           {"balls", F.size()},
           {"delta", F.delta},
           {"t", F.claimed_t},
           {"C", F.claimed_C},
           {"separated", fam.separated},
           {"inside_unit_ball", fam.inside_unit_ball},
           {"max_violation_ratio", rep.max_violation_ratio},
           {"passes", rep.passes() && fam.ok()}};
    if (!rep.passes()) {
        const auto& w = F.centers[rep.witness_index];
        j["witness"] = {{"center", {w.x, w.y, w.t}}, {"radius", rep.witness_radius}, {"count", rep.witness_count},
                        {"cover_size", rep.cover_size}};
    }
    std::cout << j.dump() << '\n';
    if (!rep.passes())
        std::cerr << "violation at radius " << rep.witness_radius << " (ratio " << rep.max_violation_ratio << ")\n";
    return rep.passes() && fam.ok() ? kPass : kCheckFailed;
}

double default_pixel(const RunConfig& cfg, double delta) { return cfg.pixel.value_or(0.5 * delta); }

int exp_best_direction(const RunConfig& cfg) {
    const BallFamily F = input_family(cfg);
    const auto thetas = uniform_directions(cfg.directions, true);
    const auto scan = best_direction_scan(F, thetas, default_pixel(cfg, F.delta));
    ExperimentReport rep;
    rep.name = "best-direction";
    rep.scalars["area_best"] = scan.area_best;
    rep.scalars["theta_best"] = scan.theta_best;
    rep.scalars["balls"] = static_cast<double>(F.size());
    rep.scalars["exponent"] = std::log(scan.area_best) / std::log(F.delta);
    rep.add_series("area", {"theta", "area", scan.thetas, scan.areas});
    emit(cfg, rep);
    return kPass;
}

int exp_plate_energy(const RunConfig& cfg) {
    RunConfig slab_cfg = cfg;
    slab_cfg.kind = "slab";
    slab_cfg.in.clear();
    const BallFamily compliant = make_family(slab_cfg);
    const auto base = plate_l2_energy(compliant);
    ExperimentReport rep;
    rep.name = "plate-energy";
    rep.scalars["energy"] = base.energy;
    rep.scalars["nonconcentration_C"] = base.nonconcentration_C;
    rep.scalars["normalized_ratio"] = base.normalized_ratio;
    rep.scalars["plates"] = static_cast<double>(base.plates);
    if (!cfg.in.empty() || (!cfg.kind.empty() && cfg.kind != "slab")) {
        const BallFamily other = input_family(cfg);
        PlateEnergyOptions opt;
        opt.reference_C = base.nonconcentration_C;
        const auto r = plate_l2_energy(other, opt);
        rep.scalars["other_energy"] = r.energy;
        rep.scalars["other_normalized_ratio"] = r.normalized_ratio;
        rep.scalars["other_nonconcentration_C"] = r.nonconcentration_C;
        rep.scalars["ratio_over_compliant"] = r.normalized_ratio / base.normalized_ratio;
    }
    emit(cfg, rep);
    return kPass;
}

int exp_rho_dim(const RunConfig& cfg) {
    std::vector<HeisPoint> K;
    double dim_e = 0.0, dim_h = 0.0;
    const std::string kind = cfg.kind.empty() ? "horizontal-segment" : cfg.kind;
    if (kind == "horizontal-segment") {
        for (int i = 0; i < 4000; ++i) K.emplace_back(-1.0 + 2.0 * i / 3999.0, 0.0, 0.0);
        dim_e = dim_h = 1.0;
    } else if (kind == "t-axis") {
        const double s = cfg.s.value_or(1.0);
        for (double t : cantor_points(0.0, 1.0, 0.5 * s, std::pow(4.0, -10))) K.emplace_back(0.0, 0.0, t);
        dim_e = 0.5 * s;
        dim_h = s;
    } else if (kind == "point") {
        K.assign(1000, HeisPoint(0.3, 0.1, 0.2));
    } else {
        throw UsageError("rho-dim kinds: horizontal-segment, t-axis, point");
    }
    const std::vector<double> scales{0.0625, 0.03125, 0.015625, 0.0078125};
    const auto r = rho_dimension_experiment(K, uniform_directions(cfg.directions), scales, dim_e, dim_h);
    ExperimentReport rep;
    rep.name = "rho-dim";
    rep.scalars["euclidean_target"] = r.euclidean_target;
    rep.scalars["sqrt_target"] = r.sqrt_target;
    rep.scalars["fraction_euclidean_ok"] = r.fraction_euclidean_ok;
    rep.scalars["fraction_sqrt_ok"] = r.fraction_sqrt_ok;
    rep.add_series("euclidean_slope", {"theta", "slope", r.thetas, r.euclidean_slopes});
    rep.add_series("sqrt_slope", {"theta", "slope", r.thetas, r.sqrt_slopes});
    emit(cfg, rep);
    return kPass;
}

// Parabolic covering slope of the projected horizontal-line family over delta = 2^-4 .. 2^-7.
int exp_covering(const RunConfig& cfg) {
    const double theta = cfg.t.value_or(0.7);
    std::vector<double> x, y;
    RasterOptions opt;
    opt.shape = PixelShape::square;
    for (int k = 4; k <= 7; ++k) {
        const double d = std::ldexp(1.0, -k);
        const auto F = gen_sharpness_example(SharpnessKind::horizontal_line, {d, 1.0, 8.0});
        const auto img = rasterize_projection(Direction(theta), F.centers, d, 0.5 * d * d, opt);
        const auto pts = img.centers();
        x.push_back(std::log(1.0 / d));
        y.push_back(std::log(static_cast<double>(plane_covering_number(pts, PlaneMetric::parabolic, d))));
    }
    const auto fit = ols_fit(x, y);
    ExperimentReport rep;
    rep.name = "covering";
    rep.scalars["theta"] = theta;
    rep.scalars["parabolic_slope"] = fit.slope;
    rep.add_series("log_count", {"log(1/delta)", "log N", x, y});
    emit(cfg, rep);
    return kPass;
}

int cmd_experiment(const RunConfig& cfg) {
    if (cfg.experiment == "best-direction") return exp_best_direction(cfg);
    if (cfg.experiment == "plate-energy") return exp_plate_energy(cfg);
    if (cfg.experiment == "rho-dim") return exp_rho_dim(cfg);
    if (cfg.experiment == "covering") return exp_covering(cfg);
    throw UsageError("unknown experiment '" + cfg.experiment + "' (best-direction, plate-energy, rho-dim, covering)");
}

int cmd_constants(const RunConfig& cfg) {
    const auto entries = derive_constants(cfg.seed);
    if (cfg.out.empty()) {
        write_manifest(std::cout, entries);
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw ResourceError("cannot write " + cfg.out);
        write_manifest(f, entries);
        std::cout << entries.size() << " constants written to " << cfg.out << '\n';
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Heisenberg projection and plate toolkit"};
    app.require_subcommand(1);
    app.add_option("--threads", cfg.threads, "worker threads (default: HEIS_GMT_THREADS or all cores)");

    auto common = [&](CLI::App* sub) {
        sub->add_option("--kind", cfg.kind, "family kind");
        sub->add_option("--delta", cfg.delta, "scale delta")->check(CLI::PositiveNumber);
        sub->add_option("--t", cfg.t, "dimension t");
        sub->add_option("--s", cfg.s, "dimension s");
        sub->add_option("--C", cfg.C, "claimed constant")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--directions", cfg.directions, "number of directions")->check(CLI::PositiveNumber);
        sub->add_option("--pixel", cfg.pixel, "pixel size")->check(CLI::PositiveNumber);
        sub->add_option("--in", cfg.in, "input file");
        sub->add_option("--out", cfg.out, "output file or report prefix");
        sub->add_option("--manifest", cfg.manifest, "constants manifest recorded in report provenance");
        sub->add_option("--threads", cfg.threads, "worker threads");
    };
    auto* gen = app.add_subcommand("gen", "write a ball family");
    common(gen);
    auto* verify = app.add_subcommand("verify", "check a family, a measure, or an identity suite");
    common(verify);
    verify->add_option("--suite", cfg.suite, "identity suite (duality)");
    verify->add_option("--trials", cfg.trials, "trials for --suite");
    auto* experiment = app.add_subcommand("experiment", "run a named experiment");
    common(experiment);
    experiment->add_option("name", cfg.experiment, "best-direction | plate-energy | rho-dim | covering")->required();
    auto* constants = app.add_subcommand("constants", "re-derive the constants manifest");
    common(constants);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    cfg.subcommand = app.get_subcommands().front()->get_name();

    try {
        if (gen->parsed()) return cmd_gen(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (experiment->parsed()) return cmd_experiment(cfg);
        return cmd_constants(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}
