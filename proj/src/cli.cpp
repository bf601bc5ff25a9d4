#include "fraclap/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/evolution.hpp"
#include "fraclap/fields.hpp"
#include "fraclap/frac_laplacian.hpp"
#include "fraclap/frac_p_laplacian.hpp"
#include "fraclap/io.hpp"
#include "fraclap/validation.hpp"

namespace fraclap {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Manifest {
    explicit Manifest(std::string sub, json params = json::object())
        : subcommand(std::move(sub)), parameters(std::move(params)) {}

    std::string subcommand;
    json parameters;
    json timings = json::object();
    std::vector<std::string> outputs;

    json to_json() const {
        return {{"subcommand", subcommand},
                {"parameters", parameters},
                {"version", kToolVersion},
                {"timings", timings},
                {"outputs", outputs}};
    }

    void write(const fs::path& dir) {
        const fs::path path = dir / "manifest.json";
        outputs.push_back(path.string());
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ParameterError("cannot write " + path.string());
        f << to_json().dump(2) << '\n';
    }
};

struct GridArgs {
    std::vector<std::size_t> dims;
    std::vector<double> scales;
    double s = 0.0;
    std::string field = "gaussian";
};

void add_grid_options(CLI::App* sub, GridArgs& g) {
    sub->add_option("--dims", g.dims, "Nodes per dimension, comma separated")->required()->delimiter(',');
    sub->add_option("--scales", g.scales, "Map scale per dimension, comma separated")->required()->delimiter(',');
    sub->add_option("--s", g.s, "Fractional order in (0,1)")->required();
    sub->add_option("--field", g.field, "gaussian or lorentzian:r");
}

std::vector<FactorPtr> factors_for(const std::vector<std::size_t>& dims) {
    std::map<std::size_t, FactorPtr> cache;
    std::vector<FactorPtr> out;
    for (std::size_t n : dims) {
        auto& f = cache[n];
        if (!f) f = make_factor(n);
        out.push_back(f);
    }
    return out;
}

json grid_params(const GridArgs& g) {
    return {{"dims", g.dims}, {"scales", g.scales}, {"s", g.s}, {"field", g.field}};
}

fs::path prepare_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ParameterError("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

int cmd_nodes(std::size_t n, double scale, std::ostream& out) {
    const Grid1D g = make_grid(n, scale);
    out << "j,xi,x\n";
    for (std::size_t j = 0; j < n; ++j) {
        const auto k = static_cast<Eigen::Index>(j);
        out << (j + 1) << ',' << format_double(g.xi(k)) << ',' << format_double(g.x(k)) << '\n';
    }
    return 0;
}

int cmd_factor(std::size_t n, std::optional<double> scale, std::ostream& out) {
    const double L = scale.value_or(1.0);
    const Grid1D g = make_grid(n, L);
    const DiffMatrices dm = build_diff_matrices(g);
    const SpectralFactor f = factorize(dm.Dxx);
    const Matrix rebuilt = f.P * f.lambda.asDiagonal() * f.Pinv;
    const double residual = (dm.Dxx - rebuilt).cwiseAbs().maxCoeff() / dm.Dxx.cwiseAbs().maxCoeff();
    const double l2 = L * L;
    json j = {{"N", n},
              {"scale", L},
              {"min_lambda", f.lambda.minCoeff() / l2},
              {"raw_zero_lambda", f.raw_zero_lambda / l2},
              {"condition_number", condition_number(f.P)},
              {"reconstruction_residual", residual}};
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_fraclap(const GridArgs& g, bool compare, const std::string& out_dir, std::ostream& out) {
    const FieldSpec spec = FieldSpec::parse(g.field);
    const std::vector<Grid1D> grids = make_grids(g.dims, g.scales);
    Manifest m{"fraclap", grid_params(g)};
    m.parameters["compare_exact"] = compare;

    auto t0 = Clock::now();
    const FracLapOperator op = build_fraclap(factors_for(g.dims), g.scales, g.s);
    m.timings["build"] = seconds_since(t0);
    const NdArray U = make_field(spec, grids);
    t0 = Clock::now();
    const NdArray result = apply_fraclap(op, U);
    const double core = seconds_since(t0);
    m.timings["core"] = core;

    json report = {{"wall_time_core", core}};
    if (compare) {
        t0 = Clock::now();
        const NdArray exact = exact_fraclap_field(spec, g.s, grids);
        report["wall_time_oracle"] = seconds_since(t0);
        report["max_error"] = max_abs_diff(result, exact);
        m.timings["oracle"] = report["wall_time_oracle"];
    }
    const fs::path dir = prepare_dir(out_dir);
    const fs::path csv = dir / "fraclap.csv";
    write_ndarray_csv(csv, result);
    m.outputs = {csv.string(), sidecar_path(csv).string()};
    m.write(dir);
    report["manifest"] = m.to_json();
    out << report.dump(2) << '\n';
    return 0;
}

std::optional<NdArray> run_mode(const std::string& mode, const FracPOperator& op, const NdArray& U,
                                std::size_t budget, double& seconds) {
    const auto t0 = Clock::now();
    NdArray r = mode == "loop" ? apply_plap_pointwise(op, U) : apply_plap_batched(op, U, budget);
    seconds = seconds_since(t0);
    return r;
}

void warn_large_order(double s, double p, std::ostream& err) {
    if (s * p >= 2.0) {
        err << "warning: sp = " << s * p
            << " >= 2; values follow the pointwise formula but the operator identification is unverified\n";
    }
}

int cmd_fracplap(const GridArgs& g, double p, const std::string& mode, bool compare, bool compare_modes,
                 std::size_t budget, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    if (compare && p != 2.0) throw ParameterError("--compare-exact is only available for p = 2");
    const FieldSpec spec = FieldSpec::parse(g.field);
    const std::vector<Grid1D> grids = make_grids(g.dims, g.scales);
    warn_large_order(g.s, p, err);
    Manifest m{"fracplap", grid_params(g)};
    m.parameters["p"] = p;
    m.parameters["mode"] = mode;
    m.parameters["compare_exact"] = compare;
    m.parameters["compare_modes"] = compare_modes;
    m.parameters["byte_budget"] = budget;

    auto t0 = Clock::now();
    const FracPOperator op = build_fracplap(factors_for(g.dims), g.scales, g.s, p);
    m.timings["build"] = seconds_since(t0);
    const NdArray U = make_field(spec, grids);
    double wall = 0.0;
    const NdArray result = *run_mode(mode, op, U, budget, wall);
    m.timings[mode] = wall;

    json report = {{"mode", mode}, {"wall_time", wall}};
    if (compare_modes) {
        const std::string other = mode == "loop" ? "batch" : "loop";
        if (other == "batch" && batched_table_bytes(op) > budget) {
            report["discrepancy_vs_other_mode"] = "skipped: memory guard";
        } else {
            double other_wall = 0.0;
            const NdArray alt = *run_mode(other, op, U, budget, other_wall);
            m.timings[other] = other_wall;
            report["discrepancy_vs_other_mode"] = max_abs_diff(result, alt);
        }
    }
    if (compare) report["max_error"] = max_abs_diff(result, exact_fraclap_field(spec, g.s, grids));
    const fs::path dir = prepare_dir(out_dir);
    const fs::path csv = dir / "fracplap.csv";
    write_ndarray_csv(csv, result);
    m.outputs = {csv.string(), sidecar_path(csv).string()};
    m.write(dir);
    report["manifest"] = m.to_json();
    out << report.dump(2) << '\n';
    return 0;
}

std::string time_tag(double t) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", t);
    return buf;
}

int cmd_evolve(const std::string& config_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    const KeyValues kv = read_key_values(config_path);
    const EvolutionConfig cfg = evolution_config_from(kv);
    const FieldSpec spec = FieldSpec::parse(kv.count("field") ? kv.at("field") : "gaussian");
    warn_large_order(cfg.s, cfg.p, err);
    const SelfSimilarParams ss = self_similar_params(cfg.n, cfg.s, cfg.p);
    if (ss.below_critical) {
        err << "warning: p = " << cfg.p << " <= p_c = " << ss.p_c << "; the self-similar rescaling does not apply\n";
    }
    Manifest m{"evolve"};
    m.parameters = {{"config", config_path}, {"n", cfg.n},      {"s", cfg.s},         {"p", cfg.p},
                    {"N", cfg.N},            {"L", cfg.L},      {"dt", cfg.dt},       {"t_end", cfg.t_end},
                    {"snapshots", cfg.snapshot_times},          {"field", spec.name()}, {"byte_budget", cfg.byte_budget}};

    const std::vector<Grid1D> grids(static_cast<std::size_t>(cfg.n), make_grid(cfg.N, cfg.L));
    const NdArray u0 = make_field(spec, grids);
    const auto t0 = Clock::now();
    const EvolutionRun run = run_evolution(cfg, u0);
    const double wall = seconds_since(t0);
    m.timings["evolve"] = wall;

    const fs::path dir = prepare_dir(out_dir);
    json masses = json::array();
    std::vector<Section> sections;
    for (const Snapshot& snap : run.snapshots) {
        const fs::path csv = dir / ("snap_t" + time_tag(snap.t) + ".csv");
        std::ofstream f(csv, std::ios::binary);
        if (!f) throw ParameterError("cannot write " + csv.string());
        f << "x,u,r,v\n";
        const Section& sec = snap.section;
        for (std::size_t i = 0; i < sec.x.size(); ++i) {
            f << format_double(sec.x[i]) << ',' << format_double(sec.u[i]) << ',' << format_double(sec.r[i]) << ','
              << format_double(sec.v[i]) << '\n';
        }
        m.outputs.push_back(csv.string());
        masses.push_back({{"t", snap.t}, {"step", snap.step}, {"mass", snap.mass}});
        sections.push_back(sec);
    }
    json report = {{"masses", masses},
                   {"initial_mass", run.initial_mass},
                   {"final_mass", run.final_mass},
                   {"drift", run.max_mass_drift},
                   {"steps", run.steps},
                   {"operator_mode", run.batched ? "batch" : "loop"},
                   {"self_similar", {{"alpha", ss.alpha}, {"beta", ss.beta}, {"p_c", ss.p_c}, {"p_1", ss.p_1}}},
                   {"wall_time", wall}};
    if (sections.size() >= 2) report["profile_sup_distance"] = profile_sup_distance(sections);
    m.write(dir);
    report["manifest"] = m.to_json();
    out << report.dump(2) << '\n';
    return 0;
}

int cmd_validate(const std::string& suite, std::ostream& out) {
    const std::vector<ValidationRow> rows = run_validation_suite(suite);
    json table = json::array();
    bool all = true;
    for (const auto& r : rows) {
        table.push_back({{"check", r.name}, {"deviation", r.deviation}, {"tolerance", r.tolerance}, {"pass", r.pass}});
        all = all && r.pass;
    }
    out << json{{"suite", suite}, {"pass", all}, {"rows", table}}.dump(2) << '\n';
    if (!all) throw NumericalError(NumericalError::Kind::NoConvergence, "validation suite '" + suite + "' failed");
    return 0;
}

int cmd_bench(const GridArgs& g, double p, std::size_t budget, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
    const FieldSpec spec = FieldSpec::parse(g.field);
    const std::vector<Grid1D> grids = make_grids(g.dims, g.scales);
    warn_large_order(g.s, p, err);
    Manifest m{"bench", grid_params(g)};
    m.parameters["p"] = p;
    m.parameters["byte_budget"] = budget;
    m.parameters["threads"] = omp_get_max_threads();

    const FracPOperator op = build_fracplap(factors_for(g.dims), g.scales, g.s, p);
    const NdArray U = make_field(spec, grids);
    double loop_wall = 0.0;
    const NdArray loop = *run_mode("loop", op, U, budget, loop_wall);
    m.timings["loop"] = loop_wall;
    json report = {{"loop_wall_time", loop_wall}};
    if (batched_table_bytes(op) > budget) {
        report["batch"] = "skipped: memory guard";
    } else {
        double batch_wall = 0.0;
        const NdArray batch = *run_mode("batch", op, U, budget, batch_wall);
        m.timings["batch"] = batch_wall;
        report["batch_wall_time"] = batch_wall;
        report["discrepancy"] = max_abs_diff(loop, batch);
    }
    if (p == 2.0) report["max_error"] = max_abs_diff(loop, exact_fraclap_field(spec, g.s, grids));
    const fs::path dir = prepare_dir(out_dir);
    m.write(dir);
    report["manifest"] = m.to_json();
    out << report.dump(2) << '\n';
    return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral fractional Laplacian and p-Laplacian toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (default: machine width; 1 = deterministic mode)")
        ->check(CLI::NonNegativeNumber);

    std::size_t n = 0;
    double scale = 1.0;
    std::optional<double> factor_scale;
    GridArgs grid;
    double p = 2.0;
    std::string mode = "loop";
    bool compare = false;
    bool compare_modes = false;
    std::size_t budget = kDefaultByteBudget;
    std::string out_dir = "out";
    std::string config;
    std::string suite;

    auto* nodes = app.add_subcommand("nodes", "Print the mapped grid as CSV");
    nodes->add_option("--n", n, "Number of nodes")->required();
    nodes->add_option("--scale", scale, "Map scale L")->required();

    auto* factor = app.add_subcommand("factor", "Diagonalize Dxx and report its spectrum and conditioning");
    factor->add_option("--n", n, "Number of nodes")->required();
    factor->add_option("--scale", factor_scale, "Map scale L (scales the reported eigenvalues)");

    auto* fraclap = app.add_subcommand("fraclap", "Apply the fractional Laplacian to a built-in field");
    add_grid_options(fraclap, grid);
    fraclap->add_flag("--compare-exact", compare, "Report the max-norm error against the closed form");
    fraclap->add_option("--out-dir", out_dir, "Output directory");

    auto* fracplap = app.add_subcommand("fracplap", "Apply the fractional p-Laplacian to a built-in field");
    add_grid_options(fracplap, grid);
    fracplap->add_option("--p", p, "Exponent p >= 1")->required();
    fracplap->add_option("--mode", mode, "loop or batch")->check(CLI::IsMember({"loop", "batch"}));
    fracplap->add_flag("--compare-exact", compare, "Max-norm error against the closed form (p = 2 only)");
    fracplap->add_flag("--compare-modes", compare_modes, "Also run the other mode and report the discrepancy");
    fracplap->add_option("--byte-budget", budget, "Memory guard for the batched table in bytes");
    fracplap->add_option("--out-dir", out_dir, "Output directory");

    auto* evolve = app.add_subcommand("evolve", "Integrate the nonlocal diffusion equation from a config file");
    evolve->add_option("--config", config, "key = value config file")->required()->check(CLI::ExistingFile);
    evolve->add_option("--out-dir", out_dir, "Output directory");

    auto* validate = app.add_subcommand("validate", "Run a special-function self-check suite");
    validate->add_option("--suite", suite, "lemmas, hyp or gamma")
        ->required()
        ->check(CLI::IsMember({"lemmas", "hyp", "gamma"}));

    auto* bench = app.add_subcommand("bench", "Time loop and batch p-Laplacian evaluation on one input");
    add_grid_options(bench, grid);
    bench->add_option("--p", p, "Exponent p >= 1")->required();
    bench->add_option("--byte-budget", budget, "Memory guard for the batched table in bytes");
    bench->add_option("--out-dir", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*nodes) return cmd_nodes(n, scale, out);
        if (*factor) return cmd_factor(n, factor_scale, out);
        if (*fraclap) return cmd_fraclap(grid, compare, out_dir, out);
        if (*fracplap) return cmd_fracplap(grid, p, mode, compare, compare_modes, budget, out_dir, out, err);
        if (*evolve) return cmd_evolve(config, out_dir, out, err);
        if (*validate) return cmd_validate(suite, out);
        if (*bench) return cmd_bench(grid, p, budget, out_dir, out, err);
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 1;
    } catch (const NumericalError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace fraclap
