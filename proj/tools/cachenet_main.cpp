// Command-line experiment runner: evaluates delivery probabilities, runs the
// placement optimisers, sweeps parameter grids and validates the analytic
// results against the Monte Carlo simulator. Data goes to --out (or stdout),
// progress and diagnostics go to stderr.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cachenet/experiments.hpp"
#include "cachenet/mc.hpp"
#include "cachenet/scdp_mm.hpp"
#include "cachenet/scdp_mu.hpp"

namespace {

using namespace cachenet;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

SimConfig load_config(const CommonOpts& opts) {
    SimConfig cfg = opts.config_path.empty() ? SimConfig{}
                                             : SimConfig::from_file(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    cfg.mc.seed = cfg.seed;
    cfg.cceo.seed = cfg.seed;
    return cfg;
}

void write_table(const ResultTable& table, const CommonOpts& opts) {
    const OutputFormat fmt = parse_format(opts.format);
    if (opts.out_path.empty())
        emit(table, fmt, std::cout);
    else {
        emit_to_file(table, fmt, opts.out_path);
        std::cerr << "wrote " << table.rows.size() << " rows to " << opts.out_path
                  << "\n";
    }
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
    cmd->add_option("--format", opts.format, "csv|json")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "RNG seed (overrides the config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cache-enabled small-cell delivery analysis"};
    app.require_subcommand(1);

    CommonOpts opts;

    // eval: analytic per-content and catalog-level delivery probabilities at
    // a fixed placement scheme, optionally cross-checked by simulation.
    auto* eval = app.add_subcommand("eval", "evaluate delivery probabilities");
    CommonOpts eval_opts;
    std::string eval_tier = "both", eval_scheme = "mpc";
    std::int64_t eval_drops = 0;
    add_common(eval, eval_opts);
    eval->add_option("--tier", eval_tier, "mu|mm|both")->capture_default_str();
    eval->add_option("--scheme", eval_scheme, "mpc|cceo|twostair")
        ->capture_default_str();
    eval->add_option("--mc-drops", eval_drops,
                     "add Monte Carlo columns with this many drops");

    // optimize: run the chosen placement optimisers and report placements.
    auto* opt = app.add_subcommand("optimize", "optimise the content placement");
    CommonOpts opt_opts;
    std::string opt_tier = "both", opt_schemes = "mpc,cceo,twostair";
    std::string opt_trace;
    std::int64_t opt_drops = 0;
    add_common(opt, opt_opts);
    opt->add_option("--tier", opt_tier, "mu|mm|both")->capture_default_str();
    opt->add_option("--scheme", opt_schemes, "comma list of mpc|cceo|twostair")
        ->capture_default_str();
    opt->add_option("--mc-drops", opt_drops, "Monte Carlo check of the result");
    opt->add_option("--trace-out", opt_trace,
                    "dump the cross-entropy iteration trace to this CSV");

    // sweep: parameter grids.
    auto* sweep = app.add_subcommand("sweep", "sweep a parameter grid");
    CommonOpts sweep_opts;
    std::string sweep_kind = "scdp-vs-b", sweep_tier = "both",
                sweep_schemes = "mpc,cceo,twostair";
    std::vector<double> sweep_grid, sweep_densities;
    std::int64_t sweep_drops = 0;
    bool sweep_timing = false;
    add_common(sweep, sweep_opts);
    sweep->add_option("--kind", sweep_kind,
                      "scdp-vs-b|scdp-vs-rate|sweep-M|sweep-J|sweep-gamma|"
                      "cache-density")
        ->capture_default_str();
    sweep->add_option("--tier", sweep_tier, "mu|mm|both")->capture_default_str();
    sweep->add_option("--scheme", sweep_schemes, "comma list of schemes")
        ->capture_default_str();
    sweep->add_option("--grid", sweep_grid, "grid values (kind-specific axis)");
    sweep->add_option("--density-grid", sweep_densities,
                      "densities per km^2 (cache-density only)");
    sweep->add_option("--mc-drops", sweep_drops, "Monte Carlo columns");
    sweep->add_flag("--timing", sweep_timing,
                    "add wall-time column (output no longer byte-reproducible)");

    // validate-mc: analytic vs Monte Carlo agreement grid.
    auto* val = app.add_subcommand("validate-mc",
                                   "check the analytic results against simulation");
    CommonOpts val_opts;
    double val_sigma = 3.0;
    std::int64_t val_drops = 0;
    add_common(val, val_opts);
    val->add_option("--tolerance-sigma", val_sigma, "pass threshold in std errors")
        ->capture_default_str();
    val->add_option("--mc-drops", val_drops, "drops per grid point");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            SimConfig cfg = load_config(eval_opts);
            ExperimentSpec spec;
            spec.kind = ExperimentKind::Optimize;
            spec.tier = parse_tier(eval_tier);
            spec.schemes = {parse_scheme(eval_scheme)};
            spec.seed = cfg.seed;
            spec.mc_drops = eval_drops;
            write_table(run_experiment(spec, cfg), eval_opts);
        } else if (opt->parsed()) {
            SimConfig cfg = load_config(opt_opts);
            ExperimentSpec spec;
            spec.kind = ExperimentKind::Optimize;
            spec.tier = parse_tier(opt_tier);
            spec.schemes = parse_scheme_list(opt_schemes);
            spec.seed = cfg.seed;
            spec.mc_drops = opt_drops;
            write_table(run_experiment(spec, cfg), opt_opts);
            if (!opt_trace.empty())
                emit_to_file(cceo_trace_table(spec.tier, cfg), OutputFormat::Csv,
                             opt_trace);
        } else if (sweep->parsed()) {
            SimConfig cfg = load_config(sweep_opts);
            ExperimentSpec spec;
            spec.kind = parse_experiment_kind(sweep_kind);
            spec.tier = parse_tier(sweep_tier);
            spec.schemes = parse_scheme_list(sweep_schemes);
            spec.grid = sweep_grid.empty() ? default_experiment_grid(spec.kind)
                                           : sweep_grid;
            spec.density_grid =
                sweep_densities.empty() ? default_density_grid() : sweep_densities;
            spec.seed = cfg.seed;
            spec.mc_drops = sweep_drops;
            spec.timing = sweep_timing;
            write_table(run_experiment(spec, cfg), sweep_opts);
        } else if (val->parsed()) {
            SimConfig cfg = load_config(val_opts);
            if (val_drops > 0) cfg.mc.drops = val_drops;
            const ValidationReport report = validate_mc(cfg, val_sigma);
            write_table(validation_table(report, cfg), val_opts);
            for (const auto& pt : report.points)
                std::cerr << (pt.pass ? "  ok  " : " FAIL ") << pt.tier
                          << (pt.tier == "mu" ? " N=" + std::to_string(pt.antennas)
                                              : std::string())
                          << " b=" << pt.b << " z=" << pt.z << "\n";
            if (!report.all_pass) {
                std::cerr << "validate-mc: agreement outside " << val_sigma
                          << " sigma\n";
                return 1;
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
