#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cachenet/config.hpp"

namespace cachenet {

enum class Tier { Mu, Mm, Both };
enum class Scheme { Mpc, Cceo, TwoStair };
enum class OutputFormat { Csv, Json };

const char* tier_name(Tier t);
const char* scheme_name(Scheme s);
Tier parse_tier(const std::string& s);
Scheme parse_scheme(const std::string& s);
std::vector<Scheme> parse_scheme_list(const std::string& csv);
OutputFormat parse_format(const std::string& s);

enum class ExperimentKind {
    ScdpVsB,      // per-content delivery probability against caching probability
    ScdpVsRate,   // b = 1 delivery probability against the content bit rate
    SweepM,       // cache capacity sweep per scheme
    SweepJ,       // catalog size sweep per scheme
    SweepGamma,   // popularity skewness sweep per scheme
    CacheDensity, // (density, capacity) grid for the storage/density tradeoff
    Optimize,     // one-shot optimisation report
};

ExperimentKind parse_experiment_kind(const std::string& s);
const char* experiment_kind_name(ExperimentKind k);

// Canonical axis for each experiment kind; callers that take grids from the
// command line fall back to these.
std::vector<double> default_experiment_grid(ExperimentKind kind);
std::vector<double> default_density_grid();

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::ScdpVsB;
    Tier tier = Tier::Both;
    std::vector<Scheme> schemes = {Scheme::Mpc, Scheme::Cceo, Scheme::TwoStair};
    std::vector<double> grid;          // kind-specific axis; must be non-empty
    std::vector<double> density_grid;  // cache-density only, per km^2
    std::uint64_t seed = 1;
    std::int64_t mc_drops = 0;  // > 0 adds Monte Carlo columns
    bool timing = false;        // wall-time column (breaks byte-reproducibility)
};

struct Cell {
    enum class Kind { Empty, Number, Text } kind = Kind::Empty;
    double number = 0.0;
    std::string text;

    Cell() = default;
    Cell(double v) : kind(Kind::Number), number(v) {}
    Cell(std::string t) : kind(Kind::Text), text(std::move(t)) {}
};

struct ResultTable {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Runs the experiment over its grid. Failures at a grid point leave the
// numeric cells empty and record the message in the trailing error column;
// the remaining points still run. Deterministic given (config, spec.seed).
ResultTable run_experiment(const ExperimentSpec& spec, const SimConfig& config);

struct ValidationPoint {
    std::string tier;
    int antennas = 0;
    double b = 0.0;
    double analytic = 0.0;
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationPoint> points;
    double tolerance_sigma = 3.0;
    bool all_pass = false;
};

// Analytic-vs-Monte-Carlo agreement grid: both tiers, b in {0.2, 0.5, 1},
// antennas in {1, 2, 4} for the sub-6 GHz tier. A point passes when the
// z-score |analytic - mc| / se is within tolerance_sigma.
ValidationReport validate_mc(const SimConfig& config, double tolerance_sigma);

ResultTable validation_table(const ValidationReport& report, const SimConfig& config);

// Cross-entropy iteration trace (tier, iteration, max variance, best
// penalised objective, mean vector) for evolution plots.
ResultTable cceo_trace_table(Tier tier, const SimConfig& config);

// Serialisation: stable column order, %.12g floats, header line carrying the
// config hash and seed. Re-emitting the same table is byte-identical.
void emit(const ResultTable& table, OutputFormat format, std::ostream& out);
void emit_to_file(const ResultTable& table, OutputFormat format,
                  const std::string& path);

}  // namespace cachenet
