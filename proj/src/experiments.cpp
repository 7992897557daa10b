#include "cachenet/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cachenet/mc.hpp"
#include "cachenet/scdp_mm.hpp"
#include "cachenet/scdp_mu.hpp"

namespace cachenet {

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::Mu: return "mu";
        case Tier::Mm: return "mm";
        default: return "both";
    }
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Mpc: return "mpc";
        case Scheme::Cceo: return "cceo";
        default: return "twostair";
    }
}

Tier parse_tier(const std::string& s) {
    if (s == "mu") return Tier::Mu;
    if (s == "mm") return Tier::Mm;
    if (s == "both") return Tier::Both;
    throw std::invalid_argument("unknown tier '" + s + "' (mu|mm|both)");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "mpc") return Scheme::Mpc;
    if (s == "cceo") return Scheme::Cceo;
    if (s == "twostair") return Scheme::TwoStair;
    throw std::invalid_argument("unknown scheme '" + s + "' (mpc|cceo|twostair)");
}

std::vector<Scheme> parse_scheme_list(const std::string& csv) {
    std::vector<Scheme> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_scheme(item));
    if (out.empty()) throw std::invalid_argument("empty scheme list");
    return out;
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format '" + s + "' (csv|json)");
}

ExperimentKind parse_experiment_kind(const std::string& s) {
    if (s == "scdp-vs-b") return ExperimentKind::ScdpVsB;
    if (s == "scdp-vs-rate") return ExperimentKind::ScdpVsRate;
    if (s == "sweep-M") return ExperimentKind::SweepM;
    if (s == "sweep-J") return ExperimentKind::SweepJ;
    if (s == "sweep-gamma") return ExperimentKind::SweepGamma;
    if (s == "cache-density") return ExperimentKind::CacheDensity;
    if (s == "optimize") return ExperimentKind::Optimize;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

const char* experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ScdpVsB: return "scdp-vs-b";
        case ExperimentKind::ScdpVsRate: return "scdp-vs-rate";
        case ExperimentKind::SweepM: return "sweep-M";
        case ExperimentKind::SweepJ: return "sweep-J";
        case ExperimentKind::SweepGamma: return "sweep-gamma";
        case ExperimentKind::CacheDensity: return "cache-density";
        default: return "optimize";
    }
}

namespace {

struct SchemeOutcome {
    PlacementVector placement;
    double scdp = 0.0;
};

SchemeOutcome run_scheme(Scheme scheme, Tier tier, const SimConfig& config,
                         const ContentLibrary& lib, const MuCoverageContext& mu_ctx,
                         const MmCoverageContext& mm_ctx, std::uint64_t seed) {
    SchemeOutcome out;
    const bool is_mu = tier == Tier::Mu;
    switch (scheme) {
        case Scheme::Mpc:
            out.placement = mpc_placement(lib);
            break;
        case Scheme::Cceo: {
            CceoParams params = config.cceo;
            params.seed = seed;
            const ObjectiveFn objective = [&](const std::vector<double>& b) {
                PlacementVector p;
                p.b = b;
                double total = 0.0;
                for (int j = 0; j < lib.num_contents; ++j) {
                    if (p.b[j] <= 0.0) continue;
                    total += lib.popularity[j] *
                             (is_mu ? mu_ctx.cached_scdp(p.b[j])
                                    : scdp_content_mm(p.b[j], mm_ctx));
                }
                return total;
            };
            out.placement = cceo_optimize(objective, lib, params).placement;
            break;
        }
        case Scheme::TwoStair: {
            const TwoStairResult res =
                is_mu ? twostair_optimize_mu(lib, mu_ctx, config.newton)
                      : twostair_optimize_mm(lib, mm_ctx, config.newton);
            out.placement = res.placement;
            break;
        }
    }
    out.scdp = is_mu ? scdp_total_mu(out.placement, lib, mu_ctx)
                     : scdp_total_mm(out.placement, lib, mm_ctx);
    return out;
}

std::vector<Tier> expand_tier(Tier t) {
    if (t == Tier::Both) return {Tier::Mu, Tier::Mm};
    return {t};
}

std::string placement_summary(const PlacementVector& p) {
    std::string s;
    for (std::size_t j = 0; j < p.b.size(); ++j) {
        if (j) s += ';';
        s += format_g12(p.b[j]);
    }
    return s;
}

using RowBuilder = std::vector<Cell>;

}  // namespace

std::vector<double> default_experiment_grid(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ScdpVsB:
            return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        case ExperimentKind::ScdpVsRate:
            return {1e5, 2e5, 4e5, 8e5, 1.6e6, 3.2e6, 6.4e6, 1.28e7, 2.56e7, 5.12e7};
        case ExperimentKind::SweepM:
            return {5, 10, 15, 20, 25};
        case ExperimentKind::SweepJ:
            return {50, 100, 150, 200};
        case ExperimentKind::SweepGamma:
            return {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
        case ExperimentKind::CacheDensity:
            return {10, 15, 20, 25, 30};  // capacities; densities separate
        case ExperimentKind::Optimize:
            return {0};  // single point
    }
    return {};
}


std::vector<double> default_density_grid() { return {400, 600, 800, 1000}; }

ResultTable run_experiment(const ExperimentSpec& spec, const SimConfig& config) {
    ResultTable table;
    table.config_hash = config.hash();
    table.seed = spec.seed;

    std::vector<double> grid = spec.grid;
    if (spec.kind == ExperimentKind::Optimize)
        grid = {0};  // single point, no axis
    if (grid.empty()) throw std::invalid_argument("experiment: empty grid");
    const std::vector<double>& densities = spec.density_grid;
    if (spec.kind == ExperimentKind::CacheDensity && densities.empty())
        throw std::invalid_argument("experiment: empty density grid");

    const std::vector<Tier> tiers = expand_tier(spec.tier);

    // Column layout per kind (error column always last).
    switch (spec.kind) {
        case ExperimentKind::ScdpVsB: {
            table.columns = {"b"};
            for (Tier t : tiers) {
                if (t == Tier::Mu) {
                    table.columns.push_back("scdp_mu");
                    if (spec.mc_drops > 0) {
                        table.columns.push_back("mc_mu");
                        table.columns.push_back("mc_mu_se");
                    }
                } else {
                    table.columns.insert(table.columns.end(),
                                         {"scdp_mm_los", "scdp_mm_nlos", "scdp_mm"});
                    if (spec.mc_drops > 0) {
                        table.columns.push_back("mc_mm");
                        table.columns.push_back("mc_mm_se");
                    }
                }
            }
            break;
        }
        case ExperimentKind::ScdpVsRate: {
            table.columns = {"rate_bps"};
            for (Tier t : tiers) {
                if (t == Tier::Mu)
                    table.columns.insert(table.columns.end(), {"phi_mu", "scdp_mu_b1"});
                else
                    table.columns.insert(
                        table.columns.end(),
                        {"phi_mm", "scdp_mm_los_b1", "scdp_mm_nlos_b1", "scdp_mm_b1"});
            }
            break;
        }
        case ExperimentKind::SweepM:
        case ExperimentKind::SweepJ:
        case ExperimentKind::SweepGamma: {
            table.columns = {spec.kind == ExperimentKind::SweepM
                                 ? "M"
                                 : spec.kind == ExperimentKind::SweepJ ? "J" : "gamma"};
            for (Tier t : tiers)
                for (Scheme s : spec.schemes) {
                    table.columns.push_back(std::string("scdp_") + scheme_name(s) +
                                            "_" + tier_name(t));
                    if (spec.mc_drops > 0) {
                        table.columns.push_back(std::string("mc_") + scheme_name(s) +
                                                "_" + tier_name(t));
                        table.columns.push_back(std::string("mc_") + scheme_name(s) +
                                                "_" + tier_name(t) + "_se");
                    }
                }
            break;
        }
        case ExperimentKind::CacheDensity: {
            table.columns = {"density_per_km2", "M"};
            for (Tier t : tiers)
                for (Scheme s : spec.schemes)
                    table.columns.push_back(std::string("scdp_") + scheme_name(s) +
                                            "_" + tier_name(t));
            break;
        }
        case ExperimentKind::Optimize: {
            table.columns = {"scheme", "tier", "scdp"};
            if (spec.mc_drops > 0)
                table.columns.insert(table.columns.end(), {"mc", "mc_se"});
            table.columns.push_back("placement");
            break;
        }
    }
    if (spec.timing) table.columns.push_back("wall_time_s");
    table.columns.push_back("error");

    // Grid-point worker. Rows are appended in grid order; a failure fills
    // the error column and leaves the rest of the row empty.
    const auto run_point = [&](const std::function<void(RowBuilder&)>& body,
                               RowBuilder& row, std::size_t fixed_cells) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            body(row);
        } catch (const std::exception& e) {
            error = e.what();
            row.resize(fixed_cells);
            row.resize(table.columns.size() - 1 - (spec.timing ? 1 : 0));
        }
        if (spec.timing) {
            const std::chrono::duration<double> dt =
                std::chrono::steady_clock::now() - t0;
            row.emplace_back(dt.count());
        }
        row.emplace_back(error.empty() ? Cell() : Cell(error));
    };

    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double gv = grid[gi];

        if (spec.kind == ExperimentKind::CacheDensity) {
            for (double dens : densities) {
                RowBuilder row;
                row.emplace_back(dens);
                row.emplace_back(gv);
                run_point(
                    [&](RowBuilder& r) {
                        SimConfig local = config;
                        local.cache_capacity = gv;
                        local.mu.density_per_m2 = dens * 1e-6;
                        local.mm.density_per_m2 = dens * 1e-6;
                        const ContentLibrary lib = local.library();
                        const MuCoverageContext mu_ctx(local.mu, local.phi_mu());
                        const MmCoverageContext mm_ctx(local.mm, local.phi_mm());
                        for (Tier t : tiers)
                            for (Scheme s : spec.schemes)
                                r.emplace_back(run_scheme(s, t, local, lib, mu_ctx,
                                                          mm_ctx, spec.seed)
                                                   .scdp);
                    },
                    row, 2);
                table.rows.push_back(std::move(row));
            }
            continue;
        }

        RowBuilder row;
        row.emplace_back(spec.kind == ExperimentKind::Optimize ? Cell() : Cell(gv));

        switch (spec.kind) {
            case ExperimentKind::ScdpVsB: {
                run_point(
                    [&](RowBuilder& r) {
                        const double b = gv;
                        McParams mc = config.mc;
                        mc.drops = spec.mc_drops;
                        mc.seed = spec.seed + gi;
                        for (Tier t : tiers) {
                            if (t == Tier::Mu) {
                                const MuCoverageContext ctx(config.mu, config.phi_mu());
                                r.emplace_back(scdp_content_mu(b, ctx));
                                if (spec.mc_drops > 0) {
                                    const McEstimate est = simulate_scdp_mu(
                                        b, config.mu, config.phi_mu(), mc);
                                    r.emplace_back(est.mean);
                                    r.emplace_back(est.std_error);
                                }
                            } else {
                                const MmCoverageContext ctx(config.mm, config.phi_mm());
                                r.emplace_back(scdp_content_mm_los(b, ctx));
                                r.emplace_back(scdp_content_mm_nlos(b, ctx));
                                r.emplace_back(scdp_content_mm(b, ctx));
                                if (spec.mc_drops > 0) {
                                    const McEstimate est = simulate_scdp_mm(
                                        b, config.mm, config.phi_mm(), mc);
                                    r.emplace_back(est.mean);
                                    r.emplace_back(est.std_error);
                                }
                            }
                        }
                    },
                    row, 1);
                break;
            }
            case ExperimentKind::ScdpVsRate: {
                run_point(
                    [&](RowBuilder& r) {
                        SimConfig local = config;
                        local.rate_bps = gv;
                        for (Tier t : tiers) {
                            if (t == Tier::Mu) {
                                const MuCoverageContext ctx(local.mu, local.phi_mu());
                                r.emplace_back(local.phi_mu());
                                r.emplace_back(scdp_content_mu(1.0, ctx));
                            } else {
                                const MmCoverageContext ctx(local.mm, local.phi_mm());
                                r.emplace_back(local.phi_mm());
                                r.emplace_back(scdp_content_mm_los(1.0, ctx));
                                r.emplace_back(scdp_content_mm_nlos(1.0, ctx));
                                r.emplace_back(scdp_content_mm(1.0, ctx));
                            }
                        }
                    },
                    row, 1);
                break;
            }
            case ExperimentKind::SweepM:
            case ExperimentKind::SweepJ:
            case ExperimentKind::SweepGamma: {
                run_point(
                    [&](RowBuilder& r) {
                        SimConfig local = config;
                        if (spec.kind == ExperimentKind::SweepM)
                            local.cache_capacity = gv;
                        else if (spec.kind == ExperimentKind::SweepJ)
                            local.num_contents = static_cast<int>(gv);
                        else
                            local.zipf_exponent = gv;
                        const ContentLibrary lib = local.library();
                        const MuCoverageContext mu_ctx(local.mu, local.phi_mu());
                        const MmCoverageContext mm_ctx(local.mm, local.phi_mm());
                        for (Tier t : tiers)
                            for (Scheme s : spec.schemes) {
                                const SchemeOutcome outcome = run_scheme(
                                    s, t, local, lib, mu_ctx, mm_ctx, spec.seed);
                                r.emplace_back(outcome.scdp);
                                if (spec.mc_drops > 0) {
                                    McParams mc = local.mc;
                                    mc.drops = spec.mc_drops;
                                    mc.seed = spec.seed + gi;
                                    const TotalScdpEstimates est = simulate_total(
                                        outcome.placement, lib, local.mu,
                                        local.phi_mu(), local.mm, local.phi_mm(), mc);
                                    const McEstimate& e =
                                        t == Tier::Mu ? est.mu : est.mm;
                                    r.emplace_back(e.mean);
                                    r.emplace_back(e.std_error);
                                }
                            }
                    },
                    row, 1);
                break;
            }
            case ExperimentKind::Optimize: {
                // One row per (scheme, tier) pair instead of a grid.
                break;
            }
            case ExperimentKind::CacheDensity:
                break;  // handled above
        }
        if (spec.kind != ExperimentKind::Optimize)
            table.rows.push_back(std::move(row));
    }

    if (spec.kind == ExperimentKind::Optimize) {
        const ContentLibrary lib = config.library();
        const MuCoverageContext mu_ctx(config.mu, config.phi_mu());
        const MmCoverageContext mm_ctx(config.mm, config.phi_mm());
        for (Tier t : expand_tier(spec.tier))
            for (Scheme s : spec.schemes) {
                RowBuilder row;
                row.emplace_back(std::string(scheme_name(s)));
                row.emplace_back(std::string(tier_name(t)));
                run_point(
                    [&](RowBuilder& r) {
                        const SchemeOutcome outcome =
                            run_scheme(s, t, config, lib, mu_ctx, mm_ctx, spec.seed);
                        r.emplace_back(outcome.scdp);
                        if (spec.mc_drops > 0) {
                            McParams mc = config.mc;
                            mc.drops = spec.mc_drops;
                            mc.seed = spec.seed;
                            const TotalScdpEstimates est = simulate_total(
                                outcome.placement, lib, config.mu, config.phi_mu(),
                                config.mm, config.phi_mm(), mc);
                            const McEstimate& e = t == Tier::Mu ? est.mu : est.mm;
                            r.emplace_back(e.mean);
                            r.emplace_back(e.std_error);
                        }
                        r.emplace_back(placement_summary(outcome.placement));
                    },
                    row, 2);
                table.rows.push_back(std::move(row));
            }
    }

    return table;
}

ValidationReport validate_mc(const SimConfig& config, double tolerance_sigma) {
    ValidationReport report;
    report.tolerance_sigma = tolerance_sigma;
    report.all_pass = true;

    const double bs[] = {0.2, 0.5, 1.0};
    const int antennas[] = {1, 2, 4};

    for (int n : antennas) {
        MuTierConfig mu = config.mu;
        mu.antennas = n;
        const MuCoverageContext ctx(mu, config.phi_mu());
        for (double b : bs) {
            McParams mc = config.mc;
            mc.seed = config.seed + n * 1000 + static_cast<int>(b * 10);
            ValidationPoint pt;
            pt.tier = "mu";
            pt.antennas = n;
            pt.b = b;
            pt.analytic = scdp_content_mu(b, ctx);
            const McEstimate est = simulate_scdp_mu(b, mu, config.phi_mu(), mc);
            pt.mc_mean = est.mean;
            pt.mc_se = est.std_error;
            pt.z = est.std_error > 0 ? (pt.analytic - est.mean) / est.std_error : 0.0;
            pt.pass = std::fabs(pt.z) <= tolerance_sigma;
            report.all_pass = report.all_pass && pt.pass;
            report.points.push_back(pt);
        }
    }
    {
        const MmCoverageContext ctx(config.mm, config.phi_mm());
        for (double b : bs) {
            McParams mc = config.mc;
            mc.seed = config.seed + 77 + static_cast<int>(b * 10);
            ValidationPoint pt;
            pt.tier = "mm";
            pt.b = b;
            pt.analytic = scdp_content_mm(b, ctx);
            const McEstimate est = simulate_scdp_mm(b, config.mm, config.phi_mm(), mc);
            pt.mc_mean = est.mean;
            pt.mc_se = est.std_error;
            pt.z = est.std_error > 0 ? (pt.analytic - est.mean) / est.std_error : 0.0;
            pt.pass = std::fabs(pt.z) <= tolerance_sigma;
            report.all_pass = report.all_pass && pt.pass;
            report.points.push_back(pt);
        }
    }
    return report;
}

ResultTable validation_table(const ValidationReport& report,
                             const SimConfig& config) {
    ResultTable table;
    table.config_hash = config.hash();
    table.seed = config.seed;
    table.columns = {"tier", "antennas", "b",    "analytic",
                     "mc",   "mc_se",    "z",    "pass"};
    for (const auto& pt : report.points) {
        RowBuilder row;
        row.emplace_back(pt.tier);
        if (pt.tier == "mu")
            row.emplace_back(static_cast<double>(pt.antennas));
        else
            row.emplace_back();
        row.emplace_back(pt.b);
        row.emplace_back(pt.analytic);
        row.emplace_back(pt.mc_mean);
        row.emplace_back(pt.mc_se);
        row.emplace_back(pt.z);
        row.emplace_back(std::string(pt.pass ? "yes" : "no"));
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable cceo_trace_table(Tier tier, const SimConfig& config) {
    ResultTable table;
    table.config_hash = config.hash();
    table.seed = config.seed;
    table.columns = {"tier", "iteration", "max_variance", "best_penalized",
                     "mean"};

    const ContentLibrary lib = config.library();
    const MuCoverageContext mu_ctx(config.mu, config.phi_mu());
    const MmCoverageContext mm_ctx(config.mm, config.phi_mm());

    for (Tier t : expand_tier(tier)) {
        const bool is_mu = t == Tier::Mu;
        CceoParams params = config.cceo;
        params.seed = config.seed;
        const ObjectiveFn objective = [&](const std::vector<double>& b) {
            double total = 0.0;
            for (int j = 0; j < lib.num_contents; ++j) {
                if (b[j] <= 0.0) continue;
                total += lib.popularity[j] * (is_mu ? mu_ctx.cached_scdp(b[j])
                                                    : scdp_content_mm(b[j], mm_ctx));
            }
            return total;
        };
        const CceoResult res = cceo_optimize(objective, lib, params);
        for (std::size_t i = 0; i < res.trace.iterations.size(); ++i) {
            const auto& it = res.trace.iterations[i];
            std::string mean;
            for (std::size_t j = 0; j < it.mean.size(); ++j) {
                if (j) mean += ';';
                mean += format_g12(it.mean[j]);
            }
            table.rows.push_back({Cell(std::string(tier_name(t))),
                                  Cell(static_cast<double>(i + 1)),
                                  Cell(it.max_variance), Cell(it.best_penalized),
                                  Cell(std::move(mean))});
        }
    }
    return table;
}

namespace {

void emit_csv(const ResultTable& table, std::ostream& out) {
    char header[96];
    std::snprintf(header, sizeof(header), "# cachenet-results v1 config=%016llx seed=%llu\n",
                  static_cast<unsigned long long>(table.config_hash),
                  static_cast<unsigned long long>(table.seed));
    out << header;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            switch (row[c].kind) {
                case Cell::Kind::Empty: break;
                case Cell::Kind::Number: out << format_g12(row[c].number); break;
                case Cell::Kind::Text: out << row[c].text; break;
            }
        }
        out << '\n';
    }
}

void emit_json_string(std::ostream& out, const std::string& s) {
    out << '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            case '\t': out << "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out << buf;
                } else {
                    out << ch;
                }
        }
    }
    out << '"';
}

void emit_json(const ResultTable& table, std::ostream& out) {
    char meta[64];
    std::snprintf(meta, sizeof(meta), "%016llx",
                  static_cast<unsigned long long>(table.config_hash));
    out << "{\n  \"format\": \"cachenet-results\",\n  \"version\": 1,\n"
        << "  \"config_hash\": \"" << meta << "\",\n  \"seed\": " << table.seed
        << ",\n  \"columns\": [";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ", ";
        emit_json_string(out, table.columns[c]);
    }
    out << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << "    [";
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ", ";
            switch (row[c].kind) {
                case Cell::Kind::Empty: out << "null"; break;
                case Cell::Kind::Number: out << format_g12(row[c].number); break;
                case Cell::Kind::Text: emit_json_string(out, row[c].text); break;
            }
        }
        out << (r + 1 < table.rows.size() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
}

}  // namespace

void emit(const ResultTable& table, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::Csv)
        emit_csv(table, out);
    else
        emit_json(table, out);
}

void emit_to_file(const ResultTable& table, OutputFormat format,
                  const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open '" + path + "'");
    emit(table, format, out);
    if (!out) throw std::runtime_error("emit: write failed for '" + path + "'");
}

}  // namespace cachenet
