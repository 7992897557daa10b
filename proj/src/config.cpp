#include "cachenet/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cachenet {

using nlohmann::json;

namespace {

// Carrier frequencies behind the default intercepts.
constexpr double kMuCarrierHz = 1e9;
constexpr double kMmCarrierHz = 60e9;

double get_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw std::invalid_argument(std::string("config: field '") + key +
                                    "' must be a number");
    return v.get<double>();
}

std::int64_t get_integer(const json& obj, const char* key, std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string("config: field '") + key +
                                    "' must be an integer");
    return v.get<std::int64_t>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean())
        throw std::invalid_argument(std::string("config: field '") + key +
                                    "' must be a boolean");
    return v.get<bool>();
}

void reject_unknown(const json& obj, const char* section,
                    std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw std::invalid_argument("config: unknown field '" + it.key() +
                                        "' in section '" + section + "'");
    }
}

}  // namespace

ContentLibrary SimConfig::library() const {
    return ContentLibrary::create(num_contents, cache_capacity,
                                  zipf_popularity(num_contents, zipf_exponent),
                                  sizes, zipf_exponent);
}

double SimConfig::phi_mu() const {
    return sinr_threshold({rate_bps}, mu.bandwidth_hz);
}

double SimConfig::phi_mm() const {
    return sinr_threshold({rate_bps}, mm.bandwidth_hz);
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string SimConfig::to_json_string() const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["library"] = {{"num_contents", num_contents},
                    {"cache_capacity", cache_capacity},
                    {"zipf_exponent", zipf_exponent}};
    if (!sizes.empty()) j["library"]["sizes"] = sizes;
    j["delivery"] = {{"rate_bps", rate_bps}};
    j["mu_tier"] = {{"antennas", mu.antennas},
                    {"tx_power_dbm", 10.0 * std::log10(mu.tx_power_w * 1e3)},
                    {"density_per_km2", mu.density_per_m2 * 1e6},
                    {"path_loss_exponent", mu.path_loss_exponent},
                    {"intercept", mu.intercept},
                    {"noise_w", mu.noise_w},
                    {"bandwidth_mhz", mu.bandwidth_hz / 1e6}};
    j["mm_tier"] = {{"array_gain", mm.array_gain},
                    {"tx_power_dbm", 10.0 * std::log10(mm.tx_power_w * 1e3)},
                    {"density_per_km2", mm.density_per_m2 * 1e6},
                    {"alpha_los", mm.alpha_los},
                    {"alpha_nlos", mm.alpha_nlos},
                    {"los_radius_m", mm.los_radius_m},
                    {"intercept", mm.intercept},
                    {"noise_w", mm.noise_w},
                    {"bandwidth_mhz", mm.bandwidth_hz / 1e6}};
    j["monte_carlo"] = {{"drops", mc.drops},
                        {"window_radius_m", mc.window_radius_m},
                        {"antithetic", mc.antithetic},
                        {"tail_compensation", mc.tail_compensation}};
    j["cceo"] = {{"samples", cceo.samples},
                 {"elites", cceo.elites},
                 {"mean_smoothing", cceo.mean_smoothing},
                 {"variance_smoothing", cceo.var_smoothing},
                 {"smoothing_exponent", cceo.smoothing_exponent},
                 {"penalty_weight", cceo.penalty_weight},
                 {"stop_variance", cceo.stop_variance},
                 {"max_iterations", cceo.max_iterations}};
    j["newton"] = {{"max_iterations", newton.max_iterations},
                   {"step_tolerance", newton.step_tolerance},
                   {"backtrack_shrink", newton.backtrack_shrink},
                   {"armijo_constant", newton.armijo_constant},
                   {"init_varpi", newton.init_varpi}};
    j["seed"] = seed;
    return j.dump(2);
}

std::uint64_t SimConfig::hash() const {
    const std::string s = to_json_string();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SimConfig SimConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: root must be an object");
    reject_unknown(j, "root",
                   {"schema_version", "library", "delivery", "mu_tier", "mm_tier",
                    "monte_carlo", "cceo", "newton", "seed"});

    const auto version = get_integer(j, "schema_version", kSchemaVersion);
    if (version != kSchemaVersion)
        throw std::invalid_argument("config: unsupported schema_version " +
                                    std::to_string(version));

    SimConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(get_integer(j, "seed", 1));

    if (j.contains("library")) {
        const auto& lib = j.at("library");
        reject_unknown(lib, "library",
                       {"num_contents", "cache_capacity", "zipf_exponent", "sizes"});
        cfg.num_contents =
            static_cast<int>(get_integer(lib, "num_contents", cfg.num_contents));
        cfg.cache_capacity = get_number(lib, "cache_capacity", cfg.cache_capacity);
        cfg.zipf_exponent = get_number(lib, "zipf_exponent", cfg.zipf_exponent);
        if (lib.contains("sizes")) {
            if (!lib.at("sizes").is_array())
                throw std::invalid_argument("config: library.sizes must be an array");
            cfg.sizes = lib.at("sizes").get<std::vector<double>>();
        }
    }
    if (j.contains("delivery")) {
        const auto& d = j.at("delivery");
        reject_unknown(d, "delivery", {"rate_bps"});
        cfg.rate_bps = get_number(d, "rate_bps", cfg.rate_bps);
        if (cfg.rate_bps <= 0)
            throw std::invalid_argument("config: delivery.rate_bps must be > 0");
    }
    if (j.contains("mu_tier")) {
        const auto& m = j.at("mu_tier");
        reject_unknown(m, "mu_tier",
                       {"antennas", "tx_power_dbm", "density_per_km2",
                        "path_loss_exponent", "carrier_ghz", "intercept",
                        "noise_figure_db", "noise_w", "bandwidth_mhz"});
        cfg.mu.antennas =
            static_cast<int>(get_integer(m, "antennas", cfg.mu.antennas));
        cfg.mu.tx_power_w = dbm_to_watts(get_number(m, "tx_power_dbm", 20.0));
        cfg.mu.density_per_m2 = get_number(m, "density_per_km2", 600.0) * 1e-6;
        cfg.mu.path_loss_exponent =
            get_number(m, "path_loss_exponent", cfg.mu.path_loss_exponent);
        cfg.mu.bandwidth_hz = get_number(m, "bandwidth_mhz", 10.0) * 1e6;
        const double carrier =
            get_number(m, "carrier_ghz", kMuCarrierHz / 1e9) * 1e9;
        cfg.mu.intercept =
            get_number(m, "intercept", free_space_intercept(carrier));
        cfg.mu.noise_w = get_number(
            m, "noise_w",
            thermal_noise_w(cfg.mu.bandwidth_hz, get_number(m, "noise_figure_db", 0.0)));
    } else {
        cfg.mu.intercept = free_space_intercept(kMuCarrierHz);
        cfg.mu.noise_w = thermal_noise_w(cfg.mu.bandwidth_hz);
    }
    if (j.contains("mm_tier")) {
        const auto& m = j.at("mm_tier");
        reject_unknown(m, "mm_tier",
                       {"array_gain", "tx_power_dbm", "density_per_km2", "alpha_los",
                        "alpha_nlos", "los_radius_m", "carrier_ghz", "intercept",
                        "noise_figure_db", "noise_w", "bandwidth_mhz"});
        cfg.mm.array_gain = get_number(m, "array_gain", cfg.mm.array_gain);
        cfg.mm.tx_power_w = dbm_to_watts(get_number(m, "tx_power_dbm", 20.0));
        cfg.mm.density_per_m2 = get_number(m, "density_per_km2", 600.0) * 1e-6;
        cfg.mm.alpha_los = get_number(m, "alpha_los", cfg.mm.alpha_los);
        cfg.mm.alpha_nlos = get_number(m, "alpha_nlos", cfg.mm.alpha_nlos);
        cfg.mm.los_radius_m = get_number(m, "los_radius_m", cfg.mm.los_radius_m);
        cfg.mm.bandwidth_hz = get_number(m, "bandwidth_mhz", 1000.0) * 1e6;
        const double carrier =
            get_number(m, "carrier_ghz", kMmCarrierHz / 1e9) * 1e9;
        cfg.mm.intercept =
            get_number(m, "intercept", free_space_intercept(carrier));
        cfg.mm.noise_w = get_number(
            m, "noise_w",
            thermal_noise_w(cfg.mm.bandwidth_hz, get_number(m, "noise_figure_db", 0.0)));
    } else {
        cfg.mm.intercept = free_space_intercept(kMmCarrierHz);
        cfg.mm.noise_w = thermal_noise_w(cfg.mm.bandwidth_hz);
    }
    if (j.contains("monte_carlo")) {
        const auto& m = j.at("monte_carlo");
        reject_unknown(m, "monte_carlo",
                       {"drops", "window_radius_m", "antithetic",
                        "tail_compensation"});
        cfg.mc.drops = get_integer(m, "drops", cfg.mc.drops);
        cfg.mc.window_radius_m =
            get_number(m, "window_radius_m", cfg.mc.window_radius_m);
        cfg.mc.antithetic = get_bool(m, "antithetic", cfg.mc.antithetic);
        cfg.mc.tail_compensation =
            get_bool(m, "tail_compensation", cfg.mc.tail_compensation);
        if (cfg.mc.drops < 1)
            throw std::invalid_argument("config: monte_carlo.drops must be >= 1");
    }
    if (j.contains("cceo")) {
        const auto& c = j.at("cceo");
        reject_unknown(c, "cceo",
                       {"samples", "elites", "mean_smoothing", "variance_smoothing",
                        "smoothing_exponent", "penalty_weight", "stop_variance",
                        "max_iterations"});
        cfg.cceo.samples = static_cast<int>(get_integer(c, "samples", cfg.cceo.samples));
        cfg.cceo.elites = static_cast<int>(get_integer(c, "elites", cfg.cceo.elites));
        cfg.cceo.mean_smoothing =
            get_number(c, "mean_smoothing", cfg.cceo.mean_smoothing);
        cfg.cceo.var_smoothing =
            get_number(c, "variance_smoothing", cfg.cceo.var_smoothing);
        cfg.cceo.smoothing_exponent = static_cast<int>(
            get_integer(c, "smoothing_exponent", cfg.cceo.smoothing_exponent));
        cfg.cceo.penalty_weight =
            get_number(c, "penalty_weight", cfg.cceo.penalty_weight);
        cfg.cceo.stop_variance =
            get_number(c, "stop_variance", cfg.cceo.stop_variance);
        cfg.cceo.max_iterations = static_cast<int>(
            get_integer(c, "max_iterations", cfg.cceo.max_iterations));
    }
    if (j.contains("newton")) {
        const auto& n = j.at("newton");
        reject_unknown(n, "newton",
                       {"max_iterations", "step_tolerance", "backtrack_shrink",
                        "armijo_constant", "init_varpi"});
        cfg.newton.max_iterations = static_cast<int>(
            get_integer(n, "max_iterations", cfg.newton.max_iterations));
        cfg.newton.step_tolerance =
            get_number(n, "step_tolerance", cfg.newton.step_tolerance);
        cfg.newton.backtrack_shrink =
            get_number(n, "backtrack_shrink", cfg.newton.backtrack_shrink);
        cfg.newton.armijo_constant =
            get_number(n, "armijo_constant", cfg.newton.armijo_constant);
        cfg.newton.init_varpi = get_number(n, "init_varpi", cfg.newton.init_varpi);
    }

    cfg.mu.validate();
    cfg.mm.validate();
    cfg.library();  // validates the catalog invariants
    return cfg;
}

SimConfig SimConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

}  // namespace cachenet
