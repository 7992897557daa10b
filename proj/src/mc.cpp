#include "cachenet/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cachenet {

namespace {

constexpr std::uint64_t kGeomSalt = 0x67656f6d5f737472ULL;
constexpr std::uint64_t kGainSalt = 0x6761696e5f737472ULL;
constexpr std::uint64_t kContentSalt = 0x636f6e74656e7473ULL;
constexpr std::uint64_t kMmSalt = 0x6d6d5f7469657273ULL;

// The auto window tracks the nearest-caching-SBS distance distribution down
// to e^-144 tail mass, floored at 2 km so the in-window interference field
// is representative, and capped at 5 km: past that the conditional coverage
// underflows for any sane configuration, so a missing far-away server is a
// failure either way.
double auto_window(double b, double density) {
    const double capture = 12.0 / std::sqrt(M_PI * std::max(b, 1e-3) * density);
    return std::clamp(capture, 2000.0, 5000.0);
}

void check_window(double radius, double b, double density) {
    const double floor = 10.0 / std::sqrt(M_PI * std::max(b, 0.01) * density);
    if (radius < floor)
        throw std::invalid_argument(
            "mc: window radius " + std::to_string(radius) +
            " m too small to capture the serving distance (need >= " +
            std::to_string(floor) + " m)");
}

McEstimate estimate_from_unit_counts(std::int64_t sum, std::int64_t sq_sum,
                                     std::int64_t units, int unit_size,
                                     std::int64_t drops_used) {
    McEstimate est;
    est.drops_used = drops_used;
    if (units == 0) return est;
    const double scale = 1.0 / unit_size;
    const double mean = scale * static_cast<double>(sum) / units;
    est.mean = mean;
    if (units > 1) {
        const double mean_sq = scale * scale * static_cast<double>(sq_sum) / units;
        const double var = std::max(0.0, mean_sq - mean * mean);
        est.std_error = std::sqrt(var / (units - 1));
    }
    return est;
}

struct MuDropKernel {
    double b;
    const MuTierConfig& cfg;
    double phi;
    double window;
    double sigma_eff;
    bool antithetic;
    std::uint64_t seed;

    // Success count for one unit (a drop, or an antithetic pair sharing the
    // geometry with mirrored fading uniforms). Returns 0..unit_size.
    int operator()(std::int64_t unit, std::vector<double>& r2_scratch,
                   std::vector<unsigned char>& cached_scratch) const {
        SplitMix64 geom = substream(seed ^ kGeomSalt, static_cast<std::uint64_t>(unit));
        SplitMix64 gains = substream(seed ^ kGainSalt, static_cast<std::uint64_t>(unit));

        const double r2_window = window * window;
        const std::int64_t n = geom.poisson(cfg.density_per_m2 * M_PI * r2_window);

        r2_scratch.clear();
        cached_scratch.clear();
        std::int64_t serving = -1;
        double serving_r2 = r2_window;
        for (std::int64_t i = 0; i < n; ++i) {
            const double r2 = r2_window * geom.uniform();
            const bool is_cached = geom.uniform() < b;
            if (is_cached && r2 < serving_r2) {
                serving_r2 = r2;
                serving = static_cast<std::int64_t>(r2_scratch.size());
            }
            r2_scratch.push_back(r2);
            cached_scratch.push_back(is_cached ? 1 : 0);
        }
        if (serving < 0) return 0;  // no caching SBS in the window

        const double pl_coeff = cfg.tx_power_w * cfg.intercept;
        const double half_alpha = 0.5 * cfg.path_loss_exponent;
        const double signal_gain = pl_coeff * std::pow(serving_r2, -half_alpha);

        double h_even = 0.0, h_odd = 0.0;
        for (int k = 0; k < cfg.antennas; ++k) {
            const double u = gains.uniform_open();
            h_even += -std::log(u);
            if (antithetic) h_odd += -std::log(1.0 - u);
        }

        double interf_even = 0.0, interf_odd = 0.0;
        for (std::size_t i = 0; i < r2_scratch.size(); ++i) {
            if (static_cast<std::int64_t>(i) == serving) continue;
            const double pl = pl_coeff * std::pow(r2_scratch[i], -half_alpha);
            const double u = gains.uniform_open();
            interf_even += pl * -std::log(u);
            if (antithetic) interf_odd += pl * -std::log(1.0 - u);
        }

        int succ = (signal_gain * h_even > phi * (interf_even + sigma_eff)) ? 1 : 0;
        if (antithetic)
            succ += (signal_gain * h_odd > phi * (interf_odd + sigma_eff)) ? 1 : 0;
        return succ;
    }
};

template <class Kernel>
McEstimate run_units(const Kernel& kernel, std::int64_t units, int unit_size,
                     std::int64_t drops_used, ExecMode mode) {
    std::int64_t sum = 0, sq_sum = 0;
    if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<double> r2;
            std::vector<unsigned char> flags;
            std::int64_t local_sum = 0, local_sq = 0;
#pragma omp for schedule(static)
            for (std::int64_t u = 0; u < units; ++u) {
                const int s = kernel(u, r2, flags);
                local_sum += s;
                local_sq += static_cast<std::int64_t>(s) * s;
            }
#pragma omp atomic
            sum += local_sum;
#pragma omp atomic
            sq_sum += local_sq;
        }
#else
        mode = ExecMode::Serial;
#endif
    }
    if (mode == ExecMode::Serial) {
        std::vector<double> r2;
        std::vector<unsigned char> flags;
        for (std::int64_t u = 0; u < units; ++u) {
            const int s = kernel(u, r2, flags);
            sum += s;
            sq_sum += static_cast<std::int64_t>(s) * s;
        }
    }
    return estimate_from_unit_counts(sum, sq_sum, units, unit_size, drops_used);
}

}  // namespace

std::vector<Point2D> sample_hppp(double density_per_m2, double window_radius,
                                 SplitMix64& rng) {
    if (density_per_m2 < 0) throw std::invalid_argument("sample_hppp: density < 0");
    if (window_radius <= 0) throw std::invalid_argument("sample_hppp: radius <= 0");
    std::vector<Point2D> points;
    if (density_per_m2 == 0.0) return points;
    const std::int64_t n =
        rng.poisson(density_per_m2 * M_PI * window_radius * window_radius);
    points.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
        const double r = window_radius * std::sqrt(rng.uniform());
        const double theta = 2.0 * M_PI * rng.uniform();
        points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return points;
}

double mu_window_radius(double b, const MuTierConfig& cfg, const McParams& params) {
    return params.window_radius_m > 0 ? params.window_radius_m
                                      : auto_window(b, cfg.density_per_m2);
}

double mm_window_radius(double b, const MmTierConfig& cfg, const McParams& params) {
    if (params.window_radius_m > 0) return params.window_radius_m;
    // Noise-limited tier: the window only needs to capture the serving
    // distance, there is no interference field to represent. The cap keeps
    // rarely-cached contents simulatable; a server past 5 km is far outside
    // any achievable delivery radius, so the clip cannot flip an outcome.
    const double capture =
        12.0 / std::sqrt(M_PI * std::max(b, 1e-3) * cfg.density_per_m2);
    const double guard =
        10.01 / std::sqrt(M_PI * std::max(b, 0.01) * cfg.density_per_m2);
    return std::max(std::min(capture, 5000.0), guard);
}

McEstimate simulate_scdp_mu(double b, const MuTierConfig& cfg, double phi,
                            const McParams& params) {
    cfg.validate();
    if (b < 0 || b > 1) throw std::invalid_argument("simulate_scdp_mu: b outside [0,1]");
    if (params.drops < 1) throw std::invalid_argument("simulate_scdp_mu: drops < 1");
    if (b == 0.0) return {0.0, 0.0, params.drops};

    const double window = mu_window_radius(b, cfg, params);
    check_window(window, b, cfg.density_per_m2);

    double sigma_eff = cfg.noise_w;
    if (params.tail_compensation) {
        const double alpha = cfg.path_loss_exponent;
        sigma_eff += 2.0 * M_PI * cfg.density_per_m2 * cfg.tx_power_w *
                     cfg.intercept * std::pow(window, 2.0 - alpha) / (alpha - 2.0);
    }

    const int unit_size = params.antithetic ? 2 : 1;
    const std::int64_t units = params.drops / unit_size;
    MuDropKernel kernel{b,     cfg,  phi, window, sigma_eff,
                        params.antithetic, params.seed};
    return run_units(kernel, units, unit_size, units * unit_size, params.mode);
}

namespace {

struct MmDropKernel {
    double b;
    const MmTierConfig& cfg;
    double phi;
    double window;
    std::uint64_t seed;

    int operator()(std::int64_t unit, std::vector<double>&,
                   std::vector<unsigned char>&) const {
        SplitMix64 geom =
            substream(seed ^ kGeomSalt ^ kMmSalt, static_cast<std::uint64_t>(unit));
        const double r2_window = window * window;
        const std::int64_t n = geom.poisson(cfg.density_per_m2 * M_PI * r2_window);
        double serving_r2 = -1.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double r2 = r2_window * geom.uniform();
            const bool is_cached = geom.uniform() < b;
            if (is_cached && (serving_r2 < 0.0 || r2 < serving_r2)) serving_r2 = r2;
        }
        if (serving_r2 < 0.0) return 0;
        const double y = std::sqrt(serving_r2);
        const double alpha = y < cfg.los_radius_m ? cfg.alpha_los : cfg.alpha_nlos;
        const double rx = cfg.tx_power_w * cfg.array_gain * cfg.intercept *
                          std::pow(y, -alpha);
        return rx > phi * cfg.noise_w ? 1 : 0;
    }
};

}  // namespace

McEstimate simulate_scdp_mm(double b, const MmTierConfig& cfg, double phi,
                            const McParams& params) {
    cfg.validate();
    if (b < 0 || b > 1) throw std::invalid_argument("simulate_scdp_mm: b outside [0,1]");
    if (params.drops < 1) throw std::invalid_argument("simulate_scdp_mm: drops < 1");
    if (b == 0.0) return {0.0, 0.0, params.drops};

    const double window = mm_window_radius(b, cfg, params);
    check_window(window, b, cfg.density_per_m2);

    // No fading in this tier, so antithetic pairing would just duplicate
    // drops; it is ignored here.
    MmDropKernel kernel{b, cfg, phi, window, params.seed};
    return run_units(kernel, params.drops, 1, params.drops, params.mode);
}

namespace {

struct TotalMuKernel {
    const PlacementVector& placement;
    const std::vector<double>& cdf;
    const MuTierConfig& cfg;
    double phi;
    bool antithetic;
    bool tail_compensation;
    double fixed_window;  // 0 = auto per content
    std::uint64_t seed;

    int operator()(std::int64_t unit, std::vector<double>& r2,
                   std::vector<unsigned char>& flags) const {
        SplitMix64 pick =
            substream(seed ^ kContentSalt, static_cast<std::uint64_t>(unit));
        const double u = pick.uniform();
        const std::size_t j =
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const double b = placement.b[std::min(j, cdf.size() - 1)];
        if (b <= 0.0) return 0;

        McParams one;
        one.window_radius_m = fixed_window;
        const double window = mu_window_radius(b, cfg, one);
        double sigma_eff = cfg.noise_w;
        if (tail_compensation) {
            const double alpha = cfg.path_loss_exponent;
            sigma_eff += 2.0 * M_PI * cfg.density_per_m2 * cfg.tx_power_w *
                         cfg.intercept * std::pow(window, 2.0 - alpha) /
                         (alpha - 2.0);
        }
        MuDropKernel kernel{b, cfg, phi, window, sigma_eff, antithetic, seed};
        return kernel(unit, r2, flags);
    }
};

struct TotalMmKernel {
    const PlacementVector& placement;
    const std::vector<double>& cdf;
    const MmTierConfig& cfg;
    double phi;
    double fixed_window;
    std::uint64_t seed;

    int operator()(std::int64_t unit, std::vector<double>& r2,
                   std::vector<unsigned char>& flags) const {
        SplitMix64 pick = substream(seed ^ kContentSalt ^ kMmSalt,
                                    static_cast<std::uint64_t>(unit));
        const double u = pick.uniform();
        const std::size_t j =
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const double b = placement.b[std::min(j, cdf.size() - 1)];
        if (b <= 0.0) return 0;

        McParams one;
        one.window_radius_m = fixed_window;
        const double window = mm_window_radius(b, cfg, one);
        MmDropKernel kernel{b, cfg, phi, window, seed};
        return kernel(unit, r2, flags);
    }
};

}  // namespace

TotalScdpEstimates simulate_total(const PlacementVector& placement,
                                  const ContentLibrary& lib,
                                  const MuTierConfig& mu_cfg, double phi_mu,
                                  const MmTierConfig& mm_cfg, double phi_mm,
                                  const McParams& params) {
    if (!placement.feasible_for(lib))
        throw std::invalid_argument("simulate_total: infeasible placement");
    std::vector<double> cdf(lib.num_contents);
    double acc = 0.0;
    for (int j = 0; j < lib.num_contents; ++j) {
        acc += lib.popularity[j];
        cdf[j] = acc;
    }
    cdf.back() = 1.0;

    TotalScdpEstimates out;
    {
        const int unit_size = params.antithetic ? 2 : 1;
        const std::int64_t units = params.drops / unit_size;
        TotalMuKernel kernel{placement,         cdf,
                             mu_cfg,            phi_mu,
                             params.antithetic, params.tail_compensation,
                             params.window_radius_m, params.seed};
        out.mu = run_units(kernel, units, unit_size, units * unit_size, params.mode);
    }
    {
        TotalMmKernel kernel{placement, cdf, mm_cfg, phi_mm,
                             params.window_radius_m, params.seed};
        out.mm = run_units(kernel, params.drops, 1, params.drops, params.mode);
    }
    return out;
}

}  // namespace cachenet
