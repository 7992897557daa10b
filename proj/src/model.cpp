#include "cachenet/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cachenet {

ContentLibrary ContentLibrary::create(int num_contents, double cache_capacity,
                                      std::vector<double> popularity,
                                      std::vector<double> sizes,
                                      std::optional<double> zipf_exponent) {
    if (num_contents < 1) throw std::invalid_argument("library: J must be >= 1");
    if (static_cast<int>(popularity.size()) != num_contents)
        throw std::invalid_argument("library: popularity length != J");
    if (sizes.empty()) sizes.assign(num_contents, 1.0);
    if (static_cast<int>(sizes.size()) != num_contents)
        throw std::invalid_argument("library: sizes length != J");

    double sum = 0.0;
    for (int j = 0; j < num_contents; ++j) {
        if (popularity[j] < 0.0)
            throw std::invalid_argument("library: negative popularity");
        if (j > 0 && popularity[j] > popularity[j - 1] + 1e-15)
            throw std::invalid_argument("library: popularity not sorted");
        if (sizes[j] <= 0.0)
            throw std::invalid_argument("library: content size must be > 0");
        sum += popularity[j];
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("library: popularity must sum to 1, got " +
                                    std::to_string(sum));
    if (cache_capacity < 1.0)
        throw std::invalid_argument("library: M must be >= 1");
    if (num_contents < cache_capacity)
        throw std::invalid_argument("library: J must be >= M");

    ContentLibrary lib;
    lib.num_contents = num_contents;
    lib.cache_capacity = cache_capacity;
    lib.popularity = std::move(popularity);
    lib.sizes = std::move(sizes);
    lib.zipf_exponent = zipf_exponent;
    return lib;
}

double ContentLibrary::total_size() const {
    return std::accumulate(sizes.begin(), sizes.end(), 0.0);
}

double PlacementVector::budget_used(const ContentLibrary& lib) const {
    double used = 0.0;
    for (int j = 0; j < lib.num_contents; ++j) used += b[j] * lib.sizes[j];
    return used;
}

bool PlacementVector::feasible_for(const ContentLibrary& lib, double tol) const {
    if (static_cast<int>(b.size()) != lib.num_contents) return false;
    for (double v : b)
        if (v < -tol || v > 1.0 + tol) return false;
    return budget_used(lib) <= lib.cache_capacity + tol;
}

void MuTierConfig::validate() const {
    if (antennas < 1) throw std::invalid_argument("mu tier: antennas must be >= 1");
    if (path_loss_exponent <= 2.0)
        throw std::invalid_argument(
            "mu tier: path loss exponent must be > 2 (the interference "
            "integral diverges otherwise)");
    if (tx_power_w <= 0 || density_per_m2 <= 0 || intercept <= 0 ||
        noise_w <= 0 || bandwidth_hz <= 0)
        throw std::invalid_argument("mu tier: all constants must be positive");
}

void MmTierConfig::validate() const {
    if (alpha_los <= 2.0 || alpha_nlos < alpha_los)
        throw std::invalid_argument("mm tier: need alpha_nlos >= alpha_los > 2");
    if (los_radius_m <= 0)
        throw std::invalid_argument("mm tier: LOS radius must be positive");
    if (array_gain <= 0 || tx_power_w <= 0 || density_per_m2 <= 0 ||
        intercept <= 0 || noise_w <= 0 || bandwidth_hz <= 0)
        throw std::invalid_argument("mm tier: all constants must be positive");
}

std::vector<double> zipf_popularity(int num_contents, double gamma) {
    if (num_contents < 1) throw std::invalid_argument("zipf: J must be >= 1");
    if (gamma < 0.0) throw std::invalid_argument("zipf: gamma must be >= 0");
    std::vector<double> a(num_contents);
    double norm = 0.0;
    // Sum smallest terms first to keep the normalisation exact.
    for (int j = num_contents; j >= 1; --j) norm += std::pow(j, -gamma);
    for (int j = 1; j <= num_contents; ++j)
        a[j - 1] = std::pow(j, -gamma) / norm;
    return a;
}

double sinr_threshold(const DeliveryRequirement& req, double bandwidth_hz) {
    if (bandwidth_hz <= 0) throw std::invalid_argument("bandwidth must be > 0");
    return std::exp2(req.rate_bps / bandwidth_hz) - 1.0;
}

PlacementVector mpc_placement(const ContentLibrary& lib) {
    PlacementVector p;
    p.b.assign(lib.num_contents, 0.0);
    double remaining = lib.cache_capacity;
    for (int j = 0; j < lib.num_contents; ++j) {
        if (lib.sizes[j] <= remaining + 1e-12) {
            p.b[j] = 1.0;
            remaining -= lib.sizes[j];
        }
    }
    return p;
}

double free_space_intercept(double carrier_hz) {
    constexpr double c = 299792458.0;
    const double v = c / (4.0 * M_PI * carrier_hz);
    return v * v;
}

double thermal_noise_w(double bandwidth_hz, double noise_figure_db) {
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return dbm_to_watts(dbm);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

}  // namespace cachenet
