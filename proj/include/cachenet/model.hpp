#pragma once

#include <optional>
#include <vector>

namespace cachenet {

// Content catalog: J contents sorted by non-increasing request probability,
// a cache budget M in size units, and per-content sizes (all 1 by default).
struct ContentLibrary {
    int num_contents = 0;                 // J
    double cache_capacity = 0.0;          // M, in size units
    std::vector<double> popularity;       // request probability per content
    std::vector<double> sizes;            // size units, > 0
    std::optional<double> zipf_exponent;  // set when built from a Zipf law

    // Validates invariants: popularity sums to 1 (1e-12), non-increasing,
    // non-negative; M >= 1 and J >= M; sizes positive.
    static ContentLibrary create(int num_contents, double cache_capacity,
                                 std::vector<double> popularity,
                                 std::vector<double> sizes = {},
                                 std::optional<double> zipf_exponent = {});

    double total_size() const;
};

// Per-content caching probabilities under the budget sum(b_j s_j) <= M.
struct PlacementVector {
    std::vector<double> b;

    bool feasible_for(const ContentLibrary& lib, double tol = 1e-9) const;
    double budget_used(const ContentLibrary& lib) const;
};

// Sub-6 GHz tier constants (SI units).
struct MuTierConfig {
    int antennas = 2;             // N
    double tx_power_w = 0.1;      // P
    double density_per_m2 = 6e-4; // lambda
    double path_loss_exponent = 2.5;
    double intercept = 5.689e-4;  // path loss at 1 m
    double noise_w = 3.981e-14;
    double bandwidth_hz = 1e7;

    void validate() const;  // throws std::invalid_argument
};

// mmWave tier constants (SI units). Links shorter than los_radius_m are
// line-of-sight with exponent alpha_los, otherwise alpha_nlos.
struct MmTierConfig {
    double array_gain = 2.0;      // G
    double tx_power_w = 0.1;      // P
    double density_per_m2 = 6e-4; // lambda
    double alpha_los = 2.25;
    double alpha_nlos = 3.76;
    double los_radius_m = 15.0;   // D_L
    double intercept = 1.580e-7;
    double noise_w = 3.981e-12;   // noise plus residual weak interference
    double bandwidth_hz = 1e9;

    void validate() const;
};

// Target content bit rate (bits delivered per second of deadline).
struct DeliveryRequirement {
    double rate_bps = 4e5;
};

// Zipf request probabilities a_j = j^-gamma / sum_m m^-gamma (exact sum).
std::vector<double> zipf_popularity(int num_contents, double gamma);

// SINR needed to sustain the rate over bandwidth W: 2^(rate/W) - 1.
double sinr_threshold(const DeliveryRequirement& req, double bandwidth_hz);

// Deterministic baseline: cache whole contents in popularity order while
// the remaining budget fits them, skipping contents that do not fit.
PlacementVector mpc_placement(const ContentLibrary& lib);

// Free-space intercept (c / 4 pi f)^2 at the given carrier frequency.
double free_space_intercept(double carrier_hz);

// Thermal noise power over the bandwidth: -174 dBm/Hz plus a noise figure.
double thermal_noise_w(double bandwidth_hz, double noise_figure_db = 0.0);

double dbm_to_watts(double dbm);

}  // namespace cachenet
