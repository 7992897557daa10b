#pragma once

#include <cstdint>
#include <vector>

#include "cachenet/model.hpp"
#include "cachenet/rng.hpp"

namespace cachenet {

enum class ExecMode {
    Serial,    // reference implementation, one drop after another
    Parallel,  // OpenMP over drops; identical results by construction
};

struct McParams {
    std::int64_t drops = 20000;
    double window_radius_m = 0.0;  // 0 = auto per tier and caching probability
    std::uint64_t seed = 1;
    bool antithetic = false;        // pair drops on mirrored gain uniforms
    bool tail_compensation = true;  // fold mean interference beyond the window
                                    // into the noise term (sub-6 GHz only)
    ExecMode mode = ExecMode::Parallel;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t drops_used = 0;
};

struct Point2D {
    double x, y;
};

// Homogeneous Poisson point process on a disk of the given radius centred at
// the origin: Poisson(density pi R^2) points, positions uniform on the disk.
std::vector<Point2D> sample_hppp(double density_per_m2, double window_radius,
                                 SplitMix64& rng);

// Per-drop simulation of one content delivery in the sub-6 GHz tier. Each
// drop thins an HPPP realisation into caching (probability b) and
// non-caching SBSs, serves from the nearest caching one with a
// Gamma(N,1)-distributed beamforming gain, draws Exp(1) gains for every
// other SBS, and counts success iff the resulting SINR exceeds phi. Drops
// with no caching SBS in the window count as failures.
//
// Only distances to the user enter the SINR, so the kernel samples radii
// directly (R sqrt(U) is the distance law of a uniform point on the disk).
//
// Deterministic for a fixed seed: drop i consumes substream(seed, i) only.
McEstimate simulate_scdp_mu(double b, const MuTierConfig& cfg, double phi,
                            const McParams& params);

// Same for the noise-limited mmWave tier: the nearest caching SBS at
// distance y succeeds iff P G beta y^-alpha / sigma^2 > phi, with the LOS
// exponent inside the LOS ball and the NLOS exponent outside. Deterministic
// given the geometry (no fading draws).
McEstimate simulate_scdp_mm(double b, const MmTierConfig& cfg, double phi,
                            const McParams& params);

struct TotalScdpEstimates {
    McEstimate mu;
    McEstimate mm;
};

// Catalog-level estimate: each drop first draws the requested content from
// the popularity law, then simulates that content's delivery.
TotalScdpEstimates simulate_total(const PlacementVector& placement,
                                  const ContentLibrary& lib,
                                  const MuTierConfig& mu_cfg, double phi_mu,
                                  const MmTierConfig& mm_cfg, double phi_mm,
                                  const McParams& params);

// Window radius actually used by the kernels (exposed for tests).
double mu_window_radius(double b, const MuTierConfig& cfg, const McParams& params);
double mm_window_radius(double b, const MmTierConfig& cfg, const McParams& params);

}  // namespace cachenet
