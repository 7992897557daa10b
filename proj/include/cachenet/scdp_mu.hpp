#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "cachenet/model.hpp"

namespace cachenet {

struct QuadratureSpec {
    double abs_tol = 1e-8;      // outer integral tolerance
    double tail_cutoff = 1e-14; // truncate where the exponential weight falls below this
    int max_intervals = 400;

    void validate() const;
};

// Precomputed evaluation context for the multi-antenna sub-6 GHz tier.
//
// The delivery analysis conditions on the serving distance x and needs the
// n-th derivatives (n < N) of
//
//   E(v) = exp(g(v)),   g(v) = -A v + log L_c(v) + log L_u(v),  v = x^alpha,
//
// where A = phi sigma^2 / (P beta) and L_c, L_u are the Laplace transforms of
// the interference from SBSs that do / do not cache the content (evaluated at
// s = phi v / (P beta), with the caching interferers outside radius x). Both
// logs reduce to closed forms:
//
//   log L_c(v) = -2 pi b lambda x^2 * phi/(alpha-2) * 2F1(1, 1-2/a; 2-2/a; -phi)
//   log L_u(v) = -(2 pi^2/alpha) (1-b) lambda csc(2 pi/alpha) (phi v)^(2/alpha)
//
// and so do their v-derivatives:
//
//   d^q log L_c = (-1)^q 2 pi b lambda q! phi^q x^(2-alpha q)
//                 * 2F1(q+1, q-2/a; q+1-2/a; -phi) / (alpha q - 2)
//   d^q log L_u = -(2 pi^2/alpha) (1-b) lambda csc(2 pi/alpha) phi^(2/alpha)
//                 * prod_{i<q}(2/alpha - i) * x^(2-alpha q).
//
// Everything that does not depend on (x, b) — the hypergeometric factors, the
// cosecant, partition coefficient tables for the Faa di Bruno assembly — is
// computed once here, so a coverage evaluation is a short polynomial/exp
// assembly.
class MuCoverageContext {
  public:
    MuCoverageContext(const MuTierConfig& config, double threshold,
                      QuadratureSpec quadrature = {});

    const MuTierConfig& config() const { return cfg_; }
    double phi() const { return phi_; }
    const QuadratureSpec& quadrature() const { return quad_; }

    double noise_coeff() const { return noise_coeff_; }                // A
    double cached_exponent_coeff() const { return exp_cached_; }       // per b x^2
    double uncached_exponent_coeff() const { return exp_uncached_; }   // per (1-b) x^2
    double cached_deriv_coeff(int q) const { return cached_coeff_[q]; }
    double uncached_deriv_coeff(int q) const { return uncached_coeff_[q]; }

    struct PartitionTerm {
        double coef;                           // n! / prod(t_q! (q!)^t_q)
        std::vector<std::pair<int, int>> pows; // (q, t_q) with t_q > 0
    };
    const std::vector<std::vector<PartitionTerm>>& partition_terms() const {
        return partitions_;
    }
    double inv_factorial(int n) const { return inv_factorial_[n]; }

    // Memoised per-content delivery probability, keyed on b quantised to a
    // 1e-12 grid. Insert-or-read under a mutex; values are idempotent.
    double cached_scdp(double b) const;

  private:
    MuTierConfig cfg_;
    double phi_;
    QuadratureSpec quad_;

    double noise_coeff_;
    double exp_cached_;
    double exp_uncached_;
    std::vector<double> cached_coeff_;    // index q, 1..N-1
    std::vector<double> uncached_coeff_;  // index q, 1..N-1
    std::vector<double> inv_factorial_;   // 1/n!
    std::vector<std::vector<PartitionTerm>> partitions_;  // per n, 0..N-1

    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<std::int64_t, double> memo_;
};

// Laplace transform of the interference from content-caching SBSs outside
// radius x (density b lambda), at transform variable s >= 0.
double laplace_cached_interference(double s, double x, double b,
                                   const MuCoverageContext& ctx);

// Laplace transform of the interference from the non-caching SBSs (density
// (1-b) lambda, integrated over the whole plane), at s >= 0.
double laplace_uncached_interference(double s, double b,
                                     const MuCoverageContext& ctx);

// q-th derivative of g(v) (see MuCoverageContext) at v = x^alpha. These are
// the inputs of the Faa di Bruno expansion of d^n/dv^n exp(g).
double log_laplace_derivative(int q, double x, double b,
                              const MuCoverageContext& ctx);

// Probability that the SINR at serving distance x exceeds the threshold,
// for a content cached with probability b. Values outside [0,1] by more
// than 1e-6 raise std::runtime_error; smaller excursions are clamped and
// reported through `clamped` when provided.
double conditional_coverage_mu(double x, double b, const MuCoverageContext& ctx,
                               bool* clamped = nullptr);

// Delivery probability for one content cached with probability b, averaging
// the conditional coverage over the nearest-caching-SBS distance. Exactly 0
// at b = 0. Throws std::runtime_error if the outer quadrature fails.
double scdp_content_mu(double b, const MuCoverageContext& ctx);

// Popularity-weighted total delivery probability. Uses the context memo, so
// placements with few distinct probabilities (stepped vectors, 0/1 vectors)
// cost only a handful of quadratures.
double scdp_total_mu(const PlacementVector& placement, const ContentLibrary& lib,
                     const MuCoverageContext& ctx);

}  // namespace cachenet
