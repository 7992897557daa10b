#pragma once

#include "cachenet/model.hpp"
#include "cachenet/scdp_mm.hpp"
#include "cachenet/scdp_mu.hpp"

namespace cachenet {

// Stepped placement: the head (the first floor(eps M) contents) is cached
// everywhere, the next floor((M - head)/varpi) contents are cached with the
// common probability varpi, the tail is not cached. eps = 1 forces
// varpi = 0 (the head already fills the cache).
struct TwoStairPoint {
    double epsilon = 1.0;
    double varpi = 0.0;
};

struct NewtonParams {
    int max_iterations = 60;
    double step_tolerance = 1e-7;   // stop when |accepted step| falls below
    double backtrack_shrink = 0.5;
    double armijo_constant = 1e-4;
    double init_varpi = 0.0;        // <= 0: min(0.5, feasible upper bound at 0.5)

    void validate() const;
};

// Materialise the stepped vector. Defined for unit content sizes only. When
// the diversity region would run past the catalog it is truncated at J and
// *library_exhausted (if given) is set.
PlacementVector placement_from_twostair(const TwoStairPoint& pt,
                                        const ContentLibrary& lib,
                                        bool* library_exhausted = nullptr);

// Zipf partial-sum approximation sum_{j<=k} a_j ~ (k^(1-g) - 1)/(J^(1-g) - 1)
// for g > 0, g != 1. Exact at k = J; degenerates to 0 at k = 1.
double zipf_head_mass_approx(double k, int num_contents, double gamma);

// Approximate two-stair objective: with K = M^(1-g)/(J^(1-g)-1) and
// S = eps + (1-eps)/varpi,
//
//   P1 K eps^(1-g) - P1/(J^(1-g)-1) + Pw K (S^(1-g) - eps^(1-g)),
//
// reducing to P1 (M^(1-g)-1)/(J^(1-g)-1) at (eps,varpi) = (1,0). P1 and Pw
// are the per-content delivery probabilities at caching probability 1 and
// varpi, supplied by the caller.
double approx_objective(const TwoStairPoint& pt, const ContentLibrary& lib,
                        double p_one, double p_varpi);
double approx_objective_core(double eps, double varpi, double cache_m, int num_j,
                             double gamma, double p_one, double p_varpi);

// Inner sub-problem objective in eps at fixed (varpi, ell = P1/Pw):
//   f1(eps) = [(ell-1) eps^(1-g) + S^(1-g) - ell] / (J^(1-g) - 1).
// Concave on [0,1] for ell >= 1; its clamped stationary point is the
// optimal head fraction.
double subproblem_objective(double eps, double varpi, double ell, double gamma,
                            int num_j);

// Closed-form maximiser of the sub-problem, clamped to [0,1]:
//   eps_o = (((ell-1)/(1/varpi - 1))^(-1/g) - 1) varpi + 1)^(-1).
// Requires 0 < varpi <= 1/ell. ell == 1 is degenerate (spreading is free);
// the limit eps* = 0 is returned and *degenerate set when provided.
double optimal_epsilon(double varpi, double ell, double gamma,
                       bool* degenerate = nullptr);

// Per-content delivery-probability profile b -> P(b) a tier exposes to the
// two-stair search, with its first two derivatives in the caching
// probability of the diversity region.
class ContentProfile {
  public:
    virtual ~ContentProfile() = default;
    virtual double value(double b) const = 0;
    virtual double d1(double b) const = 0;
    virtual double d2(double b) const = 0;
    virtual double exact_total(const PlacementVector& placement,
                               const ContentLibrary& lib) const = 0;
};

// Sub-6 GHz profile. The conditional coverage is evaluated at caching
// probability 0 — all interferers treated as non-caching, which decouples
// the coverage from varpi and leaves the serving-distance density as the
// only varpi-dependent factor, so the derivatives are single quadratures:
//
//   P(w)   =        int P_cov(x,0) e^-u du,          u = pi w lambda x^2
//   P'(w)  = (1/w)  int P_cov(x,0) (1-u) e^-u du
//   P''(w) = (1/w^2)int P_cov(x,0) u (u-2) e^-u du.
//
// exact_total() uses the full coverage expression, not this approximation.
class MuContentProfile final : public ContentProfile {
  public:
    explicit MuContentProfile(const MuCoverageContext& ctx) : ctx_(ctx) {}
    double value(double b) const override;
    double d1(double b) const override;
    double d2(double b) const override;
    double exact_total(const PlacementVector& placement,
                       const ContentLibrary& lib) const override;

  private:
    double weighted_integral(double b, int kernel) const;
    const MuCoverageContext& ctx_;
};

// mmWave profile; the closed delivery form is exact, so value() and
// exact_total() share the same expressions.
class MmContentProfile final : public ContentProfile {
  public:
    explicit MmContentProfile(const MmCoverageContext& ctx) : ctx_(ctx) {}
    double value(double b) const override;
    double d1(double b) const override;
    double d2(double b) const override;
    double exact_total(const PlacementVector& placement,
                       const ContentLibrary& lib) const override;

  private:
    const MmCoverageContext& ctx_;
};

struct TwoStairDerivatives {
    double first = 0.0;     // d/dw of the reduced objective
    double second = 0.0;    // d^2/dw^2
    double direction = 0.0; // first / |second| (falls back to first when flat)
};

// Reduced objective in varpi alone: eps is eliminated through the
// closed-form inner optimum with the probability ratio ell frozen at the
// current iterate. frozen_ell must be >= 1.
class TwoStairObjective {
  public:
    TwoStairObjective(const ContentProfile& profile, const ContentLibrary& lib,
                      double frozen_ell, double gamma_eff);

    double value(double varpi) const;
    TwoStairDerivatives derivatives(double varpi) const;
    double epsilon_at(double varpi) const;

  private:
    const ContentProfile& profile_;
    double p_one_;
    double cache_m_;
    int num_j_;
    double ell_;
    double gamma_;
};

// Newton search direction of the reduced objective at varpi, with the ratio
// frozen at this iterate. Exposed per tier for validation against finite
// differences.
TwoStairDerivatives newton_direction_mu(double varpi, const MuCoverageContext& ctx,
                                        const ContentLibrary& lib);
TwoStairDerivatives newton_direction_mm(double varpi, const MmCoverageContext& ctx,
                                        const ContentLibrary& lib);

struct TwoStairResult {
    TwoStairPoint point;
    PlacementVector placement;
    double exact_scdp = 0.0;
    bool converged = false;
    bool used_mpc_endpoint = false;  // the pure head-only endpoint won
    bool library_exhausted = false;
};

// Clipped Newton ascent with Armijo backtracking over varpi in
// (0, 1/ell], followed by the closed-form head fraction. The candidate and
// the pure head-only endpoint are both scored with the exact evaluator and
// the better one is returned. Requires unit sizes and a Zipf catalog (the
// exponent is read from the library; values within 1e-6 of 1 are nudged to
// the nearest admissible side, and 0 is nudged up).
TwoStairResult twostair_optimize_mu(const ContentLibrary& lib,
                                    const MuCoverageContext& ctx,
                                    const NewtonParams& params = {});
TwoStairResult twostair_optimize_mm(const ContentLibrary& lib,
                                    const MmCoverageContext& ctx,
                                    const NewtonParams& params = {});

// Shared by both tiers (exposed for tests).
TwoStairResult twostair_optimize(const ContentProfile& profile,
                                 const ContentLibrary& lib,
                                 const NewtonParams& params);

double guarded_zipf_exponent(double gamma);

}  // namespace cachenet
