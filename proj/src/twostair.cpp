#include "cachenet/twostair.hpp"

#include <cmath>
#include <stdexcept>

#include "cachenet/quadrature.hpp"

namespace cachenet {

namespace {

constexpr double kVarpiFloor = 1e-6;

void require_unit_sizes(const ContentLibrary& lib, const char* who) {
    for (double s : lib.sizes)
        if (s != 1.0)
            throw std::invalid_argument(std::string(who) +
                                        ": defined for unit content sizes only");
}

}  // namespace

void NewtonParams::validate() const {
    if (max_iterations < 1 || step_tolerance <= 0 || armijo_constant <= 0)
        throw std::invalid_argument("newton: limits must be positive");
    if (backtrack_shrink <= 0 || backtrack_shrink >= 1)
        throw std::invalid_argument("newton: shrink must be in (0,1)");
}

double guarded_zipf_exponent(double gamma) {
    if (gamma < 0) throw std::invalid_argument("two-stair: gamma must be >= 0");
    if (gamma < 1e-6) return 1e-6;
    if (std::fabs(gamma - 1.0) < 1e-6) return gamma >= 1.0 ? 1.0 + 1e-6 : 1.0 - 1e-6;
    return gamma;
}

PlacementVector placement_from_twostair(const TwoStairPoint& pt,
                                        const ContentLibrary& lib,
                                        bool* library_exhausted) {
    require_unit_sizes(lib, "placement_from_twostair");
    if (pt.epsilon < 0 || pt.epsilon > 1 || pt.varpi < 0 || pt.varpi > 1)
        throw std::invalid_argument("two-stair point outside the unit square");
    if (pt.epsilon == 1.0 && pt.varpi != 0.0)
        throw std::invalid_argument(
            "two-stair point: a full head leaves no room for a diversity region");
    if (library_exhausted) *library_exhausted = false;

    const int num_j = lib.num_contents;
    const double cache_m = lib.cache_capacity;
    int head = static_cast<int>(std::floor(pt.epsilon * cache_m + 1e-9));
    head = std::min(head, num_j);

    long long diversity = 0;
    if (pt.varpi > 0.0)
        diversity = static_cast<long long>(
            std::floor((cache_m - head) / pt.varpi + 1e-9));
    if (diversity > num_j - head) {
        diversity = num_j - head;
        if (library_exhausted) *library_exhausted = true;
    }

    PlacementVector p;
    p.b.assign(num_j, 0.0);
    for (int j = 0; j < head; ++j) p.b[j] = 1.0;
    for (long long j = head; j < head + diversity; ++j) p.b[j] = pt.varpi;
    return p;
}

double zipf_head_mass_approx(double k, int num_contents, double gamma) {
    if (k < 1.0) throw std::domain_error("zipf_head_mass_approx: k must be >= 1");
    if (gamma <= 0.0 || std::fabs(gamma - 1.0) < 1e-12)
        throw std::domain_error("zipf_head_mass_approx: gamma must be > 0 and != 1");
    const double e = 1.0 - gamma;
    return (std::pow(k, e) - 1.0) / (std::pow(num_contents, e) - 1.0);
}

double approx_objective_core(double eps, double varpi, double cache_m, int num_j,
                             double gamma, double p_one, double p_varpi) {
    const double e = 1.0 - gamma;
    const double denom = std::pow(num_j, e) - 1.0;
    if (eps >= 1.0 || varpi <= 0.0) {
        // Head-only special case.
        return p_one * (std::pow(cache_m, e) - 1.0) / denom;
    }
    const double k = std::pow(cache_m, e) / denom;
    const double stretch = eps + (1.0 - eps) / varpi;
    const double eps_pow = std::pow(eps, e);
    return p_one * k * eps_pow - p_one / denom +
           p_varpi * k * (std::pow(stretch, e) - eps_pow);
}

double approx_objective(const TwoStairPoint& pt, const ContentLibrary& lib,
                        double p_one, double p_varpi) {
    if (!lib.zipf_exponent)
        throw std::invalid_argument("approx_objective: library is not Zipf");
    const double gamma = *lib.zipf_exponent;
    if (std::fabs(gamma - 1.0) < 1e-12 || gamma <= 0.0)
        throw std::domain_error("approx_objective: gamma must be > 0 and != 1");
    return approx_objective_core(pt.epsilon, pt.varpi, lib.cache_capacity,
                                 lib.num_contents, gamma, p_one, p_varpi);
}

double subproblem_objective(double eps, double varpi, double ell, double gamma,
                            int num_j) {
    const double e = 1.0 - gamma;
    const double stretch = eps + (1.0 - eps) / varpi;
    return ((ell - 1.0) * std::pow(eps, e) + std::pow(stretch, e) - ell) /
           (std::pow(num_j, e) - 1.0);
}

double optimal_epsilon(double varpi, double ell, double gamma, bool* degenerate) {
    if (varpi <= 0.0 || varpi > 1.0)
        throw std::invalid_argument("optimal_epsilon: varpi must be in (0,1]");
    if (ell < 1.0 - 1e-12)
        throw std::invalid_argument("optimal_epsilon: ell must be >= 1");
    if (degenerate) *degenerate = false;

    if (varpi >= 1.0 - 1e-12) return 1.0;  // diversity at probability 1 is a head
    if (ell <= 1.0 + 1e-12) {
        // Caching at 1 is no better than at varpi: spread maximally.
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const double ratio = (ell - 1.0) / (1.0 / varpi - 1.0);
    const double eps_o =
        1.0 / ((std::pow(ratio, -1.0 / gamma) - 1.0) * varpi + 1.0);
    return std::min(std::max(eps_o, 0.0), 1.0);
}

// ---------------------------------------------------------------------------
// Tier profiles

double MuContentProfile::weighted_integral(double w, int kernel) const {
    const double k = M_PI * w * ctx_.config().density_per_m2;
    const double u_max = -std::log(ctx_.quadrature().tail_cutoff);
    const auto integrand = [&](double u) {
        const double x = std::sqrt(u / k);
        const double cov = conditional_coverage_mu(x, 0.0, ctx_);
        switch (kernel) {
            case 0: return cov * std::exp(-u);
            case 1: return cov * (1.0 - u) * std::exp(-u);
            default: return cov * u * (u - 2.0) * std::exp(-u);
        }
    };
    const auto res = integrate_adaptive(integrand, 0.0, u_max,
                                        ctx_.quadrature().abs_tol, 1e-12,
                                        ctx_.quadrature().max_intervals);
    if (!res.converged)
        throw std::runtime_error("mu profile: quadrature did not converge");
    return res.value;
}

double MuContentProfile::value(double b) const {
    if (b <= 0.0) return 0.0;
    return weighted_integral(b, 0);
}

double MuContentProfile::d1(double b) const { return weighted_integral(b, 1) / b; }

double MuContentProfile::d2(double b) const {
    return weighted_integral(b, 2) / (b * b);
}

double MuContentProfile::exact_total(const PlacementVector& placement,
                                     const ContentLibrary& lib) const {
    return scdp_total_mu(placement, lib, ctx_);
}

double MmContentProfile::value(double b) const { return scdp_content_mm(b, ctx_); }

double MmContentProfile::d1(double b) const {
    const double lam = ctx_.cfg.density_per_m2;
    const double dl = ctx_.cfg.los_radius_m;
    const double rl = std::min(dl, ctx_.d_los);
    const double rn = std::max(dl, ctx_.d_nlos);
    const double pl = M_PI * lam;
    return rl * rl * pl * std::exp(-rl * rl * pl * b) -
           dl * dl * pl * std::exp(-dl * dl * pl * b) +
           rn * rn * pl * std::exp(-rn * rn * pl * b);
}

double MmContentProfile::d2(double b) const {
    const double lam = ctx_.cfg.density_per_m2;
    const double dl = ctx_.cfg.los_radius_m;
    const double rl = std::min(dl, ctx_.d_los);
    const double rn = std::max(dl, ctx_.d_nlos);
    const double pl = M_PI * lam;
    const double rl2 = rl * rl, dl2 = dl * dl, rn2 = rn * rn;
    return -rl2 * rl2 * pl * pl * std::exp(-rl2 * pl * b) +
           dl2 * dl2 * pl * pl * std::exp(-dl2 * pl * b) -
           rn2 * rn2 * pl * pl * std::exp(-rn2 * pl * b);
}

double MmContentProfile::exact_total(const PlacementVector& placement,
                                     const ContentLibrary& lib) const {
    return scdp_total_mm(placement, lib, ctx_);
}

// ---------------------------------------------------------------------------
// Reduced objective

TwoStairObjective::TwoStairObjective(const ContentProfile& profile,
                                     const ContentLibrary& lib, double frozen_ell,
                                     double gamma_eff)
    : profile_(profile),
      p_one_(profile.value(1.0)),
      cache_m_(lib.cache_capacity),
      num_j_(lib.num_contents),
      ell_(frozen_ell),
      gamma_(gamma_eff) {
    if (ell_ < 1.0) ell_ = 1.0;
}

double TwoStairObjective::epsilon_at(double varpi) const {
    return optimal_epsilon(varpi, ell_, gamma_);
}

double TwoStairObjective::value(double varpi) const {
    const double eps = epsilon_at(varpi);
    return approx_objective_core(eps, varpi, cache_m_, num_j_, gamma_, p_one_,
                                 profile_.value(varpi));
}

TwoStairDerivatives TwoStairObjective::derivatives(double w) const {
    TwoStairDerivatives out;
    const double g = gamma_;
    const double e = 1.0 - g;
    const double denom = std::pow(num_j_, e) - 1.0;
    const double big_k = std::pow(cache_m_, e) / denom;

    // eps_o(w) and its derivatives with the ratio frozen.
    const double a1 = std::pow(ell_ - 1.0, -1.0 / g);
    const double y = 1.0 / w - 1.0;
    const double u = a1 * std::pow(y, 1.0 / g);
    const double du = -a1 * (1.0 / g) * std::pow(y, 1.0 / g - 1.0) / (w * w);
    const double d2u =
        a1 * (1.0 / g) *
        ((1.0 / g - 1.0) * std::pow(y, 1.0 / g - 2.0) / (w * w * w * w) +
         2.0 * std::pow(y, 1.0 / g - 1.0) / (w * w * w));

    const double den = (u - 1.0) * w + 1.0;
    const double dden = du * w + u - 1.0;
    const double d2den = d2u * w + 2.0 * du;
    const double eps = 1.0 / den;
    const double deps = -dden * eps * eps;
    const double d2eps = 2.0 * eps * eps * eps * dden * dden - eps * eps * d2den;

    const double s = eps + (1.0 - eps) / w;
    const double ds = deps * (1.0 - 1.0 / w) + (eps - 1.0) / (w * w);
    const double d2s = d2eps * (1.0 - 1.0 / w) + 2.0 * deps / (w * w) -
                       2.0 * (eps - 1.0) / (w * w * w);

    const double eps_pow = std::pow(eps, e);
    const double s_pow = std::pow(s, e);
    const double bracket = s_pow - eps_pow;
    const double dbracket = e * (std::pow(s, -g) * ds - std::pow(eps, -g) * deps);
    const double d2bracket =
        e * (-g * std::pow(s, -g - 1.0) * ds * ds + std::pow(s, -g) * d2s +
             g * std::pow(eps, -g - 1.0) * deps * deps - std::pow(eps, -g) * d2eps);

    const double pw = profile_.value(w);
    const double dpw = profile_.d1(w);
    const double d2pw = profile_.d2(w);

    out.first = p_one_ * big_k * e * std::pow(eps, -g) * deps +
                dpw * big_k * bracket + pw * big_k * dbracket;
    out.second = p_one_ * big_k * e *
                     (-g * std::pow(eps, -g - 1.0) * deps * deps +
                      std::pow(eps, -g) * d2eps) +
                 d2pw * big_k * bracket + 2.0 * dpw * big_k * dbracket +
                 pw * big_k * d2bracket;

    out.direction = std::fabs(out.second) > 1e-14 ? out.first / std::fabs(out.second)
                                                  : out.first;
    return out;
}

TwoStairDerivatives newton_direction_mu(double varpi, const MuCoverageContext& ctx,
                                        const ContentLibrary& lib) {
    if (!lib.zipf_exponent)
        throw std::invalid_argument("newton_direction_mu: library is not Zipf");
    MuContentProfile profile(ctx);
    const double ell = profile.value(1.0) / profile.value(varpi);
    TwoStairObjective obj(profile, lib, ell,
                          guarded_zipf_exponent(*lib.zipf_exponent));
    return obj.derivatives(varpi);
}

TwoStairDerivatives newton_direction_mm(double varpi, const MmCoverageContext& ctx,
                                        const ContentLibrary& lib) {
    if (!lib.zipf_exponent)
        throw std::invalid_argument("newton_direction_mm: library is not Zipf");
    MmContentProfile profile(ctx);
    const double ell = profile.value(1.0) / profile.value(varpi);
    TwoStairObjective obj(profile, lib, ell,
                          guarded_zipf_exponent(*lib.zipf_exponent));
    return obj.derivatives(varpi);
}

// ---------------------------------------------------------------------------
// Outer search

TwoStairResult twostair_optimize(const ContentProfile& profile,
                                 const ContentLibrary& lib,
                                 const NewtonParams& params) {
    params.validate();
    require_unit_sizes(lib, "twostair_optimize");
    if (!lib.zipf_exponent)
        throw std::invalid_argument("twostair_optimize: library is not Zipf");
    const double gamma = guarded_zipf_exponent(*lib.zipf_exponent);

    TwoStairResult result;

    if (lib.cache_capacity >= lib.num_contents) {
        // The budget covers the catalog: cache everything everywhere.
        result.point = {1.0, 0.0};
        result.placement.b.assign(lib.num_contents, 1.0);
        result.exact_scdp = profile.exact_total(result.placement, lib);
        result.converged = true;
        return result;
    }

    const double p_one = profile.value(1.0);
    if (p_one <= 0.0)
        throw std::runtime_error("twostair_optimize: degenerate tier (P(1) = 0)");

    const auto ell_at = [&](double w) {
        const double pw = profile.value(w);
        return pw > 0.0 ? std::max(p_one / pw, 1.0) : 1e12;
    };

    double w = params.init_varpi > 0.0
                   ? params.init_varpi
                   : std::min(0.5, 1.0 / ell_at(0.5));
    w = std::max(w, kVarpiFloor);

    bool converged = false;
    for (int it = 0; it < params.max_iterations; ++it) {
        const double ell = ell_at(w);
        const double hi = std::max(1.0 / ell, kVarpiFloor);
        TwoStairObjective obj(profile, lib, ell, gamma);
        if (w > hi) w = hi;

        const auto deriv = obj.derivatives(w);
        const double base = obj.value(w);

        double step_len = 1.0;
        double cand = w;
        bool accepted = false;
        while (step_len > 1e-12) {
            const double trial =
                std::clamp(w + step_len * deriv.direction, kVarpiFloor, hi);
            if (trial != w &&
                obj.value(trial) >=
                    base + params.armijo_constant * deriv.first * (trial - w)) {
                cand = trial;
                accepted = true;
                break;
            }
            step_len *= params.backtrack_shrink;
        }

        if (!accepted) {
            converged = true;  // no admissible ascent step
            break;
        }
        const double moved = std::fabs(cand - w);
        w = cand;
        if (moved < params.step_tolerance) {
            converged = true;
            break;
        }
    }

    const double ell_final = ell_at(w);
    double eps = optimal_epsilon(w, ell_final, gamma);

    TwoStairPoint pt;
    if (eps >= 1.0 - 1e-12) {
        pt = {1.0, 0.0};  // a full head forces an empty diversity region
    } else {
        pt = {eps, w};
    }

    result.point = pt;
    result.converged = converged;
    result.placement = placement_from_twostair(pt, lib, &result.library_exhausted);
    result.exact_scdp = profile.exact_total(result.placement, lib);

    // The head-only endpoint is always a feasible fallback; keep whichever
    // exact value is better.
    const PlacementVector mpc = mpc_placement(lib);
    const double mpc_scdp = profile.exact_total(mpc, lib);
    if (mpc_scdp > result.exact_scdp) {
        result.point = {1.0, 0.0};
        result.placement = mpc;
        result.exact_scdp = mpc_scdp;
        result.used_mpc_endpoint = true;
    }
    return result;
}

TwoStairResult twostair_optimize_mu(const ContentLibrary& lib,
                                    const MuCoverageContext& ctx,
                                    const NewtonParams& params) {
    MuContentProfile profile(ctx);
    return twostair_optimize(profile, lib, params);
}

TwoStairResult twostair_optimize_mm(const ContentLibrary& lib,
                                    const MmCoverageContext& ctx,
                                    const NewtonParams& params) {
    MmContentProfile profile(ctx);
    return twostair_optimize(profile, lib, params);
}

}  // namespace cachenet
