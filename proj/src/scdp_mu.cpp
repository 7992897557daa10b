#include "cachenet/scdp_mu.hpp"

#include <cmath>
#include <stdexcept>

#include "cachenet/quadrature.hpp"
#include "cachenet/specfun.hpp"

namespace cachenet {

void QuadratureSpec::validate() const {
    if (abs_tol <= 0 || tail_cutoff <= 0 || max_intervals < 1)
        throw std::invalid_argument("quadrature spec: tolerances must be positive");
}

MuCoverageContext::MuCoverageContext(const MuTierConfig& config, double threshold,
                                     QuadratureSpec quadrature)
    : cfg_(config), phi_(threshold), quad_(quadrature) {
    cfg_.validate();
    quad_.validate();
    if (phi_ <= 0.0) throw std::invalid_argument("mu context: phi must be > 0");

    const double alpha = cfg_.path_loss_exponent;
    const double lambda = cfg_.density_per_m2;
    const double two_over_alpha = 2.0 / alpha;

    noise_coeff_ = phi_ * cfg_.noise_w / (cfg_.tx_power_w * cfg_.intercept);

    const double f0 = specfun::gauss_2f1(1.0, 1.0 - two_over_alpha,
                                         2.0 - two_over_alpha, -phi_);
    exp_cached_ = 2.0 * M_PI * lambda * phi_ * f0 / (alpha - 2.0);

    const double csc = specfun::cosecant(2.0 * M_PI / alpha);
    exp_uncached_ = (2.0 * M_PI * M_PI / alpha) * lambda * csc *
                    std::pow(phi_, two_over_alpha);

    const int n = cfg_.antennas;
    cached_coeff_.assign(n, 0.0);
    uncached_coeff_.assign(n, 0.0);
    inv_factorial_.assign(n, 1.0);
    partitions_.resize(n);
    partitions_[0] = {};  // n = 0 contributes the bare exponential

    double q_fact = 1.0;
    double phi_pow = 1.0;
    double falling = 1.0;  // prod_{i<q} (2/alpha - i)
    double sign = 1.0;
    for (int q = 1; q < n; ++q) {
        q_fact *= q;
        phi_pow *= phi_;
        falling *= two_over_alpha - (q - 1);
        sign = -sign;
        inv_factorial_[q] = inv_factorial_[q - 1] / q;

        const double fq = specfun::gauss_2f1(q + 1.0, q - two_over_alpha,
                                             q + 1.0 - two_over_alpha, -phi_);
        cached_coeff_[q] =
            sign * 2.0 * M_PI * lambda * q_fact * phi_pow * fq / (alpha * q - 2.0);
        uncached_coeff_[q] = -exp_uncached_ * falling;

        // Partition coefficient table for the Faa di Bruno sum at order q.
        std::vector<PartitionTerm> terms;
        for (const auto& p : specfun::integer_partitions(q)) {
            PartitionTerm term;
            term.coef = q_fact;
            for (int part = 1; part <= q; ++part) {
                const int tq = p.t[part - 1];
                if (tq == 0) continue;
                double part_fact = 1.0;
                for (int i = 2; i <= part; ++i) part_fact *= i;
                double tq_fact = 1.0;
                for (int i = 2; i <= tq; ++i) tq_fact *= i;
                term.coef /= tq_fact * std::pow(part_fact, tq);
                term.pows.emplace_back(part, tq);
            }
            terms.push_back(std::move(term));
        }
        partitions_[q] = std::move(terms);
    }
}

double laplace_cached_interference(double s, double x, double b,
                                   const MuCoverageContext& ctx) {
    if (s < 0 || x <= 0 || b < 0 || b > 1)
        throw std::invalid_argument("laplace_cached_interference: bad arguments");
    if (s == 0.0 || b == 0.0) return 1.0;
    const double alpha = ctx.config().path_loss_exponent;
    // Effective threshold at radius x: s P beta x^-alpha.
    const double phi_eff =
        s * ctx.config().tx_power_w * ctx.config().intercept / std::pow(x, alpha);
    const double f = specfun::gauss_2f1(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha,
                                        -phi_eff);
    const double integral = x * x * phi_eff * f / (alpha - 2.0);
    return std::exp(-2.0 * M_PI * b * ctx.config().density_per_m2 * integral);
}

double laplace_uncached_interference(double s, double b,
                                     const MuCoverageContext& ctx) {
    if (s < 0 || b < 0 || b > 1)
        throw std::invalid_argument("laplace_uncached_interference: bad arguments");
    if (s == 0.0 || b == 1.0) return 1.0;
    const double alpha = ctx.config().path_loss_exponent;
    const double c = s * ctx.config().tx_power_w * ctx.config().intercept;
    const double integral = (M_PI / alpha) * std::pow(c, 2.0 / alpha) *
                            specfun::cosecant(2.0 * M_PI / alpha);
    return std::exp(-2.0 * M_PI * (1.0 - b) * ctx.config().density_per_m2 *
                    integral);
}

double log_laplace_derivative(int q, double x, double b,
                              const MuCoverageContext& ctx) {
    if (q < 1) throw std::invalid_argument("log_laplace_derivative: q must be >= 1");
    if (x <= 0) throw std::invalid_argument("log_laplace_derivative: x must be > 0");
    const double alpha = ctx.config().path_loss_exponent;
    if (q >= ctx.config().antennas) {
        // Off the precomputed range (only needed by tests); assemble directly.
        const double two_over_alpha = 2.0 / alpha;
        double q_fact = 1.0, phi_pow = 1.0, falling = 1.0;
        double sign = 1.0;
        for (int i = 1; i <= q; ++i) {
            q_fact *= i;
            phi_pow *= ctx.phi();
            falling *= two_over_alpha - (i - 1);
            sign = -sign;
        }
        const double fq = specfun::gauss_2f1(q + 1.0, q - two_over_alpha,
                                             q + 1.0 - two_over_alpha, -ctx.phi());
        const double cached = sign * 2.0 * M_PI * ctx.config().density_per_m2 *
                              q_fact * phi_pow * fq / (alpha * q - 2.0);
        const double uncached = -ctx.uncached_exponent_coeff() * falling;
        const double xp = x * x * std::pow(x, -alpha * q);
        return (q == 1 ? -ctx.noise_coeff() : 0.0) +
               (b * cached + (1.0 - b) * uncached) * xp;
    }
    const double xp = x * x * std::pow(x, -alpha * q);
    return (q == 1 ? -ctx.noise_coeff() : 0.0) +
           (b * ctx.cached_deriv_coeff(q) + (1.0 - b) * ctx.uncached_deriv_coeff(q)) *
               xp;
}

double conditional_coverage_mu(double x, double b, const MuCoverageContext& ctx,
                               bool* clamped) {
    if (x <= 0) throw std::invalid_argument("conditional_coverage_mu: x must be > 0");
    if (b < 0 || b > 1)
        throw std::invalid_argument("conditional_coverage_mu: b outside [0,1]");
    if (clamped) *clamped = false;

    const double alpha = ctx.config().path_loss_exponent;
    const double v = std::pow(x, alpha);
    const double x2 = x * x;
    const double g = -ctx.noise_coeff() * v -
                     (b * ctx.cached_exponent_coeff() +
                      (1.0 - b) * ctx.uncached_exponent_coeff()) *
                         x2;

    const int n_ant = ctx.config().antennas;
    double series = 1.0;  // n = 0 term of the Faa di Bruno sum

    if (n_ant > 1) {
        // g^(q) at v = x^alpha; the spatial factor x^(2 - alpha q) decays one
        // power of v per order.
        double derivs[64];
        double xp = x2 / v;
        for (int q = 1; q < n_ant; ++q) {
            derivs[q - 1] = (q == 1 ? -ctx.noise_coeff() : 0.0) +
                            (b * ctx.cached_deriv_coeff(q) +
                             (1.0 - b) * ctx.uncached_deriv_coeff(q)) *
                                xp;
            xp /= v;
        }

        // sign(g^(q)) = (-1)^q, so the partition products carry (-1)^n which
        // cancels against (-v)^n: every term below is non-negative and the
        // assembly is cancellation-free.
        const auto& tables = ctx.partition_terms();
        double v_pow = 1.0;
        for (int n = 1; n < n_ant; ++n) {
            v_pow *= -v;
            double bell = 0.0;
            for (const auto& term : tables[n]) {
                double prod = term.coef;
                for (const auto& [q, t] : term.pows)
                    for (int i = 0; i < t; ++i) prod *= derivs[q - 1];
                bell += prod;
            }
            series += v_pow * ctx.inv_factorial(n) * bell;
        }
    }

    double value = std::exp(g) * series;
    if (value < -1e-6 || value > 1.0 + 1e-6)
        throw std::runtime_error("conditional_coverage_mu: assembly out of range");
    if (value < 0.0 || value > 1.0) {
        if ((value < -1e-9 || value > 1.0 + 1e-9) && clamped) *clamped = true;
        value = std::min(1.0, std::max(0.0, value));
    }
    return value;
}

double scdp_content_mu(double b, const MuCoverageContext& ctx) {
    if (b < 0 || b > 1) throw std::invalid_argument("scdp_content_mu: b outside [0,1]");
    if (b == 0.0) return 0.0;

    const double k = M_PI * b * ctx.config().density_per_m2;
    const double u_max = -std::log(ctx.quadrature().tail_cutoff);
    const auto integrand = [&](double u) {
        const double x = std::sqrt(u / k);
        return conditional_coverage_mu(x, b, ctx) * std::exp(-u);
    };
    const auto res = integrate_adaptive(integrand, 0.0, u_max,
                                        ctx.quadrature().abs_tol, 1e-12,
                                        ctx.quadrature().max_intervals);
    if (!res.converged)
        throw std::runtime_error(
            "scdp_content_mu: outer quadrature did not converge (b=" +
            std::to_string(b) + ", error=" + std::to_string(res.abs_error) + ")");
    return std::min(1.0, std::max(0.0, res.value));
}

double MuCoverageContext::cached_scdp(double b) const {
    const auto key = static_cast<std::int64_t>(std::llround(b * 1e12));
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    const double value = scdp_content_mu(static_cast<double>(key) * 1e-12, *this);
    std::lock_guard<std::mutex> lock(memo_mutex_);
    // Optimiser sampling produces mostly-unique keys; dropping the cache once
    // in a while is cheaper than letting it grow without bound. Values are
    // recomputable, so clearing preserves the insert-or-read contract.
    if (memo_.size() >= 1u << 20) memo_.clear();
    memo_[key] = value;
    return value;
}

double scdp_total_mu(const PlacementVector& placement, const ContentLibrary& lib,
                     const MuCoverageContext& ctx) {
    if (!placement.feasible_for(lib))
        throw std::invalid_argument("scdp_total_mu: infeasible placement");
    double total = 0.0;
    for (int j = 0; j < lib.num_contents; ++j) {
        if (placement.b[j] <= 0.0 || lib.popularity[j] == 0.0) continue;
        total += lib.popularity[j] * ctx.cached_scdp(placement.b[j]);
    }
    return total;
}

}  // namespace cachenet
