#include "cachenet/scdp_mm.hpp"

#include <cmath>
#include <stdexcept>

namespace cachenet {

MmCoverageContext::MmCoverageContext(const MmTierConfig& config, double threshold)
    : cfg(config), phi(threshold) {
    cfg.validate();
    if (phi <= 0.0) throw std::invalid_argument("mm context: phi must be > 0");
    const double ratio =
        cfg.tx_power_w * cfg.array_gain * cfg.intercept / (phi * cfg.noise_w);
    d_los = std::pow(ratio, 1.0 / cfg.alpha_los);
    d_nlos = std::pow(ratio, 1.0 / cfg.alpha_nlos);
    if (!std::isfinite(d_los) || !std::isfinite(d_nlos))
        throw std::invalid_argument("mm context: critical radius not finite");
}

double scdp_content_mm_los(double b, const MmCoverageContext& ctx) {
    const double r = std::min(ctx.cfg.los_radius_m, ctx.d_los);
    return 1.0 - std::exp(-r * r * M_PI * b * ctx.cfg.density_per_m2);
}

double scdp_content_mm_nlos(double b, const MmCoverageContext& ctx) {
    const double dl = ctx.cfg.los_radius_m;
    const double r = std::max(dl, ctx.d_nlos);
    const double k = M_PI * b * ctx.cfg.density_per_m2;
    return std::exp(-dl * dl * k) - std::exp(-r * r * k);
}

double scdp_content_mm(double b, const MmCoverageContext& ctx) {
    return scdp_content_mm_los(b, ctx) + scdp_content_mm_nlos(b, ctx);
}

double scdp_total_mm(const PlacementVector& placement, const ContentLibrary& lib,
                     const MmCoverageContext& ctx) {
    if (!placement.feasible_for(lib))
        throw std::invalid_argument("scdp_total_mm: infeasible placement");
    double total = 0.0;
    for (int j = 0; j < lib.num_contents; ++j)
        total += lib.popularity[j] * scdp_content_mm(placement.b[j], ctx);
    return total;
}

}  // namespace cachenet
