#include "cachenet/cceo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cachenet/rng.hpp"

namespace cachenet {

void CceoParams::validate(int dimension) const {
    if (samples < 2 || elites < 1 || elites >= samples)
        throw std::invalid_argument("cceo: need 1 <= elites < samples");
    if (mean_smoothing < 0.5 || mean_smoothing > 0.9)
        throw std::invalid_argument("cceo: mean smoothing outside [0.5, 0.9]");
    if (var_smoothing < 0.8 || var_smoothing > 0.99)
        throw std::invalid_argument("cceo: variance smoothing outside [0.8, 0.99]");
    if (smoothing_exponent < 5 || smoothing_exponent > 10)
        throw std::invalid_argument("cceo: smoothing exponent outside [5, 10]");
    if (penalty_weight <= 0 || stop_variance <= 0 || max_iterations < 1)
        throw std::invalid_argument("cceo: penalty/stop/iteration limits must be positive");
    if (!init_mean.empty() && static_cast<int>(init_mean.size()) != dimension)
        throw std::invalid_argument("cceo: init mean dimension mismatch");
    if (!init_variance.empty() && static_cast<int>(init_variance.size()) != dimension)
        throw std::invalid_argument("cceo: init variance dimension mismatch");
}

double penalized_objective(const std::vector<double>& b, const ObjectiveFn& objective,
                           const ContentLibrary& lib, double penalty_weight) {
    double used = 0.0;
    for (int j = 0; j < lib.num_contents; ++j) used += b[j] * lib.sizes[j];
    const double excess = std::max(used - lib.cache_capacity, 0.0);
    return objective(b) - penalty_weight * excess;
}

double dynamic_beta(int t, double beta, int q) {
    if (t < 1) throw std::invalid_argument("dynamic_beta: t must be >= 1");
    return beta - beta * std::pow(1.0 - 1.0 / t, q);
}

namespace {

// Scale the sub-1 entries down proportionally until the budget holds. If the
// saturated entries alone exceed the budget, scale the whole vector.
void repair_budget(std::vector<double>& b, const ContentLibrary& lib) {
    double used = 0.0;
    for (int j = 0; j < lib.num_contents; ++j) used += b[j] * lib.sizes[j];
    if (used <= lib.cache_capacity + 1e-12) return;

    double pinned = 0.0;
    double scalable = 0.0;
    for (int j = 0; j < lib.num_contents; ++j) {
        if (b[j] >= 1.0 - 1e-12)
            pinned += b[j] * lib.sizes[j];
        else
            scalable += b[j] * lib.sizes[j];
    }
    if (pinned <= lib.cache_capacity && scalable > 0.0) {
        const double scale = (lib.cache_capacity - pinned) / scalable;
        for (int j = 0; j < lib.num_contents; ++j)
            if (b[j] < 1.0 - 1e-12) b[j] *= scale;
    } else {
        const double scale = lib.cache_capacity / used;
        for (double& v : b) v *= scale;
    }
}

}  // namespace

CceoResult cceo_optimize(const ObjectiveFn& objective, const ContentLibrary& lib,
                         const CceoParams& params) {
    const int dim = lib.num_contents;
    params.validate(dim);

    std::vector<double> mean = params.init_mean;
    if (mean.empty()) {
        // Warm start between the head-only baseline and a uniform budget
        // share. Keeps the mean well inside the feasible region (selection
        // starts on the objective, not the penalty) and halves the distance
        // the saturated coordinates have to travel before the variance
        // schedule freezes them.
        const double share = std::min(lib.cache_capacity / lib.total_size(), 1.0);
        const PlacementVector head = mpc_placement(lib);
        mean.resize(dim);
        for (int j = 0; j < dim; ++j)
            mean[j] = 0.5 * head.b[j] + 0.25 * share;
    }
    std::vector<double> variance = params.init_variance;
    if (variance.empty()) variance.assign(dim, 0.05);

    SplitMix64 sampler = substream(params.seed, 0x63636530ULL);

    std::vector<std::vector<double>> population(
        params.samples, std::vector<double>(dim));
    std::vector<double> scores(params.samples);
    std::vector<int> order(params.samples);

    CceoResult result;
    result.converged = false;

    for (int t = 1; t <= params.max_iterations; ++t) {
        // Sampling + projection onto [0,1]^J. Draws are serial so the stream
        // is independent of how evaluations are scheduled.
        for (int i = 0; i < params.samples; ++i) {
            auto& s = population[i];
            for (int j = 0; j < dim; ++j) {
                const double draw =
                    mean[j] + std::sqrt(variance[j]) * sampler.normal();
                s[j] = std::clamp(draw, 0.0, 1.0);
            }
        }

#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < params.samples; ++i)
            scores[i] =
                penalized_objective(population[i], objective, lib,
                                    params.penalty_weight);

        // Elite selection; ties broken towards the lower sample index.
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return scores[a] > scores[b]; });

        const double iota = params.mean_smoothing;
        const double beta_t =
            dynamic_beta(t, params.var_smoothing, params.smoothing_exponent);
        double max_var = 0.0;
        for (int j = 0; j < dim; ++j) {
            double m = 0.0;
            for (int e = 0; e < params.elites; ++e) m += population[order[e]][j];
            m /= params.elites;
            double v = 0.0;
            for (int e = 0; e < params.elites; ++e) {
                const double d = population[order[e]][j] - m;
                v += d * d;
            }
            v /= params.elites;

            mean[j] = iota * m + (1.0 - iota) * mean[j];
            variance[j] = beta_t * v + (1.0 - beta_t) * variance[j];
            max_var = std::max(max_var, variance[j]);
        }

        result.trace.iterations.push_back(
            {max_var, scores[order[0]], mean});

        if (max_var < params.stop_variance) {
            result.converged = true;
            break;
        }
    }

    std::vector<double> best = mean;
    for (double& v : best) v = std::clamp(v, 0.0, 1.0);
    repair_budget(best, lib);
    result.placement.b = std::move(best);
    return result;
}

}  // namespace cachenet
