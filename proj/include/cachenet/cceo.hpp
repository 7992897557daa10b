#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cachenet/model.hpp"

namespace cachenet {

// Constrained cross-entropy optimisation of a placement vector: iterative
// Gaussian sampling, projection onto the box [0,1]^J, a linear penalty on
// the cache budget, elite selection, and smoothed mean/variance refits.
struct CceoParams {
    int samples = 200;           // N_s per iteration
    int elites = 8;              // refit population
    double mean_smoothing = 0.9; // iota in [0.5, 0.9]
    double var_smoothing = 0.9;  // beta in [0.8, 0.99]
    int smoothing_exponent = 9;  // q in [5, 10]
    double penalty_weight = 1e3; // H
    double stop_variance = 1e-4; // terminate when max_j sigma^2 falls below
    int max_iterations = 200;
    std::uint64_t seed = 1;
    std::vector<double> init_mean;      // empty = head/uniform warm start
    std::vector<double> init_variance;  // empty = 0.05 everywhere

    void validate(int dimension) const;
};

struct CceoTrace {
    struct Iteration {
        double max_variance;
        double best_penalized;
        std::vector<double> mean;
    };
    std::vector<Iteration> iterations;
};

struct CceoResult {
    PlacementVector placement;
    CceoTrace trace;
    bool converged = false;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

// Budget-penalised objective: objective(b) - H max(sum b_j s_j - M, 0).
// b is assumed already projected onto [0,1]^J.
double penalized_objective(const std::vector<double>& b, const ObjectiveFn& objective,
                           const ContentLibrary& lib, double penalty_weight);

// Variance smoothing factor at iteration t >= 1: beta - beta (1 - 1/t)^q.
// Equals beta at t = 1 and decays towards 0, freezing the variance late.
double dynamic_beta(int t, double beta, int q);

// Runs the optimiser until max_j sigma_t^2 < stop_variance or the iteration
// cap. The returned placement is the final mean, repaired onto the budget by
// proportionally scaling down the sub-1 entries if needed. Deterministic for
// a fixed seed; objective evaluations within an iteration may run in
// parallel but are reduced in sample order.
CceoResult cceo_optimize(const ObjectiveFn& objective, const ContentLibrary& lib,
                         const CceoParams& params);

}  // namespace cachenet
