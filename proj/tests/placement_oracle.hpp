// Test-only reference optimiser for separable concave totals
// sum_j a_j P(b_j): a per-content grid search (step 1e-3) against a budget
// multiplier, with the multiplier found by bisection. Brute force on
// purpose; no shared code with the production optimisers.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cachenet/model.hpp"

namespace oracles {

inline cachenet::PlacementVector waterfilling_placement(
    const cachenet::ContentLibrary& lib,
    const std::function<double(double)>& per_content, double grid_step = 1e-3) {
    const int num_j = lib.num_contents;

    std::vector<double> grid;
    const int steps = static_cast<int>(std::llround(1.0 / grid_step));
    grid.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i)
        grid.push_back(std::min(i * grid_step, 1.0));
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = per_content(grid[i]);

    const auto best_response = [&](double eta) {
        cachenet::PlacementVector p;
        p.b.assign(num_j, 0.0);
        double used = 0.0;
        for (int j = 0; j < num_j; ++j) {
            double best = -1e300;
            double arg = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double score = lib.popularity[j] * values[i] - eta * grid[i];
                if (score > best) {
                    best = score;
                    arg = grid[i];
                }
            }
            p.b[j] = arg;
            used += arg * lib.sizes[j];
        }
        (void)used;
        return p;
    };

    auto p0 = best_response(0.0);
    if (p0.budget_used(lib) <= lib.cache_capacity + 1e-9) return p0;

    double lo = 0.0, hi = 1.0;
    while (best_response(hi).budget_used(lib) > lib.cache_capacity) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (best_response(mid).budget_used(lib) > lib.cache_capacity)
            lo = mid;
        else
            hi = mid;
    }
    return best_response(hi);
}

}  // namespace oracles
