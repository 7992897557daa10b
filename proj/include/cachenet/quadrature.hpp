#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace cachenet {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7-15 node/weight table on [-1,1].
// Column 0: abscissa, column 1: Gauss-7 weight (0 for Kronrod-only nodes),
// column 2: Kronrod-15 weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
double g7k15_panel(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double y0 = f(mid);
    double g7 = kG7K15[0][1] * y0;
    double k15 = kG7K15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * yi;
        k15 += kG7K15[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;

    err = std::fabs(k15 - g7);
    return k15;
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b]. Bisects the interval
// with the largest error estimate until both tolerances are met or the
// interval budget is exhausted (converged=false in that case; the best
// estimate is still returned).
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    double abs_tol = 1e-10,
                                    double rel_tol = 1e-10,
                                    int max_intervals = 2000) {
    struct Interval {
        double a, b, value, error;
    };

    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::vector<Interval> intervals;
    intervals.reserve(64);

    double err0;
    double v0 = detail::g7k15_panel(f, a, b, err0);
    out.evaluations = 15;
    intervals.push_back({a, b, v0, err0});

    double total = v0;
    double total_err = err0;

    while (static_cast<int>(intervals.size()) < max_intervals) {
        if (total_err <= abs_tol || total_err <= rel_tol * std::fabs(total)) break;

        // Split the worst interval.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < intervals.size(); ++i)
            if (intervals[i].error > intervals[worst].error) worst = i;

        Interval iv = intervals[worst];
        const double mid = 0.5 * (iv.a + iv.b);
        double el, er;
        const double vl = detail::g7k15_panel(f, iv.a, mid, el);
        const double vr = detail::g7k15_panel(f, mid, iv.b, er);
        out.evaluations += 30;

        total += vl + vr - iv.value;
        total_err += el + er - iv.error;

        intervals[worst] = {iv.a, mid, vl, el};
        intervals.push_back({mid, iv.b, vr, er});
    }

    out.value = total;
    out.abs_error = total_err;
    out.converged =
        total_err <= abs_tol || total_err <= rel_tol * std::fabs(total);
    return out;
}

}  // namespace cachenet
