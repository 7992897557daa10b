// Test-only reference implementations, kept independent of the library's
// evaluation routes: the hypergeometric oracle sums the defining series in
// extended precision (the library transforms negative arguments first), the
// gamma oracle uses a Stirling tail with upward recurrence (the library uses
// Lanczos), the partition count comes from the pentagonal-number recurrence,
// and the interference integrals are computed by brute-force quadrature of
// their defining forms rather than closed forms.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cachenet/quadrature.hpp"

namespace oracles {

// Direct series sum of 2F1 in long double; valid for |z| < 1.
inline long double hyp2f1_series_ld(long double a, long double b, long double c,
                                    long double z) {
    if (std::fabs((double)z) >= 1.0)
        throw std::invalid_argument("oracle 2f1: |z| must be < 1");
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 200000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0L)) * z;
        sum += term;
        if (fabsl(term) <= 1e-21L * fabsl(sum)) return sum;
    }
    throw std::runtime_error("oracle 2f1: no convergence");
}

// log Gamma via the Stirling series at x + 12 and downward recurrence.
inline long double gamma_ld(long double x) {
    long double shift = 1.0L;
    while (x < 12.0L) {
        shift *= x;
        x += 1.0L;
    }
    // Stirling with Bernoulli tail terms.
    static const long double bern[] = {
        1.0L / 12, -1.0L / 360, 1.0L / 1260, -1.0L / 1680, 1.0L / 1188,
        -691.0L / 360360, 7.0L / 156, -3617.0L / 122400};
    long double lg = (x - 0.5L) * logl(x) - x + 0.5L * logl(2.0L * M_PIl);
    long double xp = x;
    for (long double bcoef : bern) {
        lg += bcoef / xp;
        xp *= x * x;
    }
    return expl(lg) / shift;
}

// Partition counts p(0..n_max) by Euler's pentagonal-number recurrence.
inline std::vector<long long> partition_counts(int n_max) {
    std::vector<long long> p(n_max + 1, 0);
    p[0] = 1;
    for (int n = 1; n <= n_max; ++n) {
        long long total = 0;
        for (int k = 1;; ++k) {
            const int g1 = k * (3 * k - 1) / 2;
            const int g2 = k * (3 * k + 1) / 2;
            if (g1 > n && g2 > n) break;
            const long long sign = (k % 2 == 1) ? 1 : -1;
            if (g1 <= n) total += sign * p[n - g1];
            if (g2 <= n) total += sign * p[n - g2];
        }
        p[n] = total;
    }
    return p;
}

// Central finite differences.
inline double fd_first(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd_second(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Brute-force interference integrals. The defining integrands decay like
// r^(1-alpha), far too slowly to truncate, so the tail [x0, inf) is mapped
// onto (0,1] with r = x0 / t^2, which makes the integrand bounded for any
// alpha > 2.
inline double cached_interference_integral(double s_pb, double x, double alpha) {
    // int_x^inf (1 - 1/(1 + s_pb r^-alpha)) r dr, s_pb = s P beta.
    // The bracket is evaluated as y/(1+y), which is exact for tiny y where
    // the printed form cancels to zero.
    const auto f = [&](double r) {
        const double y = s_pb * std::pow(r, -alpha);
        return y / (1.0 + y) * r;
    };
    const auto tail = [&](double t) {
        const double r = x / (t * t);
        const double jac = 2.0 * x / (t * t * t);
        return f(r) * jac;
    };
    const auto res = cachenet::integrate_adaptive(tail, 0.0, 1.0, 1e-12, 1e-11, 4000);
    if (!res.converged) throw std::runtime_error("oracle: cached integral");
    return res.value;
}

inline double uncached_interference_integral(double s_pb, double alpha) {
    // int_0^inf (1 - 1/(1 + s_pb r^-alpha)) r dr, split at the distance where
    // the two terms balance.
    const double x0 = std::pow(s_pb, 1.0 / alpha);
    const auto f = [&](double r) {
        const double y = s_pb * std::pow(r, -alpha);
        return y / (1.0 + y) * r;
    };
    const auto head =
        cachenet::integrate_adaptive(f, 0.0, x0, 1e-12, 1e-11, 4000);
    const auto tail_map = [&](double t) {
        const double r = x0 / (t * t);
        return f(r) * 2.0 * x0 / (t * t * t);
    };
    const auto tail =
        cachenet::integrate_adaptive(tail_map, 0.0, 1.0, 1e-12, 1e-11, 4000);
    if (!head.converged || !tail.converged)
        throw std::runtime_error("oracle: uncached integral");
    return head.value + tail.value;
}

}  // namespace oracles
