#include "cachenet/specfun.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cachenet::specfun {

namespace {

constexpr double kSeriesTol = 1e-14;
constexpr int kSeriesCap = 100000;
constexpr double kIntEps = 1e-12;

bool is_nonpositive_integer(double x) {
    return x <= 0.5 && std::fabs(x - std::round(x)) < kIntEps;
}

// Plain power series sum_{k>=0} (a)_k (b)_k / ((c)_k k!) z^k, valid for
// |z| < 1 (and terminating when a or b is a non-positive integer).
double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < kSeriesCap; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (std::fabs(term) <= kSeriesTol * std::fabs(sum)) return sum;
    }
    throw std::runtime_error("gauss_2f1: series did not converge (z=" +
                             std::to_string(z) + ")");
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c))
        throw std::domain_error("gauss_2f1: c is a non-positive integer");
    if (z >= 1.0)
        throw std::domain_error("gauss_2f1: argument z >= 1");
    if (z == 0.0) return 1.0;

    if (z < 0.0) {
        // Pfaff transformation: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a,c-b;c;w)
        // with w = z/(z-1) in (0,1). Apply it on the parameter whose
        // companion (c-.) has the smaller magnitude to keep the series tame.
        const double w = z / (z - 1.0);
        if (std::fabs(c - b) <= std::fabs(c - a))
            return std::pow(1.0 - z, -a) * hyp2f1_series(a, c - b, c, w);
        return std::pow(1.0 - z, -b) * hyp2f1_series(c - a, b, c, w);
    }
    return hyp2f1_series(a, b, c, z);
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer");

    // Lanczos, g = 7, 9 coefficients (Godfrey's table).
    static constexpr double kCoef[9] = {
        0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
    }

    const double xs = x - 1.0;
    double acc = kCoef[0];
    for (int i = 1; i < 9; ++i) acc += kCoef[i] / (xs + i);
    const double t = xs + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, xs + 0.5) * std::exp(-t) * acc;
}

double cosecant(double x) {
    const double s = std::sin(x);
    if (std::fabs(x / M_PI - std::round(x / M_PI)) < 1e-12)
        throw std::domain_error("cosecant: pole at multiple of pi");
    return 1.0 / s;
}

namespace {

void enumerate_partitions(int remaining, int max_part, std::vector<int>& mult,
                          std::vector<PartitionMultiplicity>& out) {
    if (remaining == 0) {
        out.push_back({mult});
        return;
    }
    for (int part = std::min(max_part, remaining); part >= 1; --part) {
        ++mult[part - 1];
        enumerate_partitions(remaining - part, part, mult, out);
        --mult[part - 1];
    }
}

}  // namespace

std::vector<PartitionMultiplicity> integer_partitions(int n, int cap) {
    if (n < 0) throw std::domain_error("integer_partitions: n < 0");
    if (n > cap)
        throw std::domain_error("integer_partitions: n exceeds cap " +
                                std::to_string(cap));
    std::vector<PartitionMultiplicity> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> mult(n, 0);
    enumerate_partitions(n, n, mult, out);
    return out;
}

double bell_polynomial(std::span<const double> g_derivs, int n) {
    if (n == 0) return 1.0;
    if (static_cast<int>(g_derivs.size()) < n)
        throw std::invalid_argument("bell_polynomial: need n derivatives");

    // factorials up to the partition cap fit comfortably in a double
    double fact[kPartitionCap + 1];
    fact[0] = 1.0;
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;

    double sum = 0.0;
    for (const auto& p : integer_partitions(n)) {
        double coef = fact[n];
        double prod = 1.0;
        for (int q = 1; q <= n; ++q) {
            const int tq = p.t[q - 1];
            if (tq == 0) continue;
            coef /= fact[tq] * std::pow(fact[q], tq);
            prod *= std::pow(g_derivs[q - 1], tq);
        }
        sum += coef * prod;
    }
    return sum;
}

double exp_composite_derivative(std::span<const double> g_derivs, double g_value,
                                int n) {
    return std::exp(g_value) * bell_polynomial(g_derivs, n);
}

}  // namespace cachenet::specfun
