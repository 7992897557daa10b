#pragma once

#include <span>
#include <vector>

namespace cachenet::specfun {

// Gauss hypergeometric function 2F1(a,b;c;z) for real arguments with
// z < 1. Arguments z < 0 are routed through the Pfaff transformation
// z -> z/(z-1) so the resulting series has argument in (0,1) and converges
// for any negative z. Relative accuracy target 1e-10.
//
// Throws std::domain_error when c is a non-positive integer or z >= 1,
// std::runtime_error when the series fails to converge within the term cap.
double gauss_2f1(double a, double b, double c, double z);

// Gamma function via a Lanczos approximation (g=7, 9 terms), with the
// reflection formula for x < 0.5. Throws std::domain_error at the poles
// (non-positive integers).
double gamma_fn(double x);

// csc(x) = 1/sin(x). Throws std::domain_error within 1e-12 of a multiple
// of pi.
double cosecant(double x);

// Multiplicity representation of an integer partition: t[q-1] copies of
// part q, so sum(q * t[q-1]) == n.
struct PartitionMultiplicity {
    std::vector<int> t;
};

inline constexpr int kPartitionCap = 32;

// All partitions of n in multiplicity form, duplicate-free. n = 0 yields a
// single empty partition. Throws std::domain_error for n < 0 or n > cap.
std::vector<PartitionMultiplicity> integer_partitions(int n, int cap = kPartitionCap);

// n-th derivative of exp(g(v)) at a point, given g(v) and its first n
// derivatives there (Faa di Bruno specialised to the exponential):
//
//   d^n/dv^n exp(g) = exp(g) * sum over partitions of n of
//                     n! / (prod t_q! (q!)^t_q) * prod (g^(q))^t_q.
//
// g_derivs[q-1] holds g^(q); only the first n entries are read.
double exp_composite_derivative(std::span<const double> g_derivs, double g_value, int n);

// Same partition sum without the exp(g) prefactor (the complete Bell
// polynomial in the derivatives). Useful when the caller factors the
// exponential out of a larger sum.
double bell_polynomial(std::span<const double> g_derivs, int n);

}  // namespace cachenet::specfun
