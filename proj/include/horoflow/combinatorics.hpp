#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace horoflow {

using Rational = mpq_class;

/// C(n, k); zero outside 0 <= k <= n.
std::int64_t binomial(int n, int k);
double binomial_d(int n, int k);

std::int64_t factorial(int n);
double factorial_d(int n);

/// n!! with the conventions 0!! = (-1)!! = 1.
double double_factorial(int n);

/// n! / m! for m <= n (falling product).
std::int64_t falling_ratio(int n, int m);

/// Area of the unit round sphere S^{dim} embedded in R^{dim+1}.
/// Instantiated for double and long double.
template <class T = double>
T sphere_area(int dim);

/// \int_0^r sinh^m(s) ds. Instantiated for double and long double.
template <class T>
T sinh_power_integral(int m, T r);

}  // namespace horoflow
