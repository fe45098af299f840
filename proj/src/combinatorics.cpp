#include "horoflow/combinatorics.hpp"

#include <cmath>
#include <numbers>

#include "horoflow/error.hpp"

namespace horoflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
      return "InvalidInput";
    case ErrorCode::ConeViolation:
      return "ConeViolation";
    case ErrorCode::DivisionBySmall:
      return "DivisionBySmall";
    case ErrorCode::IndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::DimensionTooLarge:
      return "DimensionTooLarge";
    case ErrorCode::PoleSingularity:
      return "PoleSingularity";
    case ErrorCode::StepRejected:
      return "StepRejected";
    case ErrorCode::GraphDegenerate:
      return "GraphDegenerate";
    case ErrorCode::Config:
      return "Config";
    case ErrorCode::Io:
      return "Io";
  }
  return "Unknown";
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

double binomial_d(int n, int k) { return static_cast<double>(binomial(n, k)); }

std::int64_t factorial(int n) {
  require(n >= 0 && n <= 20, ErrorCode::IndexOutOfRange, "factorial argument out of range");
  std::int64_t result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

double factorial_d(int n) { return static_cast<double>(factorial(n)); }

double double_factorial(int n) {
  double result = 1.0;
  for (int i = n; i > 1; i -= 2) result *= i;
  return result;
}

std::int64_t falling_ratio(int n, int m) {
  require(0 <= m && m <= n, ErrorCode::IndexOutOfRange, "falling_ratio needs 0 <= m <= n");
  std::int64_t result = 1;
  for (int i = m + 1; i <= n; ++i) result *= i;
  return result;
}

template <class T>
T sphere_area(int dim) {
  const T half = T(0.5) * (dim + 1);
  return T(2) * std::pow(std::numbers::pi_v<T>, half) / std::tgamma(half);
}

template <class T>
T sinh_power_integral(int m, T r) {
  // The reduction formula cancels badly for small radii; there the integrand
  // is nearly a monomial and 8-point Gauss-Legendre is exact to rounding.
  if (r < T(0.25)) {
    static constexpr long double nodes[8] = {-0.960289856497536231684L, -0.796666477413626739592L,
                                             -0.525532409916328985818L, -0.183434642495649804939L,
                                             0.183434642495649804939L,  0.525532409916328985818L,
                                             0.796666477413626739592L,  0.960289856497536231684L};
    static constexpr long double weights[8] = {0.101228536290376259153L, 0.222381034453374470544L,
                                               0.313706645877887287338L, 0.362683783378361982965L,
                                               0.362683783378361982965L, 0.313706645877887287338L,
                                               0.222381034453374470544L, 0.101228536290376259153L};
    T acc = 0;
    for (int i = 0; i < 8; ++i) {
      const T s = T(0.5) * r * (static_cast<T>(nodes[i]) + T(1));
      acc += static_cast<T>(weights[i]) * std::pow(std::sinh(s), m);
    }
    return T(0.5) * r * acc;
  }
  // I_m = sinh^{m-1}(r) cosh(r) / m - (m-1)/m I_{m-2}
  const T even = r;                  // I_0
  const T odd = std::cosh(r) - T(1);  // I_1
  if (m == 0) return even;
  if (m == 1) return odd;
  const T sh = std::sinh(r);
  const T ch = std::cosh(r);
  T prev = (m % 2 == 0) ? even : odd;
  for (int j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2) {
    prev = std::pow(sh, j - 1) * ch / T(j) - T(j - 1) / T(j) * prev;
  }
  return prev;
}

template double sphere_area<double>(int);
template long double sphere_area<long double>(int);
template double sinh_power_integral<double>(int, double);
template long double sinh_power_integral<long double>(int, long double);

}  // namespace horoflow
