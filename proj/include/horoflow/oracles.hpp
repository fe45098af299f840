#pragma once

// Brute-force exact evaluations that share no code path with the
// recurrence-based symmetric-function algebra. They enumerate index tuples
// and permutations literally, so their cost is factorial; the dimension
// guards are hard errors.

#include <span>
#include <vector>

#include "horoflow/symfunc.hpp"

namespace horoflow {

template <class T>
struct SquareMatrix {
  int dim = 0;
  std::vector<T> data;  // row-major

  explicit SquareMatrix(int d) : dim(d), data(static_cast<std::size_t>(d * d), T(0)) {}
  T& operator()(int i, int j) { return data[static_cast<std::size_t>(i * dim + j)]; }
  const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i * dim + j)]; }

  static SquareMatrix diagonal(std::span<const T> entries) {
    SquareMatrix m(static_cast<int>(entries.size()));
    for (int i = 0; i < m.dim; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return m;
  }
};

constexpr int kMaxDeltaOracleDim = 9;
constexpr int kMaxGaussOracleDim = 8;
constexpr int kMaxGaussOracleK = 3;
constexpr int kMaxPermSumDim = 9;
constexpr int kMaxPermSumK = 3;
constexpr std::size_t kMaxDeltaIndices = 16;

/// Generalized Kronecker delta: det[delta^{lower_b}_{upper_a}].
int generalized_kronecker_delta(std::span<const int> upper, std::span<const int> lower);

/// sigma_k(B) = (1/k!) delta^{I}_{J} b_{i_1}^{j_1} ... b_{i_k}^{j_k}, summed literally.
/// Throws DimensionTooLarge when dim > 9.
template <class T>
T sigma_k_delta_oracle(const SquareMatrix<T>& b, int k);

/// L_k of the induced metric from the Gauss equation with h = diag(kappa),
/// contracted against the generalized Kronecker delta.
/// Throws DimensionTooLarge when n - 1 > 8 or k > 3.
Rational Lk_gauss_oracle(const RationalCurvatureVector& kappa, int k);

/// Sum over all permutations t of {0..n-2} of a term in the leading 2k+1
/// entries, so each ordered (2k+1)-tuple of distinct indices appears
/// (n-2-2k)! times:
///   variant 1: k_{i1} (k_{i2}k_{i3}-1) ... (k_{i2k}k_{i2k+1}-1)
///   variant 2: (k_{i2}k_{i3}-1) ... (k_{i2k}k_{i2k+1}-1)
///   variant 3: k_{i1} (k_{i2}k_{i3}-1) ... (k_{i2k-2}k_{i2k-1}-1) (k_{i2k}-k_{i2k+1})^2
Rational perm_sum_oracle(const RationalCurvatureVector& kappa, int k, int variant);

/// c with perm_sum(variant) = c * X, where X is N~_k, L~_k, p_1 L~_k - N~_k
/// for variants 1, 2, 3. Variants 1 and 2 share c = (n-1)!; variant 3 has
/// c = (n-1) (n-1)! / k.
Rational perm_sum_constant(int n, int k, int variant);

}  // namespace horoflow
