#include "horoflow/oracles.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <type_traits>
#include <vector>

#include "horoflow/error.hpp"

namespace horoflow {
namespace {

template <class T>
bool is_zero(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return sgn(x) == 0;
  } else {
    return x == 0;
  }
}

// Calls visit(tuple) for every ordered tuple of `len` distinct values in [0, dim).
template <class Visit>
void for_each_distinct_tuple(int dim, int len, Visit&& visit) {
  std::vector<int> tuple(static_cast<std::size_t>(len));
  auto rec = [&](auto&& self, int pos, unsigned used) -> void {
    if (pos == len) {
      visit(std::span<const int>(tuple));
      return;
    }
    for (int v = 0; v < dim; ++v) {
      if (used & (1u << v)) continue;
      tuple[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, used | (1u << v));
    }
  };
  rec(rec, 0, 0u);
}

}  // namespace

int generalized_kronecker_delta(std::span<const int> upper, std::span<const int> lower) {
  require(upper.size() == lower.size(), ErrorCode::InvalidInput, "delta index lists differ in length");
  const std::size_t r = upper.size();
  require(r <= kMaxDeltaIndices, ErrorCode::DimensionTooLarge, "delta limited to 16 index pairs");
  // Row a of the 0/1 matrix has ones where lower[b] == upper[a]. The determinant
  // is the sign of the permutation when every row and column has exactly one 1.
  std::array<int, kMaxDeltaIndices> perm;
  std::array<bool, kMaxDeltaIndices> column_hit{};
  perm.fill(-1);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      if (lower[b] != upper[a]) continue;
      if (perm[a] != -1 || column_hit[b]) return 0;
      perm[a] = static_cast<int>(b);
      column_hit[b] = true;
    }
    if (perm[a] == -1) return 0;
  }
  int sign = 1;
  std::array<bool, kMaxDeltaIndices> seen{};
  for (std::size_t a = 0; a < r; ++a) {
    if (seen[a]) continue;
    std::size_t len = 0;
    for (std::size_t c = a; !seen[c]; c = static_cast<std::size_t>(perm[c])) {
      seen[c] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

template <class T>
T sigma_k_delta_oracle(const SquareMatrix<T>& b, int k) {
  const int dim = b.dim;
  require(dim <= kMaxDeltaOracleDim, ErrorCode::DimensionTooLarge,
          "delta oracle limited to n-1 <= " + std::to_string(kMaxDeltaOracleDim));
  require(k >= 0 && k <= dim, ErrorCode::IndexOutOfRange, "sigma_k oracle needs 0 <= k <= n-1");
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      require(b(i, j) == b(j, i), ErrorCode::InvalidInput, "delta oracle expects a symmetric matrix");
    }
  }
  if (k == 0) return T(1);

  T total(0);
  std::vector<int> lower(static_cast<std::size_t>(k));
  std::vector<bool> taken(static_cast<std::size_t>(k));
  for_each_distinct_tuple(dim, k, [&](std::span<const int> upper) {
    // lower runs over arrangements of the upper indices; other choices make
    // the delta vanish. Zero matrix entries prune the search.
    std::fill(taken.begin(), taken.end(), false);
    auto rec = [&](auto&& self, int pos, const T& partial) -> void {
      if (pos == k) {
        const int delta = generalized_kronecker_delta(upper, lower);
        if (delta != 0) total += T(delta) * partial;
        return;
      }
      const int row = upper[static_cast<std::size_t>(pos)];
      for (int slot = 0; slot < k; ++slot) {
        if (taken[static_cast<std::size_t>(slot)]) continue;
        const int col = upper[static_cast<std::size_t>(slot)];
        const T& entry = b(row, col);
        if (is_zero(entry)) continue;
        taken[static_cast<std::size_t>(slot)] = true;
        lower[static_cast<std::size_t>(pos)] = col;
        self(self, pos + 1, T(partial * entry));
        taken[static_cast<std::size_t>(slot)] = false;
      }
    };
    rec(rec, 0, T(1));
  });
  return total / T(factorial_d(k));
}

template double sigma_k_delta_oracle(const SquareMatrix<double>&, int);
template Rational sigma_k_delta_oracle(const SquareMatrix<Rational>&, int);

Rational Lk_gauss_oracle(const RationalCurvatureVector& kappa, int k) {
  const int dim = kappa.size();
  require(dim <= kMaxGaussOracleDim && k <= kMaxGaussOracleK, ErrorCode::DimensionTooLarge,
          "Gauss oracle limited to n-1 <= 8, k <= 3");
  require(k >= 0 && 2 * k <= dim, ErrorCode::IndexOutOfRange, "L_k oracle needs 0 <= 2k <= n-1");
  if (k == 0) return Rational(1);

  // Entries are scaled to integers over the common denominator D, so the
  // contraction runs on integer numerators: h = H / D and the Riemann tensor
  // carries denominator D^2.
  mpz_class denom(1);
  for (const auto& x : kappa.entries()) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), x.get_den_mpz_t());
  SquareMatrix<mpz_class> h(dim);
  for (int i = 0; i < dim; ++i) {
    const Rational scaled = kappa[i] * Rational(denom);
    h(i, i) = scaled.get_num();
  }
  const mpz_class d2 = denom * denom;
  auto kd = [](int a, int b) { return a == b ? 1 : 0; };
  // R_{ij}^{ab} = (h_i^a h_j^b - h_i^b h_j^a) - (d_i^a d_j^b - d_i^b d_j^a)
  const std::size_t d = static_cast<std::size_t>(dim);
  std::vector<mpz_class> riemann(d * d * d * d);
  std::vector<char> nonzero(riemann.size());
  auto idx = [d](int i, int j, int a, int b) {
    return ((static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)) * d + static_cast<std::size_t>(a)) * d +
           static_cast<std::size_t>(b);
  };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          mpz_class value = h(i, a) * h(j, b) - h(i, b) * h(j, a) - d2 * (kd(i, a) * kd(j, b) - kd(i, b) * kd(j, a));
          nonzero[idx(i, j, a, b)] = sgn(value) != 0;
          riemann[idx(i, j, a, b)] = std::move(value);
        }

  const int len = 2 * k;
  mpz_class total(0);
  std::vector<int> lower(static_cast<std::size_t>(len));
  // partial[p] is the product of the first p curvature factors
  std::vector<mpz_class> partial(static_cast<std::size_t>(k + 1));
  partial[0] = 1;
  for_each_distinct_tuple(dim, len, [&](std::span<const int> upper) {
    auto rec = [&](auto&& self, int pair, unsigned taken) -> void {
      if (pair == k) {
        const int delta = generalized_kronecker_delta(upper, lower);
        const mpz_class& value = partial[static_cast<std::size_t>(k)];
        if (delta > 0) {
          total += value;
        } else if (delta < 0) {
          total -= value;
        }
        return;
      }
      const int i = upper[static_cast<std::size_t>(2 * pair)];
      const int j = upper[static_cast<std::size_t>(2 * pair + 1)];
      for (int sa = 0; sa < len; ++sa) {
        if (taken & (1u << sa)) continue;
        for (int sb = 0; sb < len; ++sb) {
          if (sb == sa || (taken & (1u << sb))) continue;
          const int a = upper[static_cast<std::size_t>(sa)];
          const int b = upper[static_cast<std::size_t>(sb)];
          if (!nonzero[idx(i, j, a, b)]) continue;
          lower[static_cast<std::size_t>(2 * pair)] = a;
          lower[static_cast<std::size_t>(2 * pair + 1)] = b;
          mpz_mul(partial[static_cast<std::size_t>(pair + 1)].get_mpz_t(),
                  partial[static_cast<std::size_t>(pair)].get_mpz_t(), riemann[idx(i, j, a, b)].get_mpz_t());
          self(self, pair + 1, taken | (1u << sa) | (1u << sb));
        }
      }
    };
    rec(rec, 0, 0u);
  });
  mpz_class scale(1L << k);
  for (int p = 0; p < k; ++p) scale *= d2;
  Rational result(total, scale);
  result.canonicalize();
  return result;
}

Rational perm_sum_oracle(const RationalCurvatureVector& kappa, int k, int variant) {
  const int dim = kappa.size();
  require(dim <= kMaxPermSumDim && k <= kMaxPermSumK, ErrorCode::DimensionTooLarge,
          "permutation-sum oracle limited to n-1 <= 9, k <= 3");
  require(k >= 1 && 2 * k + 1 <= dim, ErrorCode::IndexOutOfRange, "permutation sum needs 1 <= k, 2k+1 <= n-1");
  require(variant >= 1 && variant <= 3, ErrorCode::InvalidInput, "variant must be 1, 2 or 3");

  auto x = [&](int i) -> const Rational& { return kappa[i]; };
  std::vector<int> perm(static_cast<std::size_t>(dim));
  std::iota(perm.begin(), perm.end(), 0);
  Rational total(0);
  do {
    const int* t = perm.data();
    Rational term(variant == 2 ? 1 : 0);
    if (variant != 2) term = x(t[0]);
    const int product_pairs = (variant == 3) ? k - 1 : k;
    for (int m = 0; m < product_pairs && sgn(term) != 0; ++m) term *= x(t[2 * m + 1]) * x(t[2 * m + 2]) - 1;
    if (variant == 3 && sgn(term) != 0) {
      const Rational diff = x(t[2 * k - 1]) - x(t[2 * k]);
      term *= diff * diff;
    }
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Rational perm_sum_constant(int n, int k, int variant) {
  const int dim = n - 1;
  require(k >= 1 && 2 * k + 1 <= dim, ErrorCode::IndexOutOfRange, "permutation sum needs 1 <= k, 2k+1 <= n-1");
  switch (variant) {
    case 1:
    case 2:
      return Rational(factorial(dim));
    case 3: {
      Rational c(dim * factorial(dim), k);
      c.canonicalize();
      return c;
    }
    default:
      fail(ErrorCode::InvalidInput, "variant must be 1, 2 or 3");
  }
}

}  // namespace horoflow
