#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "horoflow/error.hpp"
#include "horoflow/oracles.hpp"
#include "horoflow/symfunc.hpp"
#include "support.hpp"

using namespace horoflow;

namespace {

RationalCurvatureVector rv(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return RationalCurvatureVector(v);
}

SymTable<Rational> rtable(std::vector<Rational> v) { return build_sym_table(RationalCurvatureVector(std::move(v))); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("frozen example kappa = (1,1,2)") {
  const auto t = build_sym_table(rv({1, 1, 2}));
  CHECK(t.n == 4);
  CHECK(t.sigma_at(1) == 4);
  CHECK(t.sigma_at(2) == 5);
  CHECK(t.sigma_at(3) == 2);
  CHECK(t.p_at(1) == Rational(4, 3));
  CHECK(t.p_at(2) == Rational(5, 3));
  CHECK(t.p_at(3) == 2);
  CHECK(tilde_L(t, 1) == Rational(2, 3));
  CHECK(tilde_N(t, 1) == Rational(2, 3));
  CHECK(lemma43_margin(t, 1).value == Rational(2, 9));
  CHECK(perm_sum_oracle(rv({1, 1, 2}), 1, 3) == 4);
  CHECK(perm_sum_constant(4, 1, 3) * lemma43_margin(t, 1).value == 4);
}

TEST_CASE("frozen example L_1 of kappa = (2,2,2,2)") {
  const auto t = build_sym_table(rv({2, 2, 2, 2}));
  CHECK(Lk_from_table(t, 1) == 36);
  CHECK(Lk_gauss_oracle(rv({2, 2, 2, 2}), 1) == 36);
}

TEST_CASE("recurrence sigma_k equals the Kronecker-delta contraction, exactly") {
  testgen::Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = rng.integer(2, 6);
    const auto kappa = testgen::signed_rationals(rng, m);
    const auto t = rtable(kappa);
    // R diag(kappa) R^T with R a product of rational Givens rotations
    // ((3/5, 4/5) and (5/13, 12/13)) has the same sigma_k and a full
    // off-diagonal part for the delta contraction to work on.
    SquareMatrix<Rational> b = SquareMatrix<Rational>::diagonal(kappa);
    for (int p = 0; p + 1 < m; ++p) {
      const bool first = (p % 2 == 0);
      const Rational c = first ? Rational(3, 5) : Rational(5, 13);
      const Rational s = first ? Rational(4, 5) : Rational(12, 13);
      SquareMatrix<Rational> g = b;
      for (int j = 0; j < m; ++j) {  // rows p, p+1
        g(p, j) = c * b(p, j) - s * b(p + 1, j);
        g(p + 1, j) = s * b(p, j) + c * b(p + 1, j);
      }
      b = g;
      for (int i = 0; i < m; ++i) {  // columns p, p+1
        g(i, p) = c * b(i, p) - s * b(i, p + 1);
        g(i, p + 1) = s * b(i, p) + c * b(i, p + 1);
      }
      b = g;
    }
    for (int k = 0; k <= m; ++k) CHECK(sigma_k_delta_oracle(b, k) == t.sigma[k]);
  }
}

TEST_CASE("L_k from the table equals the Gauss-equation oracle, exactly") {
  testgen::Rng rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    const int m = rng.integer(2, 6);
    const auto kappa = testgen::signed_rationals(rng, m);
    const auto t = rtable(kappa);
    for (int k = 1; 2 * k <= m && k <= 3; ++k) CHECK(Lk_from_table(t, k) == Lk_gauss_oracle(RationalCurvatureVector(kappa), k));
  }
}

TEST_CASE("permutation sums equal their closed forms") {
  testgen::Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = rng.integer(3, 6);
    const auto kappa = testgen::signed_rationals(rng, m);
    const RationalCurvatureVector v(kappa);
    const auto t = rtable(kappa);
    const int n = m + 1;
    for (int k = 1; 2 * k + 1 <= m && k <= 2; ++k) {
      CHECK(perm_sum_oracle(v, k, 1) == perm_sum_constant(n, k, 1) * tilde_N(t, k));
      CHECK(perm_sum_oracle(v, k, 2) == perm_sum_constant(n, k, 2) * tilde_L(t, k));
      CHECK(perm_sum_oracle(v, k, 3) == perm_sum_constant(n, k, 3) * (t.p_at(1) * tilde_L(t, k) - tilde_N(t, k)));
    }
  }
}

// The literal sum over ordered (2k+1)-tuples of distinct indices counts each
// tuple once, so it carries an extra 1/(n-2-2k)! against the permutation sum.
TEST_CASE("tuple sums carry the 1/(n-2-2k)! factor") {
  testgen::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = rng.integer(4, 6);
    const auto kappa = testgen::signed_rationals(rng, m);
    const auto t = rtable(kappa);
    const int k = 1;
    Rational tuple_sum(0);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          if (a == b || b == c || a == c) continue;
          const Rational d = kappa[b] - kappa[c];
          tuple_sum += kappa[a] * d * d;
        }
    const Rational x = t.p_at(1) * tilde_L(t, k) - tilde_N(t, k);
    CHECK(tuple_sum * Rational(factorial(m - 1 - 2 * k)) == perm_sum_constant(m + 1, k, 3) * x);
    CHECK(perm_sum_oracle(RationalCurvatureVector(kappa), k, 3) == tuple_sum * Rational(factorial(m - 1 - 2 * k)));
  }
}

TEST_CASE("symmetric functions are invariant under permutations of kappa") {
  testgen::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto kappa = testgen::signed_rationals(rng, rng.integer(2, 8));
    const auto a = rtable(kappa);
    std::reverse(kappa.begin(), kappa.end());
    std::rotate(kappa.begin(), kappa.begin() + 1, kappa.end());
    const auto b = rtable(kappa);
    CHECK(a.sigma == b.sigma);
  }
}

TEST_CASE("Newton-MacLaurin margins are non-negative on h-convex data") {
  testgen::Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = rng.integer(2, 9);
    const auto t = rtable(testgen::hconvex_rationals(rng, m));
    for (int k = 1; k + 1 <= m; ++k) {
      auto [m1, m2] = newton_maclaurin_margins(t, k);
      CHECK(m1.value >= 0);
      CHECK(m2.value >= 0);
    }
  }
}

TEST_CASE("key inequality and both lemmas hold on h-convex data") {
  SUBCASE("exact") {
    testgen::Rng rng(19);
    for (int trial = 0; trial < 400; ++trial) {
      const int m = rng.integer(3, 8);
      const auto t = rtable(testgen::hconvex_rationals(rng, m));
      for (int k = 1; 2 * k + 1 <= m; ++k) {
        CHECK(key_inequality_margin(t, k).value >= 0);
        CHECK(lemma43_margin(t, k).value >= 0);
        CHECK(lemma46_margin(t, k).value >= 0);
      }
    }
  }
  SUBCASE("float, relative to the scale") {
    testgen::Rng rng(23);
    for (int trial = 0; trial < 2000; ++trial) {
      const int m = rng.integer(3, 11);
      const auto t = build_sym_table(CurvatureVector(testgen::hconvex_doubles(rng, m)));
      for (int k = 1; 2 * k + 1 <= m; ++k) {
        for (auto mg : {key_inequality_margin(t, k), lemma43_margin(t, k), lemma46_margin(t, k)})
          CHECK(mg.value >= -1e-12 * mg.scale);
      }
    }
  }
}

TEST_CASE("chain of the key-inequality proof is ordered") {
  testgen::Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = rng.integer(3, 8);
    const auto t = rtable(testgen::hconvex_rationals(rng, m));
    for (int k = 1; 2 * k + 1 <= m; ++k) {
      const auto c = chain_terms(t, k);
      CHECK(c.newton_side <= c.lemma46_side);
      CHECK(c.lemma46_side <= c.tilde_l);
    }
  }
}

TEST_CASE("reversed signs on the unit-subconvex cone") {
  testgen::Rng rng(37);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = rng.integer(3, 11);
    const auto t = build_sym_table(CurvatureVector(testgen::unit_subconvex_doubles(rng, m)));
    for (int k = 1; 2 * k + 1 <= m; ++k) {
      const auto s = reversed_cone_signs(t, k);
      const double scale = 1e-12 * (1.0 + std::fabs(s.s1) + std::fabs(s.s2) + std::fabs(s.s3));
      CHECK(s.s1 <= scale);
      CHECK(s.s2 >= -scale);
      CHECK(s.s3 >= -scale);
    }
  }
}

TEST_CASE("equality at isotropic kappa and at (1,...,1,c) for k >= 2") {
  for (int m : {3, 5, 7, 9}) {
    for (int k = 1; 2 * k + 1 <= m; ++k) {
      const auto iso = rtable(std::vector<Rational>(static_cast<std::size_t>(m), Rational(5, 2)));
      CHECK(key_inequality_margin(iso, k).value == 0);
      CHECK(key_inequality_margin(iso, k).equality);
      CHECK(lemma43_margin(iso, k).equality);
      CHECK(lemma46_margin(iso, k).equality);

      std::vector<Rational> edge(static_cast<std::size_t>(m), Rational(1));
      edge.back() = Rational(7, 2);
      const auto e = rtable(edge);
      if (k >= 2) {
        CHECK(key_inequality_margin(e, k).value == 0);
        CHECK(key_inequality_margin(e, k).equality);
      } else {
        CHECK(key_inequality_margin(e, k).value > 0);
        CHECK_FALSE(key_inequality_margin(e, k).equality);
      }
    }
  }
}

TEST_CASE("float equality flags at isotropic kappa") {
  const auto t = build_sym_table(CurvatureVector(std::vector<double>(6, 1.7)));
  CHECK(key_inequality_margin(t, 2).equality);
  CHECK(lemma43_margin(t, 1).equality);
}

TEST_CASE("cone membership") {
  const auto h = cone_membership(CurvatureVector({1.0, 1.5, 3.0}));
  CHECK(h.horospherically_convex);
  CHECK_FALSE(h.unit_subconvex);
  CHECK(h.gamma_plus_up_to == 3);
  CHECK(cone_membership(CurvatureVector({1.0 - 1e-12, 2.0})).horospherically_convex);
  CHECK_FALSE(cone_membership(CurvatureVector({0.9, 2.0})).horospherically_convex);
  CHECK(cone_membership(CurvatureVector({0.5, 1.0})).unit_subconvex);
  CHECK(cone_membership(CurvatureVector({2.0, -0.5})).gamma_plus_up_to == 1);
  CHECK_FALSE(cone_membership(RationalCurvatureVector({Rational(999, 1000), Rational(2)})).horospherically_convex);
}

TEST_CASE("errors") {
  CHECK(code_of([] { CurvatureVector({1.0}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { CurvatureVector({1.0, NAN}); }) == ErrorCode::InvalidInput);
  const auto t = build_sym_table(CurvatureVector({1.0, 2.0, 3.0, 4.0}));
  CHECK(code_of([&] { t.p_at(5); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { key_inequality_margin(t, 2); }) == ErrorCode::IndexOutOfRange);
  const auto low = build_sym_table(CurvatureVector({0.5, 2.0, 3.0, 4.0}));
  CHECK(code_of([&] { key_inequality_margin(low, 1); }) == ErrorCode::ConeViolation);
  CHECK(code_of([&] { Lk_gauss_oracle(RationalCurvatureVector(std::vector<Rational>(9, Rational(1))), 1); }) ==
        ErrorCode::DimensionTooLarge);
}
