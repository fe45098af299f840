#include <doctest.h>

#include <cstring>
#include <vector>

#include "horoflow/kernels/kernels.hpp"
#include "support.hpp"

using namespace horoflow;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// sigma_j by enumerating subsets.
double subset_esf(const std::vector<double>& x, int j) {
  const int m = static_cast<int>(x.size());
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != j) continue;
    double prod = 1.0;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) prod *= x[static_cast<std::size_t>(i)];
    sum += prod;
  }
  return sum;
}

}  // namespace

TEST_CASE("scalar esf matches subset enumeration") {
  testgen::Rng rng(11);
  for (int m = 1; m <= 9; ++m) {
    const std::size_t count = 5;
    std::vector<double> kappa(static_cast<std::size_t>(m) * count);
    for (auto& v : kappa) v = rng.uniform(-2.0, 3.0);
    std::vector<double> sigma(static_cast<std::size_t>(m + 1) * count);
    kernels::scalar_table().esf_batch(kappa, static_cast<std::size_t>(m), count, sigma);
    for (std::size_t s = 0; s < count; ++s) {
      std::vector<double> x;
      for (int i = 0; i < m; ++i) x.push_back(kappa[static_cast<std::size_t>(i) * count + s]);
      for (int j = 0; j <= m; ++j)
        CHECK(sigma[static_cast<std::size_t>(j) * count + s] == doctest::Approx(subset_esf(x, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("avx2 kernels reproduce the scalar kernels bit for bit") {
  const kernels::KernelTable* vec = kernels::avx2_table();
  if (!vec) {
    MESSAGE("AVX2 unavailable on this CPU; equivalence not exercised");
    return;
  }
  const auto& ref = kernels::scalar_table();
  testgen::Rng rng(29);

  SUBCASE("esf_batch, all tail lengths") {
    for (int m = 1; m <= 12; ++m) {
      for (std::size_t count : {1u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 67u}) {
        std::vector<double> kappa(static_cast<std::size_t>(m) * count);
        for (auto& v : kappa) v = rng.uniform(0.5, 4.0);
        std::vector<double> a(static_cast<std::size_t>(m + 1) * count), b(a.size());
        ref.esf_batch(kappa, static_cast<std::size_t>(m), count, a);
        vec->esf_batch(kappa, static_cast<std::size_t>(m), count, b);
        CHECK(same_bits(a, b));
      }
    }
  }
  SUBCASE("dot") {
    for (std::size_t len = 0; len <= 70; ++len) {
      std::vector<double> w(len), f(len);
      for (auto& v : w) v = rng.uniform(-1.0, 1.0);
      for (auto& v : f) v = rng.uniform(-1e3, 1e3);
      const double a = ref.dot(w, f);
      const double b = vec->dot(w, f);
      CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
  }
  SUBCASE("safe_ratio with flagged denominators") {
    for (std::size_t len : {1u, 4u, 9u, 31u}) {
      std::vector<double> num(len), den(len);
      for (std::size_t i = 0; i < len; ++i) {
        num[i] = rng.uniform(-5.0, 5.0);
        den[i] = (i % 3 == 0) ? 1e-14 : rng.uniform(-2.0, 2.0);
      }
      std::vector<double> a(len), b(len);
      const auto fa = ref.safe_ratio(num, den, 1e-12, a);
      const auto fb = vec->safe_ratio(num, den, 1e-12, b);
      CHECK(fa == fb);
      CHECK(same_bits(a, b));
    }
  }
}

TEST_CASE("active table honours the scalar override name") {
  const auto& t = kernels::active();
  CHECK((t.isa == kernels::Isa::Scalar || t.isa == kernels::Isa::Avx2));
  CHECK(kernels::to_string(kernels::Isa::Scalar) == "scalar");
}
