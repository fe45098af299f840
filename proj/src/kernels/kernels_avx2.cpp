#include "horoflow/kernels/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace horoflow::kernels {
namespace {

void esf_batch_avx2(std::span<const double> kappa, std::size_t m, std::size_t count,
                    std::span<double> sigma) {
  const double* kp = kappa.data();
  double* sp = sigma.data();
  const std::size_t vec_end = count - count % 4;
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();

  for (std::size_t s = 0; s < vec_end; s += 4) {
    _mm256_storeu_pd(sp + s, one);
    for (std::size_t j = 1; j <= m; ++j) _mm256_storeu_pd(sp + j * count + s, zero);
    for (std::size_t i = 0; i < m; ++i) {
      const __m256d x = _mm256_loadu_pd(kp + i * count + s);
      for (std::size_t j = i + 1; j >= 1; --j) {
        const __m256d lower = _mm256_loadu_pd(sp + (j - 1) * count + s);
        const __m256d upper = _mm256_loadu_pd(sp + j * count + s);
        const __m256d prod = _mm256_mul_pd(x, lower);
        _mm256_storeu_pd(sp + j * count + s, _mm256_add_pd(upper, prod));
      }
    }
  }
  // Remainder lanes take the scalar path, same operation order.
  for (std::size_t s = vec_end; s < count; ++s) {
    sp[s] = 1.0;
    for (std::size_t j = 1; j <= m; ++j) sp[j * count + s] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = kp[i * count + s];
      for (std::size_t j = i + 1; j >= 1; --j) {
        const double prod = x * sp[(j - 1) * count + s];
        sp[j * count + s] = sp[j * count + s] + prod;
      }
    }
  }
}

double dot_avx2(std::span<const double> w, std::span<const double> f) {
  const std::size_t n = w.size();
  const std::size_t vec_end = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < vec_end; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(f.data() + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = vec_end; i < n; ++i) {
    const double prod = w[i] * f[i];
    lane[i % 4] = lane[i % 4] + prod;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

std::size_t safe_ratio_avx2(std::span<const double> num, std::span<const double> den, double eps,
                            std::span<double> out) {
  const std::size_t n = num.size();
  const std::size_t vec_end = n - n % 4;
  const __m256d eps_v = _mm256_set1_pd(eps);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t flagged = 0;
  for (std::size_t s = 0; s < vec_end; s += 4) {
    const __m256d d = _mm256_loadu_pd(den.data() + s);
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(num.data() + s), d);
    const __m256d small = _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, d), eps_v, _CMP_LT_OQ);
    flagged += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(small)));
    _mm256_storeu_pd(out.data() + s, _mm256_blendv_pd(q, zero, small));
  }
  for (std::size_t s = vec_end; s < n; ++s) {
    if (std::fabs(den[s]) < eps) {
      out[s] = 0.0;
      ++flagged;
    } else {
      out[s] = num[s] / den[s];
    }
  }
  return flagged;
}

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{Isa::Avx2, esf_batch_avx2, dot_avx2, safe_ratio_avx2};
  return table;
}
}  // namespace detail

}  // namespace horoflow::kernels
