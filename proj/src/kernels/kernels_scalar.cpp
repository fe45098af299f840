#include "horoflow/kernels/kernels.hpp"

#include <cmath>

namespace horoflow::kernels {
namespace {

void esf_batch_scalar(std::span<const double> kappa, std::size_t m, std::size_t count,
                      std::span<double> sigma) {
  for (std::size_t s = 0; s < count; ++s) {
    sigma[s] = 1.0;
    for (std::size_t j = 1; j <= m; ++j) sigma[j * count + s] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = kappa[i * count + s];
      for (std::size_t j = i + 1; j >= 1; --j) {
        const double prod = x * sigma[(j - 1) * count + s];
        sigma[j * count + s] = sigma[j * count + s] + prod;
      }
    }
  }
}

double dot_scalar(std::span<const double> w, std::span<const double> f) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double prod = w[i] * f[i];
    lane[i % 4] = lane[i % 4] + prod;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

std::size_t safe_ratio_scalar(std::span<const double> num, std::span<const double> den,
                              double eps, std::span<double> out) {
  std::size_t flagged = 0;
  for (std::size_t s = 0; s < num.size(); ++s) {
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

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, esf_batch_scalar, dot_scalar, safe_ratio_scalar};
  return table;
}

}  // namespace horoflow::kernels
