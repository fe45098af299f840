#pragma once

// Data-parallel inner loops. Every routine has a scalar reference
// implementation; vector variants must reproduce it bit for bit, which is why
// the project builds with -ffp-contract=off and the vector code issues the
// same multiply/add sequence per lane.

#include <cstddef>
#include <span>
#include <string_view>

namespace horoflow::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Elementary symmetric functions of `count` vectors of length m, stored
/// structure-of-arrays: kappa[i * count + s] is entry i of vector s.
/// Writes sigma[j * count + s] for j = 0..m.
using EsfBatchFn = void (*)(std::span<const double> kappa, std::size_t m, std::size_t count,
                            std::span<double> sigma);

/// sum_i w[i] * f[i], accumulated in four interleaved lanes
/// (lane i % 4) and combined as (l0 + l1) + (l2 + l3).
using DotFn = double (*)(std::span<const double> w, std::span<const double> f);

/// out[s] = num[s] / den[s] with out[s] = 0 where |den[s]| < eps (flag counted).
using RatioFn = std::size_t (*)(std::span<const double> num, std::span<const double> den,
                                double eps, std::span<double> out);

struct KernelTable {
  Isa isa;
  EsfBatchFn esf_batch;
  DotFn dot;
  RatioFn safe_ratio;
};

const KernelTable& scalar_table();

/// Null when the TU was not built or the CPU lacks the instructions.
const KernelTable* avx2_table();

/// Best supported table, overridable with HOROFLOW_SIMD=scalar.
const KernelTable& active();

namespace detail {
const KernelTable& avx2_table_unchecked();
}

}  // namespace horoflow::kernels
