#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace horoflow {

/// Worker count: hardware concurrency capped by HOROFLOW_THREADS.
unsigned thread_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks;
/// the body must only write to slots owned by its index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sum of w[i] * f[i] with an evaluation order fixed by the input length
/// alone: fixed-size blocks reduced by the active kernel, then a pairwise tree.
double deterministic_dot(std::span<const double> w, std::span<const double> f);

/// Pairwise-tree sum, order depends only on the length.
double pairwise_sum(std::span<const double> values);

}  // namespace horoflow
