#pragma once

// Hand-rolled generators for property tests. Independent of the library's
// own sample streams so a generator bug cannot hide a library bug.

#include <cstdint>
#include <vector>

#include "horoflow/combinatorics.hpp"

namespace testgen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull) {}

  std::uint64_t next() {
    // xorshift64*
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1Dull;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t s_;
};

/// kappa_i = 1 + a/b with a in [0, 3b], occasionally exactly 1.
inline std::vector<horoflow::Rational> hconvex_rationals(Rng& rng, int m) {
  std::vector<horoflow::Rational> out;
  for (int i = 0; i < m; ++i) {
    const int b = rng.integer(1, 9);
    horoflow::Rational r(rng.integer(0, 4) == 0 ? 0 : rng.integer(0, 3 * b), b);
    r.canonicalize();
    out.push_back(r + 1);
  }
  return out;
}

/// Any signs, small numerators and denominators.
inline std::vector<horoflow::Rational> signed_rationals(Rng& rng, int m) {
  std::vector<horoflow::Rational> out;
  for (int i = 0; i < m; ++i) {
    horoflow::Rational r(rng.integer(-9, 9), rng.integer(1, 7));
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

inline std::vector<double> hconvex_doubles(Rng& rng, int m, double kmax = 4.0) {
  std::vector<double> out;
  for (int i = 0; i < m; ++i) out.push_back(rng.integer(0, 9) == 0 ? 1.0 : rng.uniform(1.0, kmax));
  return out;
}

inline std::vector<double> unit_subconvex_doubles(Rng& rng, int m) {
  std::vector<double> out;
  for (int i = 0; i < m; ++i) out.push_back(rng.integer(0, 9) == 0 ? 1.0 : rng.uniform(0.02, 1.0));
  return out;
}

}  // namespace testgen
