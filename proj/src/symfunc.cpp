#include "horoflow/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "horoflow/error.hpp"

namespace horoflow {
namespace {

template <class T>
constexpr bool kExact = std::is_same_v<T, Rational>;

template <class T>
T abs_value(const T& x) {
  if constexpr (kExact<T>) {
    return abs(x);
  } else {
    return std::fabs(x);
  }
}

template <class T>
bool is_finite(const T& x) {
  if constexpr (kExact<T>) {
    return true;
  } else {
    return std::isfinite(x);
  }
}

template <class T>
bool equality_flag(const T& value, const T& reference) {
  if constexpr (kExact<T>) {
    (void)reference;
    return sgn(value) == 0;
  } else {
    return std::fabs(value) < 1e-10 * (1.0 + std::fabs(reference));
  }
}

template <class T>
T sign_power(int k) {
  return (k % 2 == 0) ? T(1) : T(-1);
}

void check_k(bool ok, const std::string& what) { require(ok, ErrorCode::IndexOutOfRange, what); }

template <class T>
const T& divisor(const SymTable<T>& tbl, int j) {
  const T& d = tbl.p_at(j);
  if constexpr (kExact<T>) {
    require(sgn(d) != 0, ErrorCode::DivisionBySmall, "p_" + std::to_string(j) + " vanishes");
  } else {
    require(std::fabs(d) >= kDivisionFloor, ErrorCode::DivisionBySmall,
            "p_" + std::to_string(j) + " below division floor");
  }
  return d;
}

}  // namespace

template <class T>
BasicCurvatureVector<T>::BasicCurvatureVector(std::vector<T> entries) : entries_(std::move(entries)) {
  require(entries_.size() >= 2, ErrorCode::InvalidInput, "curvature vector needs n - 1 >= 2 entries");
  for (const T& x : entries_) require(is_finite(x), ErrorCode::InvalidInput, "non-finite curvature");
}

template <class T>
const T& SymTable<T>::p_at(int k) const {
  check_k(k >= 0 && k < n, "p index " + std::to_string(k) + " outside 0.." + std::to_string(n - 1));
  return p[static_cast<std::size_t>(k)];
}

template <class T>
const T& SymTable<T>::sigma_at(int k) const {
  check_k(k >= 0 && k < n, "sigma index " + std::to_string(k) + " outside 0.." + std::to_string(n - 1));
  return sigma[static_cast<std::size_t>(k)];
}

template <class T>
SymTable<T> build_sym_table(const BasicCurvatureVector<T>& kappa) {
  const int m = kappa.size();
  SymTable<T> tbl;
  tbl.n = m + 1;
  tbl.kappa.assign(kappa.entries().begin(), kappa.entries().end());
  // Coefficients of prod_i (1 + t kappa_i); same update order as the batch kernels.
  tbl.sigma.assign(static_cast<std::size_t>(m + 1), T(0));
  tbl.sigma[0] = T(1);
  for (int i = 0; i < m; ++i) {
    const T& x = tbl.kappa[static_cast<std::size_t>(i)];
    for (int j = i + 1; j >= 1; --j) {
      const T prod = x * tbl.sigma[static_cast<std::size_t>(j - 1)];
      tbl.sigma[static_cast<std::size_t>(j)] = tbl.sigma[static_cast<std::size_t>(j)] + prod;
    }
  }
  tbl.p.resize(tbl.sigma.size());
  for (int j = 0; j <= m; ++j) {
    if constexpr (kExact<T>) {
      tbl.p[static_cast<std::size_t>(j)] = tbl.sigma[static_cast<std::size_t>(j)] / Rational(binomial(m, j));
      tbl.p[static_cast<std::size_t>(j)].canonicalize();
    } else {
      tbl.p[static_cast<std::size_t>(j)] = tbl.sigma[static_cast<std::size_t>(j)] / binomial_d(m, j);
    }
  }
  return tbl;
}

SymTable<double> sym_table_from_sigma(std::vector<double> kappa, std::vector<double> sigma) {
  const int m = static_cast<int>(kappa.size());
  require(sigma.size() == kappa.size() + 1, ErrorCode::InvalidInput, "sigma table size mismatch");
  SymTable<double> tbl;
  tbl.n = m + 1;
  tbl.kappa = std::move(kappa);
  tbl.sigma = std::move(sigma);
  tbl.p.resize(tbl.sigma.size());
  for (int j = 0; j <= m; ++j) tbl.p[static_cast<std::size_t>(j)] = tbl.sigma[static_cast<std::size_t>(j)] / binomial_d(m, j);
  return tbl;
}

namespace {

template <class T>
ConeMembership membership_impl(const BasicCurvatureVector<T>& kappa, double tol) {
  const SymTable<T> tbl = build_sym_table(kappa);
  ConeMembership out;
  out.tol = tol;
  for (int j = 1; j < tbl.n; ++j) {
    if (!(tbl.sigma[static_cast<std::size_t>(j)] > 0)) break;
    out.gamma_plus_up_to = j;
  }
  bool hconvex = true;
  bool subconvex = true;
  for (const T& x : kappa.entries()) {
    if constexpr (kExact<T>) {
      hconvex = hconvex && x >= 1;
      subconvex = subconvex && x > 0 && x <= 1;
    } else {
      hconvex = hconvex && x >= 1.0 - tol;
      subconvex = subconvex && x > 0.0 && x <= 1.0 + tol;
    }
  }
  out.horospherically_convex = hconvex;
  out.unit_subconvex = subconvex;
  return out;
}

}  // namespace

ConeMembership cone_membership(const CurvatureVector& kappa, double tol) { return membership_impl(kappa, tol); }

ConeMembership cone_membership(const RationalCurvatureVector& kappa) { return membership_impl(kappa, 0.0); }

std::string to_string(ConeDomain domain) {
  switch (domain) {
    case ConeDomain::HConvex:
      return "hconvex";
    case ConeDomain::NonnegativeSectional:
      return "sectional";
    case ConeDomain::UnitSubconvex:
      return "subconvex";
    case ConeDomain::Unchecked:
      return "unchecked";
  }
  return "unknown";
}

template <class T>
void require_domain(const SymTable<T>& tbl, ConeDomain domain, double tol) {
  if (domain == ConeDomain::Unchecked) return;
  std::vector<T> sorted = tbl.kappa;
  std::sort(sorted.begin(), sorted.end());
  const T& lo = sorted[0];
  const T& hi = sorted.back();
  T slack(0);
  if constexpr (!kExact<T>) slack = tol;
  bool ok = true;
  switch (domain) {
    case ConeDomain::HConvex:
      ok = lo >= T(1) - slack;
      break;
    case ConeDomain::NonnegativeSectional:
      ok = lo > 0 && lo * sorted[1] >= T(1) - slack;
      break;
    case ConeDomain::UnitSubconvex:
      ok = lo > 0 && hi <= T(1) + slack;
      break;
    case ConeDomain::Unchecked:
      break;
  }
  require(ok, ErrorCode::ConeViolation, "curvatures outside the " + to_string(domain) + " domain");
}

template <class T>
T tilde_L(const SymTable<T>& tbl, int k) {
  check_k(k >= 0 && 2 * k <= tbl.n - 1, "tilde_L needs 0 <= 2k <= n-1");
  T acc(0);
  for (int i = 0; i <= k; ++i) acc += sign_power<T>(i) * T(binomial_d(k, i)) * tbl.p_at(2 * k - 2 * i);
  return acc;
}

template <class T>
T tilde_N(const SymTable<T>& tbl, int k) {
  check_k(k >= 0 && 2 * k + 1 <= tbl.n - 1, "tilde_N needs 0 <= 2k+1 <= n-1");
  T acc(0);
  for (int i = 0; i <= k; ++i) acc += sign_power<T>(i) * T(binomial_d(k, i)) * tbl.p_at(2 * k - 2 * i + 1);
  return acc;
}

namespace {

// Sum of |C(k,i) p_j| over the entries of L~_k (odd = false) or N~_k.
template <class T>
T alternating_scale(const SymTable<T>& tbl, int k, bool odd) {
  T acc(0);
  for (int i = 0; i <= k; ++i) acc += T(binomial_d(k, i)) * abs_value<T>(tbl.p_at(2 * k - 2 * i + (odd ? 1 : 0)));
  return acc;
}

template <class T>
T max_of(const T& a, const T& b) {
  return a < b ? b : a;
}

}  // namespace

template <class T>
T Lk_from_table(const SymTable<T>& tbl, int k) {
  const T lt = tilde_L(tbl, k);
  return T(factorial_d(2 * k) * binomial_d(tbl.n - 1, 2 * k)) * lt;
}

template <class T>
std::pair<Margin<T>, Margin<T>> newton_maclaurin_margins(const SymTable<T>& tbl, int k) {
  check_k(k >= 1 && k <= tbl.n - 2, "Newton-MacLaurin margins need 1 <= k <= n-2");
  for (int j = 1; j <= k; ++j) {
    require(tbl.sigma_at(j) > 0, ErrorCode::ConeViolation, "kappa not in Gamma_" + std::to_string(k) + "^+");
  }
  const T& pk = tbl.p_at(k);
  const T& pkm = tbl.p_at(k - 1);
  const T& pkp = tbl.p_at(k + 1);
  const T& p1 = tbl.p_at(1);
  Margin<T> m1;
  m1.value = pk * pk - pkm * pkp;
  m1.scale = max_of<T>(pk * pk, abs_value<T>(pkm * pkp));
  m1.equality = equality_flag(m1.value, T(pk * pk));
  Margin<T> m2;
  m2.value = p1 * pkm - pk;
  m2.scale = max_of<T>(abs_value<T>(p1 * pkm), abs_value<T>(pk));
  m2.equality = equality_flag(m2.value, pk);
  return {m1, m2};
}

template <class T>
Margin<T> key_inequality_margin(const SymTable<T>& tbl, int k, ConeDomain domain, double tol) {
  check_k(k >= 1 && 2 * k + 1 <= tbl.n - 1, "key inequality needs 1 <= k, 2k+1 <= n-1");
  require_domain(tbl, domain, tol);
  const T& den = divisor(tbl, 2 * k);
  const T ratio = tbl.p_at(2 * k - 1) / den;
  const T lt = tilde_L(tbl, k);
  Margin<T> m;
  m.value = lt - ratio * tilde_N(tbl, k);
  m.scale = max_of<T>(alternating_scale(tbl, k, false), abs_value<T>(ratio) * alternating_scale(tbl, k, true));
  m.equality = equality_flag(m.value, lt);
  return m;
}

template <class T>
Margin<T> lemma43_margin(const SymTable<T>& tbl, int k, ConeDomain domain, double tol) {
  check_k(k >= 1 && 2 * k + 1 <= tbl.n - 1, "lemma43 margin needs 1 <= k, 2k+1 <= n-1");
  require_domain(tbl, domain, tol);
  const T lt = tilde_L(tbl, k);
  const T& p1 = tbl.p_at(1);
  Margin<T> m;
  m.value = p1 * lt - tilde_N(tbl, k);
  m.scale = max_of<T>(abs_value<T>(p1) * alternating_scale(tbl, k, false), alternating_scale(tbl, k, true));
  m.equality = equality_flag(m.value, lt);
  return m;
}

template <class T>
Margin<T> lemma46_margin(const SymTable<T>& tbl, int k, ConeDomain domain, double tol) {
  check_k(k >= 1 && 2 * k + 1 <= tbl.n - 1, "lemma46 margin needs 1 <= k, 2k+1 <= n-1");
  require_domain(tbl, domain, tol);
  const T lt = tilde_L(tbl, k);
  const T& a = tbl.p_at(2 * k + 1);
  const T& b = tbl.p_at(2 * k);
  Margin<T> m;
  m.value = a * lt - b * tilde_N(tbl, k);
  m.scale = max_of<T>(abs_value<T>(a) * alternating_scale(tbl, k, false), abs_value<T>(b) * alternating_scale(tbl, k, true));
  m.equality = equality_flag(m.value, lt);
  return m;
}

template <class T>
ReversedSigns<T> reversed_cone_signs(const SymTable<T>& tbl, int k, double tol) {
  check_k(k >= 1 && 2 * k + 1 <= tbl.n - 1, "reversed cone signs need 1 <= k, 2k+1 <= n-1");
  require_domain(tbl, ConeDomain::UnitSubconvex, tol);
  const T sign = sign_power<T>(k);
  const T lt = tilde_L(tbl, k);
  const T nt = tilde_N(tbl, k);
  ReversedSigns<T> out;
  out.s1 = sign * (tbl.p_at(1) * lt - nt);
  out.s2 = sign * nt;
  out.s3 = sign * lt;
  return out;
}

template <class T>
ChainTerms<T> chain_terms(const SymTable<T>& tbl, int k) {
  check_k(k >= 1 && 2 * k + 1 <= tbl.n - 1, "chain terms need 1 <= k, 2k+1 <= n-1");
  const T nt = tilde_N(tbl, k);
  ChainTerms<T> out;
  out.newton_side = tbl.p_at(2 * k - 1) / divisor(tbl, 2 * k) * nt;
  out.lemma46_side = tbl.p_at(2 * k) / divisor(tbl, 2 * k + 1) * nt;
  out.tilde_l = tilde_L(tbl, k);
  return out;
}

#define HOROFLOW_INSTANTIATE(T)                                                                           \
  template class BasicCurvatureVector<T>;                                                                 \
  template struct SymTable<T>;                                                                            \
  template SymTable<T> build_sym_table(const BasicCurvatureVector<T>&);                                   \
  template void require_domain(const SymTable<T>&, ConeDomain, double);                                   \
  template T tilde_L(const SymTable<T>&, int);                                                            \
  template T tilde_N(const SymTable<T>&, int);                                                            \
  template T Lk_from_table(const SymTable<T>&, int);                                                      \
  template std::pair<Margin<T>, Margin<T>> newton_maclaurin_margins(const SymTable<T>&, int);             \
  template Margin<T> key_inequality_margin(const SymTable<T>&, int, ConeDomain, double);                  \
  template Margin<T> lemma43_margin(const SymTable<T>&, int, ConeDomain, double);                         \
  template Margin<T> lemma46_margin(const SymTable<T>&, int, ConeDomain, double);                         \
  template ReversedSigns<T> reversed_cone_signs(const SymTable<T>&, int, double);                         \
  template ChainTerms<T> chain_terms(const SymTable<T>&, int);

HOROFLOW_INSTANTIATE(double)
HOROFLOW_INSTANTIATE(Rational)

#undef HOROFLOW_INSTANTIATE

}  // namespace horoflow
