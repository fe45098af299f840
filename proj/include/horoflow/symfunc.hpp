#pragma once

// Elementary symmetric functions of principal-curvature vectors and the
// inequalities built from their normalized forms p_k = sigma_k / C(n-1, k).
//
// Everything is templated on the scalar: double for the flow and sweeps,
// Rational (GMP) for the exact checks. Only those two are instantiated.

#include <span>
#include <string>
#include <vector>

#include "horoflow/combinatorics.hpp"

namespace horoflow {

template <class T>
class BasicCurvatureVector {
 public:
  /// Throws InvalidInput unless there are at least two finite entries.
  explicit BasicCurvatureVector(std::vector<T> entries);

  std::span<const T> entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int ambient_dim() const { return size() + 1; }
  const T& operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<T> entries_;
};

using CurvatureVector = BasicCurvatureVector<double>;
using RationalCurvatureVector = BasicCurvatureVector<Rational>;

/// sigma_0..sigma_{n-1} and p_0..p_{n-1} of one curvature vector.
template <class T>
struct SymTable {
  int n = 0;  // ambient dimension; n - 1 curvatures
  std::vector<T> kappa;
  std::vector<T> sigma;
  std::vector<T> p;

  int dim() const { return n - 1; }
  /// Throws IndexOutOfRange outside 0..n-1.
  const T& p_at(int k) const;
  const T& sigma_at(int k) const;
};

template <class T>
SymTable<T> build_sym_table(const BasicCurvatureVector<T>& kappa);

/// Builds a table from sigma values that were computed elsewhere
/// (batched kernels). sigma must have n entries.
SymTable<double> sym_table_from_sigma(std::vector<double> kappa, std::vector<double> sigma);

struct ConeMembership {
  int gamma_plus_up_to = 0;
  bool horospherically_convex = false;
  bool unit_subconvex = false;
  double tol = 0.0;
};

ConeMembership cone_membership(const CurvatureVector& kappa, double tol = 1e-9);
/// Exact path; tol is zero.
ConeMembership cone_membership(const RationalCurvatureVector& kappa);

/// Domains on which the inequalities are asserted.
enum class ConeDomain {
  HConvex,               // kappa_i >= 1
  NonnegativeSectional,  // kappa_i kappa_j >= 1 for i != j
  UnitSubconvex,         // 0 < kappa_i <= 1
  Unchecked,
};

std::string to_string(ConeDomain domain);

constexpr double kDefaultConeTol = 1e-9;
constexpr double kDivisionFloor = 1e-12;

/// Throws ConeViolation when the curvatures leave the domain.
/// tol is ignored for Rational (exact membership).
template <class T>
void require_domain(const SymTable<T>& tbl, ConeDomain domain, double tol = kDefaultConeTol);

template <class T>
struct Margin {
  T value{};
  T scale{};  // magnitude of the terms that were combined
  bool equality = false;
};

template <class T>
T tilde_L(const SymTable<T>& tbl, int k);
template <class T>
T tilde_N(const SymTable<T>& tbl, int k);

/// Gauss-Bonnet curvature of the induced metric, (2k)! C(n-1, 2k) L~_k.
template <class T>
T Lk_from_table(const SymTable<T>& tbl, int k);

/// (p_k^2 - p_{k-1} p_{k+1}, p_1 p_{k-1} - p_k); needs kappa in Gamma_k^+.
template <class T>
std::pair<Margin<T>, Margin<T>> newton_maclaurin_margins(const SymTable<T>& tbl, int k);

/// L~_k - (p_{2k-1} / p_{2k}) N~_k, non-negative on the domain.
template <class T>
Margin<T> key_inequality_margin(const SymTable<T>& tbl, int k,
                                ConeDomain domain = ConeDomain::HConvex,
                                double tol = kDefaultConeTol);

/// p_1 L~_k - N~_k.
template <class T>
Margin<T> lemma43_margin(const SymTable<T>& tbl, int k, ConeDomain domain = ConeDomain::HConvex,
                         double tol = kDefaultConeTol);

/// p_{2k+1} L~_k - p_{2k} N~_k.
template <class T>
Margin<T> lemma46_margin(const SymTable<T>& tbl, int k, ConeDomain domain = ConeDomain::HConvex,
                         double tol = kDefaultConeTol);

template <class T>
struct ReversedSigns {
  T s1{};  // (-1)^k (p_1 L~_k - N~_k), expected <= 0
  T s2{};  // (-1)^k N~_k, expected >= 0
  T s3{};  // (-1)^k L~_k, expected >= 0
};

/// Sign report on 0 < kappa_i <= 1.
template <class T>
ReversedSigns<T> reversed_cone_signs(const SymTable<T>& tbl, int k, double tol = kDefaultConeTol);

/// The three quantities ordered by the key-inequality proof:
/// (p_{2k-1}/p_{2k}) N~_k <= (p_{2k}/p_{2k+1}) N~_k <= L~_k on h-convex data.
template <class T>
struct ChainTerms {
  T newton_side{};
  T lemma46_side{};
  T tilde_l{};
};

template <class T>
ChainTerms<T> chain_terms(const SymTable<T>& tbl, int k);

}  // namespace horoflow
