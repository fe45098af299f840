#pragma once

// Both sides of the Alexandrov-Fenchel type inequalities on generated
// hypersurfaces and curvature samples.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horoflow/hypersurface.hpp"

namespace horoflow {

struct InequalityReport {
  std::string name;
  int n = 0;
  int k = -1;  // -1 when the inequality has no order parameter
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs, the inequality reads lhs >= rhs
  double relative_margin = 0.0;
  bool equality = false;
  /// the inequality collapses to an identity for these indices (Gauss-Bonnet
  /// endpoint, W_n constant, or W_1 >= W_1), so equality carries no information
  bool identity = false;
  std::string descriptor;
  double tolerance = 0.0;
  bool pass = true;
  /// false for exploratory inequalities that are reported without a verdict
  bool asserted = true;
  std::uint64_t seed = 0;
  std::size_t sample = 0;  // index within a sweep
  /// polar nodes of the grid the verdict was taken on (0 for the analytic path)
  int resolution = 0;
  bool rechecked = false;
};

constexpr double kAnalyticTol = 1e-9;
constexpr double kGridTolFactor = 5.0;
constexpr double kGridTolFloor = 1e-12;

/// Caches curvature integrals of a surface at its own resolution and at
/// successive doublings; tolerances come from the difference between levels.
class Evaluation {
 public:
  Evaluation(GraphHypersurface surface, std::string descriptor = {}, std::uint64_t seed = 0);

  const GraphHypersurface& surface() const { return levels_.front(); }
  bool exact() const { return surface().kind() == SurfaceKind::ExactSphere; }
  const std::string& descriptor() const { return descriptor_; }
  std::uint64_t seed() const { return seed_; }
  int dim() const { return surface().dim(); }
  /// level 0 is the input grid, level l has 2^l times the resolution.
  const SurfaceMeasures& measures(int level = 0);
  int resolution(int level) const;
  /// relative tolerance of the analytic path
  double analytic_tol() const { return analytic_tol_; }
  void set_analytic_tol(double tol) { analytic_tol_ = tol; }

 private:
  std::vector<GraphHypersurface> levels_;
  std::vector<std::optional<SurfaceMeasures>> cache_;
  std::string descriptor_;
  std::uint64_t seed_ = 0;
  double analytic_tol_ = kAnalyticTol;
};

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Sides of each inequality from curvature integrals; all read lhs >= rhs.
Sides thm_1_1_sides(const SurfaceMeasures& m, int k);
Sides thm_1_2_sides(const SurfaceMeasures& m, int k);
Sides thm_1_3_sides(const SurfaceMeasures& m, int k, QuermassRoute route = QuermassRoute::LemmaAimk);
Sides thm_6_1_sides(const SurfaceMeasures& m);
Sides eq_6_2_sides(const SurfaceMeasures& m);
Sides conjecture_sides(const SurfaceMeasures& m, int k);
Sides ai_sides(const SurfaceMeasures& m, int k);
Sides gs_sides(const SurfaceMeasures& m, int r, int s);
Sides gs2_sides(const SurfaceMeasures& m, int k);

// Theorem checks. Each requires a horospherically convex surface
// (ConeViolation otherwise) and valid indices (IndexOutOfRange).
InequalityReport check_thm_1_1(Evaluation& e, int k);
InequalityReport check_thm_1_2(Evaluation& e, int k);
InequalityReport check_thm_1_3(Evaluation& e, int k, QuermassRoute route = QuermassRoute::LemmaAimk);
InequalityReport check_thm_6_1(Evaluation& e);
InequalityReport check_eq_6_2(Evaluation& e);
/// The odd-order conjecture and the inequality that would imply it; both
/// unasserted. Requires 2k+2 <= n-1.
std::array<InequalityReport, 2> explore_conjecture(Evaluation& e, int k);
/// W_r > (n-r)/(n-s) W_s for r > s; strict.
InequalityReport check_gallego_solanes(Evaluation& e, int r, int s);
/// \int sigma_k > c C(n-1,k) |Sigma|; strict.
InequalityReport check_gallego_solanes_sigma(Evaluation& e, int k);
/// Pairwise agreement of the three quermass routes on W_{2k+1}.
std::vector<InequalityReport> check_quermass_routes(Evaluation& e);

/// Every asserted check valid for (n, k) on the surface, plus the conjecture
/// exploration when 2k+2 <= n-1.
std::vector<InequalityReport> run_theorem_checks(Evaluation& e, int k);

struct RoundConstants {
  int n = 0;
  int k = 0;
  double omega = 0.0;             // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
  double yamabe = 0.0;            // (n-1)(n-2) omega^{2/(n-1)}
  double sobolev_fk = 0.0;        // C(n-1,k)/2^k omega^{2k/(n-1)}
  double lk_constant = 0.0;       // (2k)! C(n-1,2k) omega^{2k/(n-1)}
  double yamabe_direct = 0.0;     // total scalar curvature over vol^{(n-3)/(n-1)}
  double sobolev_fk_direct = 0.0; // the same functional from sigma_k of the Schouten tensor
};

RoundConstants round_constants(int n, int k);

/// F_k of the round metric scaled by c^2, evaluated from its Schouten
/// tensor A = g/(2c^2) and volume c^{n-1} omega.
double sobolev_fk_scaled(int n, int k, double c);

// ---------------------------------------------------------------------------
// Sample generation

/// Deterministic 64-bit generator for sample streams (splitmix64).
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// uniform in [0, 1)
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive

 private:
  std::uint64_t state_;
};

/// Seed of sample `index` in a stream: independent of how samples are
/// distributed over threads.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

enum class GeneratorKind { ExactSphere, PerturbedSphere, RandomHConvex, RandomUnitSubconvex };

std::string to_string(GeneratorKind kind);

struct SampleSpec {
  GeneratorKind generator = GeneratorKind::PerturbedSphere;
  int n = 5;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  double radius_min = 0.5;
  double radius_max = 2.0;
  /// Highest Legendre / spherical-harmonic degree of a perturbation (from 2).
  int max_mode = 4;
  /// The amplitude is this fraction range of the h-convexity threshold.
  double fraction_min = 0.2;
  double fraction_max = 0.8;
  int polar_nodes = 64;
  /// Grid3 perturbations instead of axisymmetric ones (n = 3 only).
  bool full_grid = false;
  /// Principal curvature range for the random curvature generators.
  double kappa_max = 4.0;
};

struct SurfaceSample {
  GraphHypersurface surface;
  std::string descriptor;
  std::uint64_t seed = 0;
};

SurfaceSample generate_surface(const SampleSpec& spec, std::size_t index);

CurvatureVector generate_kappa(const SampleSpec& spec, int dim, std::size_t index);

struct SweepResult {
  std::vector<InequalityReport> reports;
  std::size_t samples = 0;
  std::size_t failures = 0;  // asserted reports with pass == false
};

/// Theorem checks on `spec.count` generated surfaces; reports are ordered by
/// sample index and then check order regardless of the thread count.
SweepResult sweep_surfaces(const SampleSpec& spec, int k);

// ---------------------------------------------------------------------------
// Pointwise symmetric-function sweeps

enum class SymCone { HConvex, UnitSubconvex };

struct SymcheckSpec {
  int n = 7;
  int k = 1;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  SymCone cone = SymCone::HConvex;
  bool exact = false;
  double kappa_max = 4.0;
  /// tolerance relative to the scale of each margin (float path)
  double rel_tol = 1e-12;
};

struct SymcheckStat {
  std::string name;
  std::size_t evaluated = 0;
  std::size_t failures = 0;
  std::size_t equalities = 0;
  double min_relative = 0.0;
  std::uint64_t worst_seed = 0;
};

struct SymcheckResult {
  std::vector<SymcheckStat> stats;
  std::size_t samples = 0;
  bool pass = true;
};

/// Key inequality and the lemma43 / lemma46 margins on h-convex samples, or the reversed
/// signs on unit-subconvex samples.
SymcheckResult run_symcheck(const SymcheckSpec& spec);

}  // namespace horoflow
