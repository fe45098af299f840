#pragma once

// Star-shaped hypersurfaces of H^n written as radial graphs r(theta) over the
// unit sphere around the origin, with metric dr^2 + sinh^2(r) g_round.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "horoflow/profile.hpp"
#include "horoflow/symfunc.hpp"

namespace horoflow {

enum class SurfaceKind { ExactSphere, Axisym, Grid3 };

std::string to_string(SurfaceKind kind);

class GraphHypersurface {
 public:
  static constexpr int kMinPolarNodes = 8;

  static GraphHypersurface exact_sphere(int n, double radius);
  /// Samples `profile` on the cell-centred polar grid u_i = (i + 1/2) pi / N.
  static GraphHypersurface axisym(int n, int polar_nodes, const RadialProfile& profile);
  static GraphHypersurface axisym_from_samples(int n, std::vector<double> radii);
  /// n = 3 latitude-longitude grid: theta cell-centred, phi_j = 2 pi j / M, M even.
  static GraphHypersurface grid3(int polar_nodes, int azimuth_nodes, const RadialProfile& profile);
  static GraphHypersurface grid3_from_samples(int polar_nodes, int azimuth_nodes, std::vector<double> radii);

  int dim() const { return n_; }
  SurfaceKind kind() const { return kind_; }
  int polar_nodes() const { return polar_; }
  int azimuth_nodes() const { return azimuth_; }
  /// 1 for ExactSphere.
  std::size_t node_count() const { return radii_.size(); }
  /// Grid3 samples are polar-major: r[i * M + j].
  std::span<const double> radii() const { return radii_; }
  const std::optional<RadialProfile>& profile() const { return profile_; }
  /// ExactSphere only.
  double sphere_radius() const;

  double polar_angle(int i) const;
  double azimuth_angle(int j) const;

  /// Same grid, new samples. For ExactSphere a single radius.
  GraphHypersurface with_radii(std::vector<double> radii) const;
  /// Resample on another grid: from the profile when one is attached, by
  /// trigonometric interpolation of the even/pole-reflected extension otherwise.
  GraphHypersurface resampled(int polar_nodes, int azimuth_nodes = 0) const;
  GraphHypersurface refined() const { return resampled(2 * polar_, 2 * azimuth_); }

  std::string describe() const;

 private:
  GraphHypersurface() = default;
  void validate() const;

  int n_ = 0;
  SurfaceKind kind_ = SurfaceKind::ExactSphere;
  int polar_ = 0;
  int azimuth_ = 0;
  std::vector<double> radii_;
  std::optional<RadialProfile> profile_;
};

struct FrameOptions {
  /// Reflect samples across the poles so centred stencils stay valid there.
  /// Without it, nodes whose stencil reaches past a pole raise PoleSingularity.
  bool parity_extension = true;
};

struct PointFrame {
  double lambda = 0.0;        // sinh r
  double lambda_prime = 0.0;  // cosh r
  double v = 1.0;             // sqrt(1 + |grad phi|^2)
  Eigen::VectorXd grad;       // grad phi in the round orthonormal frame
  Eigen::MatrixXd hessian;    // covariant Hessian of phi, same frame
  /// h_i^j from the graph formula in the round orthonormal frame. Not
  /// symmetric when grad phi != 0: the frame is not orthonormal for the
  /// induced metric.
  Eigen::MatrixXd weingarten;
  /// G^{1/2} h G^{-1/2} with G = I + grad grad^T: same spectrum, symmetric.
  Eigen::MatrixXd shape;
  double raw_asymmetry = 0.0;     // max |h - h^T| of `weingarten`
  double asymmetry_defect = 0.0;  // max |S - S^T| of `shape` before symmetrization
  std::vector<double> kappa;      // ascending
  double area_density = 0.0;      // lambda^{n-1} v
  double quadrature_weight = 0.0; // round-sphere measure carried by the node
};

PointFrame frame_at(const GraphHypersurface& surface, std::size_t node, FrameOptions options = {});

/// Principal curvatures and symmetric functions at every node.
struct CurvatureField {
  int n = 0;
  std::size_t nodes = 0;
  std::vector<double> kappa;   // kappa[i * nodes + s], ascending in i
  std::vector<double> sigma;   // sigma[j * nodes + s], j = 0..n-1
  std::vector<double> weight;  // round weight * area density; sums to the area
  std::vector<double> round_weight;
  std::vector<double> v;
  std::vector<double> lambda;
  double max_asymmetry = 0.0;

  int dim() const { return n - 1; }
  double kappa_at(int i, std::size_t s) const { return kappa[static_cast<std::size_t>(i) * nodes + s]; }
  double sigma_at(int j, std::size_t s) const { return sigma[static_cast<std::size_t>(j) * nodes + s]; }
  double p_at(int j, std::size_t s) const;
  std::span<const double> sigma_row(int j) const {
    return std::span<const double>(sigma).subspan(static_cast<std::size_t>(j) * nodes, nodes);
  }
  /// p_j at every node.
  std::vector<double> p_row(int j) const;
  std::vector<double> tilde_L_row(int k) const;
  std::vector<double> tilde_N_row(int k) const;
  double kappa_min() const;
  /// max over nodes and i of |kappa_i - 1|.
  double umbilicity_deficit() const;
  /// \int f dmu for a nodal field.
  double integrate(std::span<const double> f) const;
};

CurvatureField curvature_field(const GraphHypersurface& surface, FrameOptions options = {});

/// Every curvature integral the quermass routes and the checks consume.
struct SurfaceMeasures {
  int n = 0;
  bool exact = false;
  double radius = 0.0;  // exact spheres only
  double area = 0.0;
  double volume = 0.0;
  std::vector<double> sigma;    // \int sigma_j, j = 0..n-1
  std::vector<double> p;        // \int p_j
  std::vector<double> tilde_L;  // \int L~_k, 2k <= n-1
  std::vector<double> tilde_N;  // \int N~_k, 2k+1 <= n-1
  std::vector<double> Lk;       // \int L_k, 2k <= n-1
  double kappa_min = 0.0;
  double max_asymmetry = 0.0;
};

SurfaceMeasures measure(const GraphHypersurface& surface, FrameOptions options = {});
SurfaceMeasures measure(const GraphHypersurface& surface, const CurvatureField& field);

double area(const GraphHypersurface& surface);
double volume(const GraphHypersurface& surface);
double integrate_sigma(const GraphHypersurface& surface, int k);
double integrate_Lk(const GraphHypersurface& surface, int k);

enum class QuermassRoute { Recursion, LemmaAimk, LemmaSS };

std::string to_string(QuermassRoute route);

struct QuermassVector {
  QuermassRoute route = QuermassRoute::Recursion;
  std::vector<std::optional<double>> w;  // index r = 0..n

  /// Throws IndexOutOfRange when r is outside 0..n or not produced by the route.
  double at(int r) const;
};

/// Recursion yields W_0..W_n; the lemma routes yield the odd W_{2k+1}, 2k+1 <= n.
QuermassVector quermass(const SurfaceMeasures& m, QuermassRoute route);
QuermassVector quermass(const GraphHypersurface& surface, QuermassRoute route);

struct HConvexityReport {
  double kappa_min = 0.0;
  std::size_t argmin = 0;
  bool horospherically_convex = false;
  double tol = kDefaultConeTol;
};

HConvexityReport hconvexity_report(const GraphHypersurface& surface, double tol = kDefaultConeTol);

/// Largest eps in [0, upper] with kappa_min(rho + eps * shape) >= 1 + margin,
/// located by bisection to `abs_tol`. `shape` holds Legendre coefficients of
/// the perturbation direction.
double hconvex_amplitude_threshold(int n, double radius, std::span<const double> shape, int polar_nodes,
                                   double margin, double upper = 1.0, double abs_tol = 1e-10);

/// Same search over an arbitrary one-parameter family; members that fail to
/// construct count as not convex.
double hconvex_amplitude_threshold(const std::function<GraphHypersurface(double)>& family, double margin,
                                   double upper = 1.0, double abs_tol = 1e-10);

}  // namespace horoflow
