#include "horoflow/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "horoflow/combinatorics.hpp"
#include "horoflow/error.hpp"
#include "horoflow/kernels/kernels.hpp"
#include "horoflow/parallel.hpp"

namespace horoflow {
namespace {

constexpr double kPi = std::numbers::pi;

// Fourth-order centred stencils on offsets -2..2.
constexpr double kD1[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr double kD2[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::ExactSphere:
      return "sphere";
    case SurfaceKind::Axisym:
      return "axisym";
    case SurfaceKind::Grid3:
      return "grid3";
  }
  return "?";
}

std::string to_string(QuermassRoute route) {
  switch (route) {
    case QuermassRoute::Recursion:
      return "recursion";
    case QuermassRoute::LemmaAimk:
      return "lemma_aimk";
    case QuermassRoute::LemmaSS:
      return "lemma_ss";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// GraphHypersurface

void GraphHypersurface::validate() const {
  require(n_ >= 3, ErrorCode::InvalidInput, "ambient dimension must be at least 3");
  switch (kind_) {
    case SurfaceKind::ExactSphere:
      require(radii_.size() == 1, ErrorCode::InvalidInput, "exact sphere carries one radius");
      break;
    case SurfaceKind::Axisym:
      require(polar_ >= kMinPolarNodes, ErrorCode::InvalidInput,
              "axisymmetric grid needs at least " + std::to_string(kMinPolarNodes) + " polar nodes");
      require(radii_.size() == idx(polar_), ErrorCode::InvalidInput, "sample count does not match the polar grid");
      break;
    case SurfaceKind::Grid3:
      require(n_ == 3, ErrorCode::InvalidInput, "grid3 surfaces live in H^3 only");
      require(polar_ >= kMinPolarNodes, ErrorCode::InvalidInput,
              "grid3 needs at least " + std::to_string(kMinPolarNodes) + " polar nodes");
      require(azimuth_ >= 4 && azimuth_ % 2 == 0, ErrorCode::InvalidInput,
              "grid3 needs an even azimuth count >= 4");
      require(radii_.size() == idx(polar_) * idx(azimuth_), ErrorCode::InvalidInput,
              "sample count does not match the grid");
      break;
  }
  for (double r : radii_) {
    require(std::isfinite(r) && r > 0.0, ErrorCode::InvalidInput, "radial values must be finite and positive");
  }
}

GraphHypersurface GraphHypersurface::exact_sphere(int n, double radius) {
  GraphHypersurface s;
  s.n_ = n;
  s.kind_ = SurfaceKind::ExactSphere;
  s.radii_ = {radius};
  s.profile_ = GeodesicSphereProfile{radius, 0.0, 0.0, 0.0};
  s.validate();
  return s;
}

GraphHypersurface GraphHypersurface::axisym(int n, int polar_nodes, const RadialProfile& profile) {
  require(is_axisymmetric(profile), ErrorCode::InvalidInput, "profile is not axisymmetric");
  require(polar_nodes >= kMinPolarNodes, ErrorCode::InvalidInput,
          "axisymmetric grid needs at least " + std::to_string(kMinPolarNodes) + " polar nodes");
  std::vector<double> r(idx(polar_nodes));
  for (int i = 0; i < polar_nodes; ++i) r[idx(i)] = radial_value(profile, (i + 0.5) * kPi / polar_nodes, 0.0);
  GraphHypersurface s = axisym_from_samples(n, std::move(r));
  s.profile_ = profile;
  return s;
}

GraphHypersurface GraphHypersurface::axisym_from_samples(int n, std::vector<double> radii) {
  GraphHypersurface s;
  s.n_ = n;
  s.kind_ = SurfaceKind::Axisym;
  s.polar_ = static_cast<int>(radii.size());
  s.radii_ = std::move(radii);
  s.validate();
  return s;
}

GraphHypersurface GraphHypersurface::grid3(int polar_nodes, int azimuth_nodes, const RadialProfile& profile) {
  require(polar_nodes >= kMinPolarNodes && azimuth_nodes >= 4, ErrorCode::InvalidInput, "grid3 resolution too small");
  std::vector<double> r(idx(polar_nodes) * idx(azimuth_nodes));
  for (int i = 0; i < polar_nodes; ++i) {
    const double theta = (i + 0.5) * kPi / polar_nodes;
    for (int j = 0; j < azimuth_nodes; ++j) {
      r[idx(i) * idx(azimuth_nodes) + idx(j)] = radial_value(profile, theta, 2.0 * kPi * j / azimuth_nodes);
    }
  }
  GraphHypersurface s = grid3_from_samples(polar_nodes, azimuth_nodes, std::move(r));
  s.profile_ = profile;
  return s;
}

GraphHypersurface GraphHypersurface::grid3_from_samples(int polar_nodes, int azimuth_nodes, std::vector<double> radii) {
  GraphHypersurface s;
  s.n_ = 3;
  s.kind_ = SurfaceKind::Grid3;
  s.polar_ = polar_nodes;
  s.azimuth_ = azimuth_nodes;
  s.radii_ = std::move(radii);
  s.validate();
  return s;
}

double GraphHypersurface::sphere_radius() const {
  require(kind_ == SurfaceKind::ExactSphere, ErrorCode::InvalidInput, "not an exact sphere");
  return radii_[0];
}

double GraphHypersurface::polar_angle(int i) const { return (i + 0.5) * kPi / polar_; }

double GraphHypersurface::azimuth_angle(int j) const { return 2.0 * kPi * j / azimuth_; }

GraphHypersurface GraphHypersurface::with_radii(std::vector<double> radii) const {
  GraphHypersurface s;
  s.n_ = n_;
  s.kind_ = kind_;
  s.polar_ = polar_;
  s.azimuth_ = azimuth_;
  s.radii_ = std::move(radii);
  if (kind_ == SurfaceKind::ExactSphere && s.radii_.size() == 1) {
    s.profile_ = GeodesicSphereProfile{s.radii_[0], 0.0, 0.0, 0.0};
  }
  s.validate();
  return s;
}

GraphHypersurface GraphHypersurface::resampled(int polar_nodes, int azimuth_nodes) const {
  switch (kind_) {
    case SurfaceKind::ExactSphere:
      return *this;
    case SurfaceKind::Axisym: {
      if (profile_) return axisym(n_, polar_nodes, *profile_);
      // even extension in u is 2 pi periodic on a shifted uniform grid
      const int two_n = 2 * polar_;
      std::vector<double> ext(idx(two_n));
      for (int i = 0; i < polar_; ++i) {
        ext[idx(i)] = radii_[idx(i)];
        ext[idx(two_n - 1 - i)] = radii_[idx(i)];
      }
      std::vector<double> targets(idx(polar_nodes));
      for (int i = 0; i < polar_nodes; ++i) targets[idx(i)] = (i + 0.5) * kPi / polar_nodes;
      return axisym_from_samples(n_, periodic_interpolate(ext, 0.5 * kPi / polar_, targets));
    }
    case SurfaceKind::Grid3: {
      require(azimuth_nodes >= 4 && azimuth_nodes % 2 == 0, ErrorCode::InvalidInput,
              "grid3 needs an even azimuth count >= 4");
      if (profile_) return grid3(polar_nodes, azimuth_nodes, *profile_);
      const std::size_t m_old = idx(azimuth_);
      const std::size_t m_new = idx(azimuth_nodes);
      std::vector<double> phi_targets(m_new);
      for (std::size_t j = 0; j < m_new; ++j) phi_targets[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m_new);
      // rows interpolated in phi
      std::vector<std::vector<double>> rows(idx(polar_));
      for (int i = 0; i < polar_; ++i) {
        std::span<const double> row(radii_.data() + idx(i) * m_old, m_old);
        rows[idx(i)] = periodic_interpolate(row, 0.0, phi_targets);
      }
      // columns through both poles: r(-theta, phi) = r(theta, phi + pi)
      const int two_n = 2 * polar_;
      std::vector<double> theta_targets(idx(polar_nodes));
      for (int i = 0; i < polar_nodes; ++i) theta_targets[idx(i)] = (i + 0.5) * kPi / polar_nodes;
      std::vector<double> out(idx(polar_nodes) * m_new);
      std::vector<double> ext(idx(two_n));
      for (std::size_t j = 0; j < m_new; ++j) {
        const std::size_t opposite = (j + m_new / 2) % m_new;
        for (int i = 0; i < polar_; ++i) {
          ext[idx(i)] = rows[idx(i)][j];
          ext[idx(two_n - 1 - i)] = rows[idx(i)][opposite];
        }
        const auto col = periodic_interpolate(ext, 0.5 * kPi / polar_, theta_targets);
        for (int i = 0; i < polar_nodes; ++i) out[idx(i) * m_new + j] = col[idx(i)];
      }
      return grid3_from_samples(polar_nodes, azimuth_nodes, std::move(out));
    }
  }
  fail(ErrorCode::InvalidInput, "unknown surface kind");
}

std::string GraphHypersurface::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << " n=" << n_;
  switch (kind_) {
    case SurfaceKind::ExactSphere:
      os << " rho=" << radii_[0];
      break;
    case SurfaceKind::Axisym:
      os << " N=" << polar_;
      break;
    case SurfaceKind::Grid3:
      os << " N=" << polar_ << "x" << azimuth_;
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Derivatives

namespace {

struct AxisymJet {
  double r, ru, ruu;
};

struct Grid3Jet {
  double r, rt, rp, rtt, rtp, rpp;
};

AxisymJet axisym_jet(const GraphHypersurface& s, int i, bool parity) {
  const int n = s.polar_nodes();
  const auto r = s.radii();
  auto at = [&](int q) {
    if (q < 0 || q >= n) {
      require(parity, ErrorCode::PoleSingularity, "stencil at polar node " + std::to_string(i) + " crosses a pole");
      q = q < 0 ? -1 - q : 2 * n - 1 - q;
    }
    return r[idx(q)];
  };
  const double h = kPi / n;
  AxisymJet jet{at(i), 0.0, 0.0};
  for (int a = -2; a <= 2; ++a) {
    const double f = at(i + a);
    jet.ru += kD1[a + 2] * f;
    jet.ruu += kD2[a + 2] * f;
  }
  jet.ru /= h;
  jet.ruu /= h * h;
  return jet;
}

Grid3Jet grid3_jet(const GraphHypersurface& s, int i, int j, bool parity) {
  const int n = s.polar_nodes();
  const int m = s.azimuth_nodes();
  const auto r = s.radii();
  auto at = [&](int qi, int qj) {
    if (qi < 0 || qi >= n) {
      require(parity, ErrorCode::PoleSingularity, "stencil at polar row " + std::to_string(i) + " crosses a pole");
      qi = qi < 0 ? -1 - qi : 2 * n - 1 - qi;
      qj += m / 2;
    }
    qj = ((qj % m) + m) % m;
    return r[idx(qi) * idx(m) + idx(qj)];
  };
  const double ht = kPi / n;
  const double hp = 2.0 * kPi / m;
  Grid3Jet jet{at(i, j), 0, 0, 0, 0, 0};
  for (int a = -2; a <= 2; ++a) {
    const double ft = at(i + a, j);
    const double fp = at(i, j + a);
    jet.rt += kD1[a + 2] * ft;
    jet.rtt += kD2[a + 2] * ft;
    jet.rp += kD1[a + 2] * fp;
    jet.rpp += kD2[a + 2] * fp;
    if (a == 0) continue;
    for (int b = -2; b <= 2; ++b) {
      if (b == 0) continue;
      jet.rtp += kD1[a + 2] * kD1[b + 2] * at(i + a, j + b);
    }
  }
  jet.rt /= ht;
  jet.rtt /= ht * ht;
  jet.rp /= hp;
  jet.rpp /= hp * hp;
  jet.rtp /= ht * hp;
  return jet;
}

// phi = Phi(r) with Phi' = 1/sinh r; gradient and covariant Hessian of phi in
// the round orthonormal frame.
struct PhiJet {
  double lambda, lambda_prime;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hessian;
};

PhiJet axisym_phi(int n, const AxisymJet& jet, double u) {
  const double lam = std::sinh(jet.r);
  const double lamp = std::cosh(jet.r);
  const double pu = jet.ru / lam;
  const double puu = jet.ruu / lam - lamp * jet.ru * jet.ru / (lam * lam);
  PhiJet out{lam, lamp, Eigen::VectorXd::Zero(n - 1), Eigen::MatrixXd::Zero(n - 1, n - 1)};
  out.grad(0) = pu;
  out.hessian(0, 0) = puu;
  const double cot = std::cos(u) / std::sin(u);
  for (int a = 1; a < n - 1; ++a) out.hessian(a, a) = pu * cot;
  return out;
}

PhiJet grid3_phi(const Grid3Jet& jet, double theta) {
  const double lam = std::sinh(jet.r);
  const double lamp = std::cosh(jet.r);
  const double l2 = lam * lam;
  const double pt = jet.rt / lam;
  const double pp = jet.rp / lam;
  const double ptt = jet.rtt / lam - lamp * jet.rt * jet.rt / l2;
  const double ptp = jet.rtp / lam - lamp * jet.rt * jet.rp / l2;
  const double ppp = jet.rpp / lam - lamp * jet.rp * jet.rp / l2;
  const double st = std::sin(theta);
  const double cot = std::cos(theta) / st;
  PhiJet out{lam, lamp, Eigen::VectorXd(2), Eigen::MatrixXd(2, 2)};
  out.grad << pt, pp / st;
  out.hessian(0, 0) = ptt;
  out.hessian(0, 1) = out.hessian(1, 0) = (ptp - cot * pp) / st;
  out.hessian(1, 1) = ppp / (st * st) + cot * pt;
  return out;
}

double max_abs_antisym(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

PointFrame assemble_frame(int n, const PhiJet& jet) {
  const int d = n - 1;
  PointFrame f;
  f.lambda = jet.lambda;
  f.lambda_prime = jet.lambda_prime;
  f.grad = jet.grad;
  f.hessian = jet.hessian;
  const double g2 = jet.grad.squaredNorm();
  f.v = std::sqrt(1.0 + g2);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd& hess = jet.hessian;
  const Eigen::VectorXd& g = jet.grad;
  // h_i^j = (lambda'/(v lambda)) (delta - phi_ij / lambda' + phi_i phi_l phi^{jl} / (v^2 lambda'))
  f.weingarten = (f.lambda_prime / (f.v * f.lambda)) *
                 (id - hess / f.lambda_prime + (g * (hess * g).transpose()) / (f.v * f.v * f.lambda_prime));
  f.raw_asymmetry = max_abs_antisym(f.weingarten);
  Eigen::MatrixXd g_half = id;
  Eigen::MatrixXd g_inv_half = id;
  if (g2 > 0.0) {
    const Eigen::VectorXd gh = g / std::sqrt(g2);
    g_half += (f.v - 1.0) * gh * gh.transpose();
    g_inv_half += (1.0 / f.v - 1.0) * gh * gh.transpose();
  }
  const Eigen::MatrixXd conj = g_half * f.weingarten * g_inv_half;
  f.asymmetry_defect = max_abs_antisym(conj);
  f.shape = 0.5 * (conj + conj.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(f.shape, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  f.kappa.assign(ev.data(), ev.data() + ev.size());
  std::sort(f.kappa.begin(), f.kappa.end());
  f.area_density = std::pow(f.lambda, d) * f.v;
  return f;
}

double axisym_round_weight(const GraphHypersurface& s, int i) {
  return sphere_area(s.dim() - 2) * polar_weights(s.polar_nodes(), s.dim() - 2)[idx(i)];
}

double grid3_round_weight(const GraphHypersurface& s, int i) {
  return polar_weights(s.polar_nodes(), 1)[idx(i)] * 2.0 * kPi / s.azimuth_nodes();
}

}  // namespace

PointFrame frame_at(const GraphHypersurface& surface, std::size_t node, FrameOptions options) {
  require(node < surface.node_count(), ErrorCode::IndexOutOfRange, "node index out of range");
  const int n = surface.dim();
  switch (surface.kind()) {
    case SurfaceKind::ExactSphere: {
      const double r = surface.sphere_radius();
      PhiJet jet{std::sinh(r), std::cosh(r), Eigen::VectorXd::Zero(n - 1), Eigen::MatrixXd::Zero(n - 1, n - 1)};
      PointFrame f = assemble_frame(n, jet);
      f.quadrature_weight = sphere_area(n - 1);
      return f;
    }
    case SurfaceKind::Axisym: {
      const int i = static_cast<int>(node);
      const double u = surface.polar_angle(i);
      PointFrame f = assemble_frame(n, axisym_phi(n, axisym_jet(surface, i, options.parity_extension), u));
      f.quadrature_weight = axisym_round_weight(surface, i);
      return f;
    }
    case SurfaceKind::Grid3: {
      const int m = surface.azimuth_nodes();
      const int i = static_cast<int>(node) / m;
      const int j = static_cast<int>(node) % m;
      PointFrame f = assemble_frame(3, grid3_phi(grid3_jet(surface, i, j, options.parity_extension), surface.polar_angle(i)));
      f.quadrature_weight = grid3_round_weight(surface, i);
      return f;
    }
  }
  fail(ErrorCode::InvalidInput, "unknown surface kind");
}

// ---------------------------------------------------------------------------
// CurvatureField

double CurvatureField::p_at(int j, std::size_t s) const { return sigma_at(j, s) / binomial_d(n - 1, j); }

std::vector<double> CurvatureField::p_row(int j) const {
  require(j >= 0 && j <= n - 1, ErrorCode::IndexOutOfRange, "p_j needs 0 <= j <= n-1");
  const double c = binomial_d(n - 1, j);
  std::vector<double> out(nodes);
  for (std::size_t s = 0; s < nodes; ++s) out[s] = sigma_at(j, s) / c;
  return out;
}

std::vector<double> CurvatureField::tilde_L_row(int k) const {
  require(k >= 0 && 2 * k <= n - 1, ErrorCode::IndexOutOfRange, "L~_k needs 0 <= 2k <= n-1");
  std::vector<double> out(nodes, 0.0);
  for (int i = 0; i <= k; ++i) {
    const double c = binomial_d(k, i) * ((i % 2 == 0) ? 1.0 : -1.0) / binomial_d(n - 1, 2 * k - 2 * i);
    for (std::size_t s = 0; s < nodes; ++s) out[s] += c * sigma_at(2 * k - 2 * i, s);
  }
  return out;
}

std::vector<double> CurvatureField::tilde_N_row(int k) const {
  require(k >= 0 && 2 * k + 1 <= n - 1, ErrorCode::IndexOutOfRange, "N~_k needs 0 <= 2k+1 <= n-1");
  std::vector<double> out(nodes, 0.0);
  for (int i = 0; i <= k; ++i) {
    const double c = binomial_d(k, i) * ((i % 2 == 0) ? 1.0 : -1.0) / binomial_d(n - 1, 2 * k - 2 * i + 1);
    for (std::size_t s = 0; s < nodes; ++s) out[s] += c * sigma_at(2 * k - 2 * i + 1, s);
  }
  return out;
}

double CurvatureField::kappa_min() const {
  // rows are ascending per node, so row 0 holds the minima
  return *std::min_element(kappa.begin(), kappa.begin() + static_cast<std::ptrdiff_t>(nodes));
}

double CurvatureField::umbilicity_deficit() const {
  double worst = 0.0;
  for (double k : kappa) worst = std::max(worst, std::fabs(k - 1.0));
  return worst;
}

double CurvatureField::integrate(std::span<const double> f) const {
  require(f.size() == nodes, ErrorCode::InvalidInput, "field length does not match the node count");
  return deterministic_dot(weight, f);
}

CurvatureField curvature_field(const GraphHypersurface& surface, FrameOptions options) {
  const int n = surface.dim();
  const int d = n - 1;
  CurvatureField field;
  field.n = n;
  field.nodes = surface.node_count();
  const std::size_t count = field.nodes;
  field.kappa.assign(idx(d) * count, 0.0);
  field.sigma.assign(idx(n) * count, 0.0);
  field.weight.assign(count, 0.0);
  field.round_weight.assign(count, 0.0);
  field.v.assign(count, 1.0);
  field.lambda.assign(count, 0.0);

  auto store = [&](std::size_t s, double lam, double v, double round_w, std::span<const double> k) {
    field.lambda[s] = lam;
    field.v[s] = v;
    field.round_weight[s] = round_w;
    field.weight[s] = round_w * std::pow(lam, d) * v;
    for (int i = 0; i < d; ++i) field.kappa[idx(i) * count + s] = k[idx(i)];
  };

  switch (surface.kind()) {
    case SurfaceKind::ExactSphere: {
      const double r = surface.sphere_radius();
      std::vector<double> k(idx(d), std::cosh(r) / std::sinh(r));
      store(0, std::sinh(r), 1.0, sphere_area(d), k);
      break;
    }
    case SurfaceKind::Axisym: {
      parallel_for(count, [&](std::size_t s) {
        const int i = static_cast<int>(s);
        const double u = surface.polar_angle(i);
        const AxisymJet jet = axisym_jet(surface, i, options.parity_extension);
        const double lam = std::sinh(jet.r);
        const double lamp = std::cosh(jet.r);
        const double pu = jet.ru / lam;
        const double puu = jet.ruu / lam - lamp * jet.ru * jet.ru / (lam * lam);
        const double v = std::sqrt(1.0 + pu * pu);
        // meridian curvature and the (n-2)-fold rotational one
        const double k_mer = (lamp - puu / (v * v)) / (lam * v);
        const double k_rot = (lamp - pu * std::cos(u) / std::sin(u)) / (lam * v);
        std::vector<double> k(idx(d), k_rot);
        k[0] = k_mer;
        std::sort(k.begin(), k.end());
        store(s, lam, v, axisym_round_weight(surface, i), k);
      });
      break;
    }
    case SurfaceKind::Grid3: {
      const int m = surface.azimuth_nodes();
      parallel_for(count, [&](std::size_t s) {
        const int i = static_cast<int>(s) / m;
        const int j = static_cast<int>(s) % m;
        const double theta = surface.polar_angle(i);
        const PhiJet jet = grid3_phi(grid3_jet(surface, i, j, options.parity_extension), theta);
        const Eigen::Vector2d g = jet.grad;
        const double g2 = g.squaredNorm();
        const double v = std::sqrt(1.0 + g2);
        Eigen::Matrix2d ginv_half = Eigen::Matrix2d::Identity();
        if (g2 > 0.0) {
          const Eigen::Vector2d gh = g / std::sqrt(g2);
          ginv_half += (1.0 / v - 1.0) * gh * gh.transpose();
        }
        // symmetric representative of the shape operator
        const Eigen::Matrix2d hs = ginv_half * Eigen::Matrix2d(jet.hessian) * ginv_half;
        const double mean = 0.5 * (hs(0, 0) + hs(1, 1));
        const double rad = std::hypot(0.5 * (hs(0, 0) - hs(1, 1)), hs(0, 1));
        const double scale = 1.0 / (jet.lambda * v);
        // larger Hessian eigenvalue gives the smaller curvature
        const double k[2] = {scale * (jet.lambda_prime - (mean + rad)), scale * (jet.lambda_prime - (mean - rad))};
        store(s, jet.lambda, v, grid3_round_weight(surface, i), k);
      });
      break;
    }
  }
  kernels::active().esf_batch(field.kappa, idx(d), count, field.sigma);
  return field;
}

// ---------------------------------------------------------------------------
// Integrals

namespace {

SurfaceMeasures sphere_measures(int n, double rho) {
  const int d = n - 1;
  const double omega = sphere_area(d);
  const double s = std::sinh(rho);
  const double c = std::cosh(rho) / s;
  SurfaceMeasures m;
  m.n = n;
  m.exact = true;
  m.radius = rho;
  m.area = omega * std::pow(s, d);
  m.volume = omega * sinh_power_integral(d, rho);
  for (int j = 0; j <= d; ++j) {
    m.p.push_back(std::pow(c, j) * m.area);
    m.sigma.push_back(binomial_d(d, j) * m.p.back());
  }
  // L~_k collapses to (coth^2 - 1)^k = sinh^{-2k}
  for (int k = 0; 2 * k <= d; ++k) {
    m.tilde_L.push_back(omega * std::pow(s, d - 2 * k));
    m.Lk.push_back(factorial_d(2 * k) * binomial_d(d, 2 * k) * m.tilde_L.back());
  }
  for (int k = 0; 2 * k + 1 <= d; ++k) m.tilde_N.push_back(c * omega * std::pow(s, d - 2 * k));
  m.kappa_min = c;
  return m;
}

double grid_volume(const GraphHypersurface& surface, const CurvatureField& field) {
  const int d = surface.dim() - 1;
  const auto r = surface.radii();
  std::vector<double> inner(r.size());
  for (std::size_t s = 0; s < r.size(); ++s) inner[s] = sinh_power_integral(d, r[s]);
  return deterministic_dot(field.round_weight, inner);
}

}  // namespace

SurfaceMeasures measure(const GraphHypersurface& surface, const CurvatureField& field) {
  const int n = surface.dim();
  if (surface.kind() == SurfaceKind::ExactSphere) {
    SurfaceMeasures m = sphere_measures(n, surface.sphere_radius());
    return m;
  }
  const int d = n - 1;
  SurfaceMeasures m;
  m.n = n;
  m.area = pairwise_sum(field.weight);
  m.volume = grid_volume(surface, field);
  for (int j = 0; j <= d; ++j) {
    m.sigma.push_back(field.integrate(field.sigma_row(j)));
    m.p.push_back(m.sigma.back() / binomial_d(d, j));
  }
  for (int k = 0; 2 * k <= d; ++k) {
    m.tilde_L.push_back(field.integrate(field.tilde_L_row(k)));
    m.Lk.push_back(factorial_d(2 * k) * binomial_d(d, 2 * k) * m.tilde_L.back());
  }
  for (int k = 0; 2 * k + 1 <= d; ++k) m.tilde_N.push_back(field.integrate(field.tilde_N_row(k)));
  m.kappa_min = field.kappa_min();
  m.max_asymmetry = field.max_asymmetry;
  return m;
}

SurfaceMeasures measure(const GraphHypersurface& surface, FrameOptions options) {
  if (surface.kind() == SurfaceKind::ExactSphere) return sphere_measures(surface.dim(), surface.sphere_radius());
  return measure(surface, curvature_field(surface, options));
}

double area(const GraphHypersurface& surface) { return measure(surface).area; }

double volume(const GraphHypersurface& surface) {
  if (surface.kind() == SurfaceKind::ExactSphere) {
    return sphere_area(surface.dim() - 1) * sinh_power_integral(surface.dim() - 1, surface.sphere_radius());
  }
  // only the round weights are needed
  CurvatureField weights;
  weights.round_weight.resize(surface.node_count());
  for (std::size_t s = 0; s < surface.node_count(); ++s) {
    weights.round_weight[s] = surface.kind() == SurfaceKind::Axisym
                                  ? axisym_round_weight(surface, static_cast<int>(s))
                                  : grid3_round_weight(surface, static_cast<int>(s) / surface.azimuth_nodes());
  }
  return grid_volume(surface, weights);
}

double integrate_sigma(const GraphHypersurface& surface, int k) {
  require(k >= 0 && k <= surface.dim() - 1, ErrorCode::IndexOutOfRange, "sigma_k needs 0 <= k <= n-1");
  return measure(surface).sigma[idx(k)];
}

double integrate_Lk(const GraphHypersurface& surface, int k) {
  require(k >= 0 && 2 * k <= surface.dim() - 1, ErrorCode::IndexOutOfRange, "L_k needs 0 <= 2k <= n-1");
  return measure(surface).Lk[idx(k)];
}

// ---------------------------------------------------------------------------
// Quermassintegrals

double QuermassVector::at(int r) const {
  require(r >= 0 && idx(r) < w.size() && w[idx(r)].has_value(), ErrorCode::IndexOutOfRange,
          "W_" + std::to_string(r) + " not available from route " + to_string(route));
  return *w[idx(r)];
}

namespace {

template <class T>
struct QuermassInputs {
  int n = 0;
  T volume = 0;
  T area = 0;
  std::vector<T> p;        // \int p_j
  std::vector<T> tilde_L;  // \int L~_k
};

// Closed-form sphere integrals at extended precision. W_{2k+1} of a large
// sphere is a small alternating combination of terms of size sinh^{n-1}(rho),
// so double inputs would leave only a few correct digits.
QuermassInputs<long double> sphere_inputs(int n, long double rho) {
  const int d = n - 1;
  const long double omega = sphere_area<long double>(d);
  const long double s = std::sinh(rho);
  const long double c = std::cosh(rho) / s;
  QuermassInputs<long double> in;
  in.n = n;
  in.area = omega * std::pow(s, d);
  in.volume = omega * sinh_power_integral<long double>(d, rho);
  for (int j = 0; j <= d; ++j) in.p.push_back(std::pow(c, j) * in.area);
  for (int k = 0; 2 * k <= d; ++k) in.tilde_L.push_back(omega * std::pow(s, d - 2 * k));
  return in;
}

template <class T>
std::vector<std::optional<double>> quermass_routes(const QuermassInputs<T>& m, QuermassRoute route) {
  const int n = m.n;
  const int d = n - 1;
  std::vector<std::optional<T>> w(idx(n + 1));
  switch (route) {
    case QuermassRoute::Recursion: {
      w[0] = m.volume;
      w[1] = m.area / T(n);
      // (1/C(n-1,r)) \int sigma_r = n (W_{r+1} + r/(n-r+1) W_{r-1})
      for (int r = 1; r + 1 <= n; ++r) w[idx(r + 1)] = m.p[idx(r)] / T(n) - T(r) / T(n - r + 1) * *w[idx(r - 1)];
      break;
    }
    case QuermassRoute::LemmaAimk: {
      for (int k = 0; 2 * k + 1 <= n; ++k) {
        T acc = 0;
        const int base = d - 2 * k;
        for (int i = 0; i <= k; ++i) {
          T coeff;
          if (base == 0) {
            coeff = (i == 0) ? T(1) : T(0);
          } else {
            coeff = T(base) / T(base + 2 * i);
          }
          acc += T(binomial_d(k, i)) * coeff * m.tilde_L[idx(k - i)];
        }
        w[idx(2 * k + 1)] = acc / T(n);
      }
      break;
    }
    case QuermassRoute::LemmaSS: {
      for (int k = 0; 2 * k + 1 <= n; ++k) {
        T acc = 0;
        for (int j = 0; j <= k; ++j) {
          const T coeff = T(double_factorial(2 * k)) * T(double_factorial(n - 2 * k - 1)) /
                          (T(double_factorial(2 * k - 2 * j)) * T(double_factorial(n - 2 * k - 1 + 2 * j)));
          acc += ((j % 2 == 0) ? T(1) : T(-1)) * coeff * m.p[idx(2 * k - 2 * j)];
        }
        w[idx(2 * k + 1)] = acc / T(n);
      }
      break;
    }
  }
  std::vector<std::optional<double>> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i]) out[i] = static_cast<double>(*w[i]);
  return out;
}

}  // namespace

QuermassVector quermass(const SurfaceMeasures& m, QuermassRoute route) {
  QuermassVector q;
  q.route = route;
  if (m.exact) {
    q.w = quermass_routes(sphere_inputs(m.n, m.radius), route);
    return q;
  }
  QuermassInputs<double> in{m.n, m.volume, m.area, m.p, m.tilde_L};
  q.w = quermass_routes(in, route);
  return q;
}

QuermassVector quermass(const GraphHypersurface& surface, QuermassRoute route) {
  return quermass(measure(surface), route);
}

// ---------------------------------------------------------------------------
// Horospherical convexity

HConvexityReport hconvexity_report(const GraphHypersurface& surface, double tol) {
  const CurvatureField field = curvature_field(surface);
  HConvexityReport rep;
  rep.tol = tol;
  const auto first = field.kappa.begin();
  const auto it = std::min_element(first, first + static_cast<std::ptrdiff_t>(field.nodes));
  rep.kappa_min = *it;
  rep.argmin = static_cast<std::size_t>(it - first);
  rep.horospherically_convex = rep.kappa_min >= 1.0 - tol;
  return rep;
}

double hconvex_amplitude_threshold(const std::function<GraphHypersurface(double)>& family, double margin,
                                   double upper, double abs_tol) {
  auto convex = [&](double eps) {
    try {
      return curvature_field(family(eps)).kappa_min() >= 1.0 + margin;
    } catch (const Error&) {
      return false;
    }
  };
  require(convex(0.0), ErrorCode::ConeViolation, "unperturbed member is not h-convex with the requested margin");
  if (convex(upper)) return upper;
  double lo = 0.0;
  double hi = upper;
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    (convex(mid) ? lo : hi) = mid;
  }
  return lo;
}

double hconvex_amplitude_threshold(int n, double radius, std::span<const double> shape, int polar_nodes,
                                   double margin, double upper, double abs_tol) {
  const std::vector<double> direction(shape.begin(), shape.end());
  return hconvex_amplitude_threshold(
      [&](double eps) {
        LegendreProfile p;
        p.coefficients.assign(std::max<std::size_t>(direction.size(), 1), 0.0);
        for (std::size_t l = 0; l < direction.size(); ++l) p.coefficients[l] = eps * direction[l];
        p.coefficients[0] += radius;
        return GraphHypersurface::axisym(n, polar_nodes, p);
      },
      margin, upper, abs_tol);
}

}  // namespace horoflow
