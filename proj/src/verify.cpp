#include "horoflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "horoflow/combinatorics.hpp"
#include "horoflow/error.hpp"
#include "horoflow/parallel.hpp"

namespace horoflow {
namespace {

constexpr double kPi = std::numbers::pi;

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double omega_of(const SurfaceMeasures& m) { return sphere_area(m.n - 1); }

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation

Evaluation::Evaluation(GraphHypersurface surface, std::string descriptor, std::uint64_t seed)
    : descriptor_(std::move(descriptor)), seed_(seed) {
  if (descriptor_.empty()) descriptor_ = surface.describe();
  levels_.push_back(std::move(surface));
  cache_.emplace_back();
}

const SurfaceMeasures& Evaluation::measures(int level) {
  require(level >= 0, ErrorCode::IndexOutOfRange, "negative refinement level");
  if (exact()) level = 0;
  while (static_cast<int>(levels_.size()) <= level) {
    levels_.push_back(levels_.back().refined());
    cache_.emplace_back();
  }
  auto& slot = cache_[idx(level)];
  if (!slot) slot = measure(levels_[idx(level)]);
  return *slot;
}

int Evaluation::resolution(int level) const {
  if (exact()) return 0;
  return surface().polar_nodes() << level;
}

// ---------------------------------------------------------------------------
// Sides

Sides thm_1_1_sides(const SurfaceMeasures& m, int k) {
  const int d = m.n - 1;
  require(k >= 1 && 2 * k <= d, ErrorCode::IndexOutOfRange, "thm1.1 needs 1 <= k, 2k <= n-1");
  const double omega = omega_of(m);
  const double c = factorial_d(2 * k) * binomial_d(d, 2 * k) * std::pow(omega, 2.0 * k / d);
  return {m.Lk[idx(k)], c * std::pow(m.area, static_cast<double>(d - 2 * k) / d)};
}

Sides thm_1_2_sides(const SurfaceMeasures& m, int k) {
  const int d = m.n - 1;
  require(k >= 1 && 2 * k <= d, ErrorCode::IndexOutOfRange, "thm1.2 needs 1 <= k, 2k <= n-1");
  const double omega = omega_of(m);
  const double x = m.area / omega;
  const double inner = std::pow(x, 1.0 / k) + std::pow(x, (1.0 / k) * (d - 2 * k) / d);
  return {m.sigma[idx(2 * k)], binomial_d(d, 2 * k) * omega * std::pow(inner, k)};
}

Sides thm_1_3_sides(const SurfaceMeasures& m, int k, QuermassRoute route) {
  const int n = m.n;
  const int d = n - 1;
  require(k >= 0 && 2 * k + 1 <= n, ErrorCode::IndexOutOfRange, "thm1.3 needs 0 <= k, 2k+1 <= n");
  const double omega = omega_of(m);
  const QuermassVector q = quermass(m, route);
  const double w1 = m.area / n;
  double rhs = 0.0;
  for (int i = 0; i <= k; ++i) {
    const int base = d - 2 * k;
    const double coeff = base == 0 ? (i == 0 ? 1.0 : 0.0) : static_cast<double>(base) / (base + 2 * i);
    rhs += coeff * binomial_d(k, i) * std::pow(n * w1 / omega, static_cast<double>(base + 2 * i) / d);
  }
  return {q.at(2 * k + 1), omega / n * rhs};
}

Sides thm_6_1_sides(const SurfaceMeasures& m) {
  const int d = m.n - 1;
  const double omega = omega_of(m);
  const double x = m.area / omega;
  return {m.sigma[1], d * omega * std::sqrt(x * x + std::pow(x, 2.0 * (d - 1) / d))};
}

Sides eq_6_2_sides(const SurfaceMeasures& m) {
  const int d = m.n - 1;
  require(d >= 2, ErrorCode::IndexOutOfRange, "inequality needs n >= 3");
  return {(d - 1.0) / (2.0 * d) * m.sigma[1] * m.sigma[1], m.sigma[2] * m.sigma[0]};
}

Sides conjecture_sides(const SurfaceMeasures& m, int k) {
  const int d = m.n - 1;
  require(k >= 0 && 2 * k + 1 <= d, ErrorCode::IndexOutOfRange, "odd conjecture needs 2k+1 <= n-1");
  const double omega = omega_of(m);
  const double x = m.area / omega;
  const double a = 2.0 / (2 * k + 1);
  const double inner = std::pow(x, a) + std::pow(x, a * (d - 2 * k - 1) / d);
  return {m.sigma[idx(2 * k + 1)], binomial_d(d, 2 * k + 1) * omega * std::pow(inner, (2 * k + 1) / 2.0)};
}

Sides ai_sides(const SurfaceMeasures& m, int k) {
  const int d = m.n - 1;
  require(k >= 0 && 2 * k + 2 <= d, ErrorCode::IndexOutOfRange, "inequality needs 2k+2 <= n-1");
  const double c1 = binomial_d(d, 2 * k + 1);
  const double c = c1 * c1 / (binomial_d(d, 2 * k + 2) * binomial_d(d, 2 * k));
  const double s = m.sigma[idx(2 * k + 1)];
  return {s * s, c * m.sigma[idx(2 * k + 2)] * m.sigma[idx(2 * k)]};
}

Sides gs_sides(const SurfaceMeasures& m, int r, int s) {
  const int n = m.n;
  require(0 <= s && s < r && r <= n, ErrorCode::IndexOutOfRange, "quermass comparison needs 0 <= s < r <= n");
  const QuermassVector q = quermass(m, QuermassRoute::Recursion);
  return {q.at(r), static_cast<double>(n - r) / (n - s) * q.at(s)};
}

Sides gs2_sides(const SurfaceMeasures& m, int k) {
  const int d = m.n - 1;
  require(k >= 1 && k <= d, ErrorCode::IndexOutOfRange, "sigma_k bound needs 1 <= k <= n-1");
  const double c = k == 1 ? (d - 1.0) / d : 1.0;
  return {m.sigma[idx(k)], c * binomial_d(d, k) * m.area};
}

// ---------------------------------------------------------------------------
// Checks

namespace {

template <class Fn>
InequalityReport evaluate(Evaluation& e, std::string name, int k, Fn&& sides, bool asserted = true) {
  InequalityReport rep;
  rep.name = std::move(name);
  rep.n = e.dim();
  rep.k = k;
  rep.descriptor = e.descriptor();
  rep.seed = e.seed();
  rep.asserted = asserted;

  auto fill = [&](const Sides& s) {
    rep.lhs = s.lhs;
    rep.rhs = s.rhs;
    rep.margin = s.lhs - s.rhs;
    const double scale = std::max({std::fabs(s.lhs), std::fabs(s.rhs), 1e-300});
    rep.relative_margin = rep.margin / scale;
    return scale;
  };

  if (e.exact()) {
    const double scale = fill(sides(e.measures(0)));
    rep.tolerance = e.analytic_tol() * scale;
  } else {
    // Richardson-style estimate: the margin moves by about its own error
    // between a grid and its doubling.
    const Sides base = sides(e.measures(0));
    const Sides fine = sides(e.measures(1));
    const double scale = fill(base);
    rep.tolerance = kGridTolFactor * std::fabs((base.lhs - base.rhs) - (fine.lhs - fine.rhs)) + kGridTolFloor * scale;
    rep.resolution = e.resolution(0);
    if (asserted && rep.margin < -rep.tolerance) {
      const Sides finer = sides(e.measures(2));
      const double fine_scale = fill(fine);
      rep.tolerance =
          kGridTolFactor * std::fabs((fine.lhs - fine.rhs) - (finer.lhs - finer.rhs)) + kGridTolFloor * fine_scale;
      rep.resolution = e.resolution(1);
      rep.rechecked = true;
    }
  }
  rep.equality = std::fabs(rep.margin) <= rep.tolerance;
  rep.pass = !asserted || rep.margin >= -rep.tolerance;
  return rep;
}

void require_hconvex(Evaluation& e) {
  const double kmin = e.measures(0).kappa_min;
  require(kmin >= 1.0 - kDefaultConeTol, ErrorCode::ConeViolation,
          "surface is not horospherically convex (kappa_min = " + std::to_string(kmin) + ")");
}

}  // namespace

InequalityReport check_thm_1_1(Evaluation& e, int k) {
  require_hconvex(e);
  auto rep = evaluate(e, "thm1.1", k, [k](const SurfaceMeasures& m) { return thm_1_1_sides(m, k); });
  rep.identity = 2 * k == e.dim() - 1;
  return rep;
}

InequalityReport check_thm_1_2(Evaluation& e, int k) {
  require_hconvex(e);
  auto rep = evaluate(e, "thm1.2", k, [k](const SurfaceMeasures& m) { return thm_1_2_sides(m, k); });
  // \int sigma_2 = |Sigma| + omega_2 on surfaces in H^3
  rep.identity = k == 1 && e.dim() == 3;
  return rep;
}

InequalityReport check_thm_1_3(Evaluation& e, int k, QuermassRoute route) {
  require_hconvex(e);
  auto rep = evaluate(e, "thm1.3", k, [k, route](const SurfaceMeasures& m) { return thm_1_3_sides(m, k, route); });
  rep.identity = k == 0 || 2 * k + 1 == e.dim();
  return rep;
}

InequalityReport check_thm_6_1(Evaluation& e) {
  require_hconvex(e);
  return evaluate(e, "thm6.1", -1, [](const SurfaceMeasures& m) { return thm_6_1_sides(m); });
}

InequalityReport check_eq_6_2(Evaluation& e) {
  require_hconvex(e);
  return evaluate(e, "eq6.2", -1, [](const SurfaceMeasures& m) { return eq_6_2_sides(m); });
}

std::array<InequalityReport, 2> explore_conjecture(Evaluation& e, int k) {
  require(k >= 0 && 2 * k + 2 <= e.dim() - 1, ErrorCode::IndexOutOfRange, "conjecture exploration needs 2k+2 <= n-1");
  require_hconvex(e);
  return {evaluate(e, "conjecture", k, [k](const SurfaceMeasures& m) { return conjecture_sides(m, k); }, false),
          evaluate(e, "ai", k, [k](const SurfaceMeasures& m) { return ai_sides(m, k); }, false)};
}

InequalityReport check_gallego_solanes(Evaluation& e, int r, int s) {
  require_hconvex(e);
  InequalityReport rep =
      evaluate(e, "gs", r, [r, s](const SurfaceMeasures& m) { return gs_sides(m, r, s); });
  rep.name = "gs(" + std::to_string(r) + "," + std::to_string(s) + ")";
  return rep;
}

InequalityReport check_gallego_solanes_sigma(Evaluation& e, int k) {
  require_hconvex(e);
  return evaluate(e, "gs2", k, [k](const SurfaceMeasures& m) { return gs2_sides(m, k); });
}

std::vector<InequalityReport> check_quermass_routes(Evaluation& e) {
  const int n = e.dim();
  std::vector<InequalityReport> out;
  const QuermassRoute routes[3] = {QuermassRoute::Recursion, QuermassRoute::LemmaAimk, QuermassRoute::LemmaSS};
  for (int k = 0; 2 * k + 1 <= n; ++k) {
    const int r = 2 * k + 1;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        auto w = [&](const SurfaceMeasures& m, QuermassRoute route) { return quermass(m, route).at(r); };
        InequalityReport rep;
        rep.name = "quermass_routes(" + to_string(routes[a]) + "," + to_string(routes[b]) + ")";
        rep.n = n;
        rep.k = k;
        rep.identity = true;  // an agreement check: |lhs - rhs| <= tol is the pass condition
        rep.descriptor = e.descriptor();
        rep.seed = e.seed();
        const SurfaceMeasures& m0 = e.measures(0);
        rep.lhs = w(m0, routes[a]);
        rep.rhs = w(m0, routes[b]);
        rep.margin = rep.lhs - rep.rhs;
        const double scale = std::max({std::fabs(rep.lhs), std::fabs(rep.rhs), 1e-300});
        rep.relative_margin = rep.margin / scale;
        double quadrature_tol;
        if (e.exact()) {
          quadrature_tol = e.analytic_tol() * scale;
        } else {
          const SurfaceMeasures& m1 = e.measures(1);
          quadrature_tol = std::max(std::fabs(rep.lhs - w(m1, routes[a])), std::fabs(rep.rhs - w(m1, routes[b]))) +
                           kGridTolFloor * scale;
          rep.resolution = e.resolution(0);
        }
        rep.tolerance = 10.0 * quadrature_tol;
        rep.equality = std::fabs(rep.margin) <= rep.tolerance;
        rep.pass = rep.equality;
        out.push_back(std::move(rep));
      }
    }
  }
  return out;
}

std::vector<InequalityReport> run_theorem_checks(Evaluation& e, int k) {
  const int n = e.dim();
  const int d = n - 1;
  std::vector<InequalityReport> out;
  if (k >= 1 && 2 * k <= d) {
    out.push_back(check_thm_1_1(e, k));
    out.push_back(check_thm_1_2(e, k));
  }
  if (k >= 0 && 2 * k + 1 <= n) out.push_back(check_thm_1_3(e, k));
  out.push_back(check_thm_6_1(e));
  out.push_back(check_eq_6_2(e));
  for (int r = 1; r <= n; ++r)
    for (int s = 0; s < r; ++s) out.push_back(check_gallego_solanes(e, r, s));
  for (int j = 1; j <= d; ++j) out.push_back(check_gallego_solanes_sigma(e, j));
  for (auto& rep : check_quermass_routes(e)) out.push_back(std::move(rep));
  if (k >= 0 && 2 * k + 2 <= d) {
    for (auto& rep : explore_conjecture(e, k)) out.push_back(std::move(rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Round constants

namespace {

// |S^dim| by the two-step recursion, independent of the Gamma form.
double sphere_area_recursive(int dim) {
  double a = (dim % 2 == 0) ? 2.0 : 2.0 * kPi;
  for (int j = (dim % 2 == 0) ? 2 : 3; j <= dim; j += 2) a *= 2.0 * kPi / (j - 1);
  return a;
}

}  // namespace

double sobolev_fk_scaled(int n, int k, double c) {
  const int d = n - 1;
  require(k >= 0 && k <= d, ErrorCode::IndexOutOfRange, "F_k needs 0 <= k <= n-1");
  require(c > 0.0, ErrorCode::InvalidInput, "scale must be positive");
  const double vol = std::pow(c, d) * sphere_area_recursive(d);
  // g^{-1} A = I / (2 c^2)
  const double sigma_k = binomial_d(d, k) * std::pow(0.5 / (c * c), k);
  return std::pow(vol, -static_cast<double>(d - 2 * k) / d) * sigma_k * vol;
}

RoundConstants round_constants(int n, int k) {
  require(n >= 3, ErrorCode::InvalidInput, "round constants need n >= 3");
  const int d = n - 1;
  require(k >= 0 && 2 * k <= d, ErrorCode::IndexOutOfRange, "round constants need 0 <= 2k <= n-1");
  RoundConstants rc;
  rc.n = n;
  rc.k = k;
  rc.omega = 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
  rc.yamabe = d * (d - 1.0) * std::pow(rc.omega, 2.0 / d);
  rc.sobolev_fk = binomial_d(d, k) / std::pow(2.0, k) * std::pow(rc.omega, 2.0 * k / d);
  rc.lk_constant = factorial_d(2 * k) * binomial_d(d, 2 * k) * std::pow(rc.omega, 2.0 * k / d);
  const double vol = sphere_area_recursive(d);
  const double scalar = d * (d - 1.0);
  rc.yamabe_direct = scalar * vol / std::pow(vol, (d - 2.0) / d);
  rc.sobolev_fk_direct = sobolev_fk_scaled(n, k, 1.0);
  return rc;
}

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t SampleRng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SampleRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int SampleRng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  SampleRng mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  mix.next();
  return mix.next();
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::ExactSphere:
      return "sphere";
    case GeneratorKind::PerturbedSphere:
      return "perturbed";
    case GeneratorKind::RandomHConvex:
      return "random_hconvex";
    case GeneratorKind::RandomUnitSubconvex:
      return "random_unit_subconvex";
  }
  return "?";
}

namespace {

std::string format_list(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

}  // namespace

SurfaceSample generate_surface(const SampleSpec& spec, std::size_t index) {
  const std::uint64_t seed = sample_seed(spec.seed, index);
  SampleRng rng(seed);
  const double rho = rng.uniform(spec.radius_min, spec.radius_max);
  std::ostringstream desc;
  desc.precision(17);

  switch (spec.generator) {
    case GeneratorKind::ExactSphere: {
      desc << "sphere n=" << spec.n << " rho=" << rho;
      return {GraphHypersurface::exact_sphere(spec.n, rho), desc.str(), seed};
    }
    case GeneratorKind::PerturbedSphere: {
      require(spec.max_mode >= 2, ErrorCode::InvalidInput, "perturbations use degrees >= 2");
      // keep clear of the boundary of the cone so the sample is strictly h-convex
      const double margin = 0.05 * (1.0 / std::tanh(rho) - 1.0);
      const double fraction = rng.uniform(spec.fraction_min, spec.fraction_max);
      if (spec.full_grid) {
        require(spec.n == 3, ErrorCode::InvalidInput, "full-grid perturbations need n = 3");
        std::vector<HarmonicMode> modes;
        for (int l = 2; l <= spec.max_mode; ++l) {
          modes.push_back({l, rng.uniform_int(-l, l), rng.uniform(-1.0, 1.0)});
        }
        // normalize each mode to unit peak on a coarse sample of [-1, 1]
        for (auto& m : modes) {
          double peak = 0.0;
          for (int q = 0; q <= 20; ++q) {
            const double x = -1.0 + 0.1 * q;
            peak = std::max(peak, std::fabs(std::assoc_legendre(static_cast<unsigned>(m.l),
                                                                static_cast<unsigned>(std::abs(m.m)), x)));
          }
          m.amplitude /= peak * static_cast<double>(modes.size());
        }
        auto family = [&](double eps) {
          HarmonicProfile h{rho, modes};
          for (auto& m : h.modes) m.amplitude *= eps;
          return GraphHypersurface::grid3(spec.polar_nodes, 2 * spec.polar_nodes, h);
        };
        const double threshold = hconvex_amplitude_threshold(family, margin, 0.5 * rho, 1e-6);
        const double eps = fraction * threshold;
        desc << "perturbed_grid3 n=3 rho=" << rho << " modes=[";
        for (std::size_t i = 0; i < modes.size(); ++i) {
          desc << (i ? "," : "") << "{" << modes[i].l << "," << modes[i].m << "," << modes[i].amplitude * eps << "}";
        }
        desc << "] N=" << spec.polar_nodes << "x" << 2 * spec.polar_nodes;
        return {family(eps), desc.str(), seed};
      }
      std::vector<double> shape(idx(spec.max_mode + 1), 0.0);
      double total = 0.0;
      for (int l = 2; l <= spec.max_mode; ++l) {
        shape[idx(l)] = rng.uniform(-1.0, 1.0);
        total += std::fabs(shape[idx(l)]);
      }
      for (double& c : shape) c /= total;
      // |sum c_l P_l| <= 1, so eps < rho keeps r positive
      const double threshold = hconvex_amplitude_threshold(spec.n, rho, shape, spec.polar_nodes, margin, 0.9 * rho, 1e-6);
      const double eps = fraction * threshold;
      LegendreProfile p;
      p.coefficients = shape;
      for (double& c : p.coefficients) c *= eps;
      p.coefficients[0] += rho;
      desc << "perturbed n=" << spec.n << " legendre=" << format_list(p.coefficients) << " N=" << spec.polar_nodes;
      return {GraphHypersurface::axisym(spec.n, spec.polar_nodes, p), desc.str(), seed};
    }
    case GeneratorKind::RandomHConvex:
    case GeneratorKind::RandomUnitSubconvex:
      fail(ErrorCode::InvalidInput, "curvature generators do not produce surfaces");
  }
  fail(ErrorCode::InvalidInput, "unknown generator");
}

CurvatureVector generate_kappa(const SampleSpec& spec, int dim, std::size_t index) {
  SampleRng rng(sample_seed(spec.seed, index));
  std::vector<double> kappa(idx(dim));
  const double style = rng.uniform();
  for (auto& x : kappa) {
    const double u = rng.uniform();
    if (spec.generator == GeneratorKind::RandomHConvex) {
      // bias towards the boundary kappa = 1, with exact boundary hits
      x = (rng.uniform() < 0.1) ? 1.0 : 1.0 + (spec.kappa_max - 1.0) * u * u;
    } else if (spec.generator == GeneratorKind::RandomUnitSubconvex) {
      x = (rng.uniform() < 0.1) ? 1.0 : std::max(1.0 - u, 1e-3);
    } else {
      fail(ErrorCode::InvalidInput, "surface generators do not produce curvature vectors");
    }
  }
  // a few isotropic samples
  if (style < 0.02) std::fill(kappa.begin(), kappa.end(), kappa.front());
  return CurvatureVector(std::move(kappa));
}

SweepResult sweep_surfaces(const SampleSpec& spec, int k) {
  std::vector<std::vector<InequalityReport>> per_sample(spec.count);
  parallel_for(spec.count, [&](std::size_t i) {
    SurfaceSample sample = generate_surface(spec, i);
    Evaluation e(std::move(sample.surface), std::move(sample.descriptor), sample.seed);
    per_sample[i] = run_theorem_checks(e, k);
    for (auto& rep : per_sample[i]) rep.sample = i;
  });
  SweepResult out;
  out.samples = spec.count;
  for (auto& reports : per_sample) {
    for (auto& rep : reports) {
      if (rep.asserted && !rep.pass) ++out.failures;
      out.reports.push_back(std::move(rep));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise sweeps

namespace {

Rational random_rational(SampleRng& rng, bool hconvex, double kappa_max) {
  const int den = rng.uniform_int(1, 12);
  if (hconvex) {
    if (rng.uniform() < 0.1) return Rational(1);
    const int top = static_cast<int>((kappa_max - 1.0) * den);
    Rational r(den + rng.uniform_int(0, std::max(top, 0)), den);
    r.canonicalize();
    return r;
  }
  Rational r(rng.uniform_int(1, den), den);
  r.canonicalize();
  return r;
}

template <class T>
double to_double(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x.get_d();
  } else {
    return x;
  }
}

struct Tally {
  SymcheckStat stat;
  void add(double value, double scale, double tol, bool equality, std::uint64_t seed, bool want_nonneg) {
    ++stat.evaluated;
    const double signed_value = want_nonneg ? value : -value;
    const double rel = scale > 0.0 ? signed_value / scale : signed_value;
    if (signed_value < -tol * scale) ++stat.failures;
    if (equality) ++stat.equalities;
    if (stat.evaluated == 1 || rel < stat.min_relative) {
      stat.min_relative = rel;
      stat.worst_seed = seed;
    }
  }
};

template <class T>
void symcheck_one(const SymTable<T>& tbl, const SymcheckSpec& spec, std::uint64_t seed, std::vector<Tally>& tallies) {
  const int k = spec.k;
  const double tol = spec.exact ? 0.0 : spec.rel_tol;
  if (spec.cone == SymCone::HConvex) {
    const auto key = key_inequality_margin(tbl, k);
    const auto l43 = lemma43_margin(tbl, k);
    const auto l46 = lemma46_margin(tbl, k);
    tallies[0].add(to_double(key.value), to_double(key.scale), tol, key.equality, seed, true);
    tallies[1].add(to_double(l43.value), to_double(l43.scale), tol, l43.equality, seed, true);
    tallies[2].add(to_double(l46.value), to_double(l46.scale), tol, l46.equality, seed, true);
  } else {
    const auto s = reversed_cone_signs(tbl, k);
    // scales: magnitudes of the p-terms entering each combination
    double sc1 = 0.0, sc2 = 0.0, sc3 = 0.0;
    const double p1 = to_double(tbl.p_at(1));
    for (int i = 0; i <= k; ++i) {
      const double c = binomial_d(k, i);
      sc1 += c * (std::fabs(p1 * to_double(tbl.p_at(2 * k - 2 * i))) + std::fabs(to_double(tbl.p_at(2 * k - 2 * i + 1))));
      sc2 += c * std::fabs(to_double(tbl.p_at(2 * k - 2 * i + 1)));
      sc3 += c * std::fabs(to_double(tbl.p_at(2 * k - 2 * i)));
    }
    auto is_zero = [](const T& v) {
      if constexpr (std::is_same_v<T, Rational>) {
        return sgn(v) == 0;
      } else {
        return v == 0.0;
      }
    };
    tallies[0].add(to_double(s.s1), sc1, tol, is_zero(s.s1), seed, false);
    tallies[1].add(to_double(s.s2), sc2, tol, is_zero(s.s2), seed, true);
    tallies[2].add(to_double(s.s3), sc3, tol, is_zero(s.s3), seed, true);
  }
}

}  // namespace

SymcheckResult run_symcheck(const SymcheckSpec& spec) {
  const int dim = spec.n - 1;
  require(spec.n >= 3, ErrorCode::InvalidInput, "symcheck needs n >= 3");
  require(spec.k >= 1 && 2 * spec.k + 1 <= dim, ErrorCode::IndexOutOfRange, "symcheck needs 1 <= k, 2k+1 <= n-1");
  std::vector<std::string> names = spec.cone == SymCone::HConvex
                                       ? std::vector<std::string>{"key_inequality", "lemma4.3", "lemma4.6"}
                                       : std::vector<std::string>{"reversed_s1", "reversed_s2", "reversed_s3"};
  const unsigned workers = std::max(1u, thread_count());
  std::vector<std::vector<Tally>> partial(workers, std::vector<Tally>(names.size()));
  // contiguous blocks per worker, merged in order
  const std::size_t block = (spec.samples + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(spec.samples, begin + block);
    SampleSpec gen;
    gen.generator = spec.cone == SymCone::HConvex ? GeneratorKind::RandomHConvex : GeneratorKind::RandomUnitSubconvex;
    gen.seed = spec.seed;
    gen.kappa_max = spec.kappa_max;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t seed = sample_seed(spec.seed, i);
      if (spec.exact) {
        SampleRng rng(seed);
        std::vector<Rational> kappa;
        for (int j = 0; j < dim; ++j) kappa.push_back(random_rational(rng, spec.cone == SymCone::HConvex, spec.kappa_max));
        symcheck_one(build_sym_table(RationalCurvatureVector(std::move(kappa))), spec, seed, partial[w]);
      } else {
        symcheck_one(build_sym_table(generate_kappa(gen, dim, i)), spec, seed, partial[w]);
      }
    }
  });
  SymcheckResult out;
  out.samples = spec.samples;
  for (std::size_t c = 0; c < names.size(); ++c) {
    SymcheckStat merged;
    merged.name = names[c];
    bool first = true;
    for (const auto& p : partial) {
      const auto& s = p[c].stat;
      if (s.evaluated == 0) continue;
      merged.evaluated += s.evaluated;
      merged.failures += s.failures;
      merged.equalities += s.equalities;
      if (first || s.min_relative < merged.min_relative) {
        merged.min_relative = s.min_relative;
        merged.worst_seed = s.worst_seed;
      }
      first = false;
    }
    if (merged.failures > 0) out.pass = false;
    out.stats.push_back(merged);
  }
  return out;
}

}  // namespace horoflow
