#include "horoflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "horoflow/combinatorics.hpp"
#include "horoflow/error.hpp"
#include "horoflow/kernels/kernels.hpp"
#include "horoflow/parallel.hpp"

namespace horoflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Spectral radii of the fourth-order stencils: second derivative 16/(3h^2),
// first derivative about 1.372/h. RK4 is stable on [-2.785, 0].
constexpr double kD2Radius = 16.0 / 3.0;
constexpr double kD1Radius = 1.372;
constexpr double kRk4Real = 2.785;

std::vector<double> cosine_filtered(std::span<const double> r, double strength, int order) {
  auto a = cosine_coefficients(r);
  const double n = static_cast<double>(a.size());
  for (std::size_t l = 0; l < a.size(); ++l) a[l] *= std::exp(-strength * std::pow(static_cast<double>(l) / n, order));
  return cosine_synthesis(a, r.size());
}

GraphHypersurface shifted(const GraphHypersurface& s, std::span<const double> base, std::span<const double> dir,
                          double h) {
  std::vector<double> r(base.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = base[i] + h * dir[i];
    require(std::isfinite(r[i]) && r[i] > 0.0, ErrorCode::GraphDegenerate,
            "radial value left (0, inf) at node " + std::to_string(i));
  }
  return s.with_radii(std::move(r));
}

}  // namespace

std::string to_string(SpeedKind kind) { return kind == SpeedKind::Ratio ? "ratio" : "inverse_mean"; }

std::string to_string(FlowStop stop) {
  switch (stop) {
    case FlowStop::TimeReached:
      return "t_end";
    case FlowStop::Umbilic:
      return "umbilic";
    case FlowStop::Plateau:
      return "plateau";
    case FlowStop::MonotonicityViolation:
      return "monotonicity_violation";
  }
  return "?";
}

void validate(const FlowConfig& cfg, const GraphHypersurface& surface) {
  const int d = surface.dim() - 1;
  require(cfg.k >= 1 && 2 * cfg.k <= d, ErrorCode::InvalidInput, "flow order needs 1 <= k and 2k <= n-1");
  require(cfg.dt > 0.0 && std::isfinite(cfg.dt), ErrorCode::InvalidInput, "dt must be positive");
  require(cfg.t_end > 0.0 && std::isfinite(cfg.t_end), ErrorCode::InvalidInput, "t_end must be positive");
  require(cfg.cfl > 0.0 && cfg.parabolic_safety > 0.0, ErrorCode::InvalidInput, "step safety factors must be positive");
  require(cfg.dt_floor > 0.0, ErrorCode::InvalidInput, "dt floor must be positive");
  require(cfg.cadence >= 1, ErrorCode::InvalidInput, "cadence must be at least 1");
  require(cfg.monotonicity_factor > 0.0, ErrorCode::InvalidInput, "monotonicity factor must be positive");
  require(!cfg.filter || surface.kind() == SurfaceKind::Axisym, ErrorCode::InvalidInput,
          "spectral filtering is available for axisymmetric surfaces only");
}

std::vector<double> normal_speed(const CurvatureField& field, int k, SpeedKind speed) {
  const int d = field.n - 1;
  std::vector<double> num;
  std::vector<double> den;
  if (speed == SpeedKind::Ratio) {
    require(k >= 1 && 2 * k <= d, ErrorCode::IndexOutOfRange, "speed p_{2k-1}/p_{2k} needs 1 <= k, 2k <= n-1");
    num = field.p_row(2 * k - 1);
    den = field.p_row(2 * k);
  } else {
    num.assign(field.nodes, 1.0);
    den = field.p_row(1);
  }
  std::vector<double> out(field.nodes);
  const std::size_t flagged = kernels::active().safe_ratio(num, den, kDivisionFloor, out);
  require(flagged == 0, ErrorCode::DivisionBySmall,
          "speed denominator below " + std::to_string(kDivisionFloor) + " at " + std::to_string(flagged) + " nodes");
  return out;
}

double radial_speed(const PointFrame& frame, int k, SpeedKind speed) {
  const auto tbl = build_sym_table(CurvatureVector(frame.kappa));
  double num = 1.0;
  double den;
  if (speed == SpeedKind::Ratio) {
    num = tbl.p_at(2 * k - 1);
    den = tbl.p_at(2 * k);
  } else {
    den = tbl.p_at(1);
  }
  require(std::fabs(den) >= kDivisionFloor, ErrorCode::DivisionBySmall, "speed denominator below the division floor");
  return num / den * frame.v;
}

std::vector<double> radial_velocity(const GraphHypersurface& surface, int k, SpeedKind speed) {
  const CurvatureField field = curvature_field(surface);
  std::vector<double> f = normal_speed(field, k, speed);
  for (std::size_t s = 0; s < f.size(); ++s) f[s] *= field.v[s];
  return f;
}

double stable_dt(const GraphHypersurface& surface, const FlowConfig& cfg) {
  if (surface.kind() == SurfaceKind::ExactSphere) return std::numeric_limits<double>::infinity();
  const CurvatureField field = curvature_field(surface);
  const std::vector<double> f = normal_speed(field, cfg.k, cfg.speed);
  const int n = surface.dim();
  double max_fv = 0.0;
  double diffusion = 0.0;
  for (std::size_t s = 0; s < field.nodes; ++s) {
    max_fv = std::max(max_fv, std::fabs(f[s] * field.v[s]));
    // |dF/dkappa_i| <= F / kappa_min for the degree -1 speeds used here;
    // kappa depends on second derivatives of r through 1/(lambda^2 v^3).
    const double lam = field.lambda[s];
    diffusion = std::max(diffusion, std::fabs(f[s]) / (field.kappa_at(0, s) * lam * lam * field.v[s] * field.v[s]));
  }
  const double ht = kPi / surface.polar_nodes();
  const double cot0 = 1.0 / std::tan(0.5 * ht);
  double h_min = ht;
  double stiffness;
  if (surface.kind() == SurfaceKind::Axisym) {
    stiffness = diffusion * (kD2Radius / (ht * ht) + kD1Radius * (n - 2) * cot0 / ht);
  } else {
    const double hp = std::sin(0.5 * ht) * 2.0 * kPi / surface.azimuth_nodes();
    h_min = std::min(ht, hp);
    stiffness = diffusion * (kD2Radius * (1.0 / (ht * ht) + 1.0 / (hp * hp)) + kD1Radius * cot0 / ht);
  }
  const double dt_hyp = max_fv > 0.0 ? cfg.cfl * h_min / max_fv : std::numeric_limits<double>::infinity();
  const double dt_par = stiffness > 0.0 ? cfg.parabolic_safety * kRk4Real / stiffness
                                        : std::numeric_limits<double>::infinity();
  return std::min(dt_hyp, dt_par);
}

GraphHypersurface rk4_step(const GraphHypersurface& surface, int k, SpeedKind speed, double dt) {
  const std::span<const double> r0 = surface.radii();
  const auto k1 = radial_velocity(surface, k, speed);
  const auto k2 = radial_velocity(shifted(surface, r0, k1, 0.5 * dt), k, speed);
  const auto k3 = radial_velocity(shifted(surface, r0, k2, 0.5 * dt), k, speed);
  const auto k4 = radial_velocity(shifted(surface, r0, k3, dt), k, speed);
  std::vector<double> dir(r0.size());
  for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
  return shifted(surface, r0, dir, dt);
}

double q_functional(const SurfaceMeasures& m, int k) {
  const int d = m.n - 1;
  require(k >= 0 && 2 * k <= d, ErrorCode::IndexOutOfRange, "Q needs 0 <= 2k <= n-1");
  const double exponent = -static_cast<double>(d - 2 * k) / d;
  return std::pow(m.area, exponent) * m.Lk[static_cast<std::size_t>(k)];
}

double q_sphere_value(int n, int k) {
  const int d = n - 1;
  return factorial_d(2 * k) * binomial_d(d, 2 * k) * std::pow(sphere_area(d), 2.0 * k / d);
}

DiagnosticRecord diagnostics(const GraphHypersurface& surface, double t, int k, SpeedKind speed) {
  const int n = surface.dim();
  const int d = n - 1;
  const CurvatureField field = curvature_field(surface);
  const SurfaceMeasures m = measure(surface, field);
  const std::vector<double> f = normal_speed(field, k, speed);
  DiagnosticRecord rec;
  rec.t = t;
  rec.Q = q_functional(m, k);
  rec.area = m.area;
  rec.volume = m.volume;
  rec.Lk = m.Lk[static_cast<std::size_t>(k)];
  rec.tilde_L = m.tilde_L[static_cast<std::size_t>(k)];
  rec.sigma = m.sigma;
  rec.W_odd = quermass(m, QuermassRoute::Recursion).at(2 * k + 1);
  rec.umbilicity = field.umbilicity_deficit();
  rec.kappa_min = field.kappa_min();

  const auto p1 = field.p_row(1);
  std::vector<double> p1f(field.nodes);
  for (std::size_t s = 0; s < field.nodes; ++s) p1f[s] = p1[s] * f[s];
  rec.dlog_area = d * field.integrate(p1f) / m.area;

  if (2 * k + 1 <= d) {
    const auto nk = field.tilde_N_row(k);
    const auto lk = field.tilde_L_row(k);
    std::vector<double> nf(field.nodes);
    std::vector<double> gap(field.nodes);
    for (std::size_t s = 0; s < field.nodes; ++s) {
      nf[s] = nk[s] * f[s];
      gap[s] = nf[s] - lk[s];
    }
    rec.tilde_N = m.tilde_N[static_cast<std::size_t>(k)];
    rec.dtilde_L_rhs = (d - 2 * k) * field.integrate(nf);
    rec.key_term = (d - 2 * k) * field.integrate(gap);
  }
  return rec;
}

MonotonicityReport check_monotonicity(const std::vector<DiagnosticRecord>& history, double factor) {
  MonotonicityReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < history.size(); ++j) {
    const double rise = history[j + 1].Q - history[j].Q;
    const double tol = factor * std::max(history[j].truncation, history[j + 1].truncation);
    rep.max_rise = std::max(rep.max_rise, rise);
    if (rise - tol > rep.worst_excess) {
      rep.worst_excess = rise - tol;
      rep.worst_index = j + 1;
    }
    if (rise > tol) rep.monotone = false;
  }
  if (history.size() < 2) rep.worst_excess = 0.0;
  return rep;
}

double fit_decay_rate(const std::vector<DiagnosticRecord>& history, double window_start) {
  if (history.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double t0 = history.front().t;
  const double t1 = history.back().t;
  const double from = t0 + window_start * (t1 - t0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& rec : history) {
    if (rec.t < from || !(rec.umbilicity > 0.0)) continue;
    const double y = std::log(rec.umbilicity);
    sx += rec.t;
    sy += y;
    sxx += rec.t * rec.t;
    sxy += rec.t * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / denom;
}

namespace {

double spatial_q_error(const GraphHypersurface& surface, double q, int k) {
  if (surface.kind() == SurfaceKind::ExactSphere) return 0.0;
  return std::fabs(q_functional(measure(surface.refined()), k) - q);
}

// Second-order difference at the middle of three possibly uneven samples.
double centred(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double h0 = t1 - t0;
  const double h1 = t2 - t1;
  return ((f2 - f1) * h0 / h1 + (f1 - f0) * h1 / h0) / (h0 + h1);
}

void append_record(FlowState& state, DiagnosticRecord rec) {
  auto& h = state.history;
  h.push_back(std::move(rec));
  if (h.size() >= 3) {
    auto& a = h[h.size() - 3];
    auto& b = h[h.size() - 2];
    auto& c = h[h.size() - 1];
    b.dlog_area_fd = centred(a.t, std::log(a.area), b.t, std::log(b.area), c.t, std::log(c.area));
    b.dtilde_L_fd = centred(a.t, a.tilde_L, b.t, b.tilde_L, c.t, c.tilde_L);
    b.fd_valid = true;
  }
}

std::size_t steps_since_record(const FlowState& state) {
  return state.history.empty() ? state.steps : state.steps - state.history.back().step;
}

}  // namespace

double advance(FlowState& state, const FlowConfig& cfg) {
  const double remaining = cfg.t_end - state.t;
  double dt = cfg.dt;
  if (cfg.adaptive) {
    dt = std::min(dt, stable_dt(state.surface, cfg));
    require(dt >= cfg.dt_floor || dt >= remaining, ErrorCode::StepRejected,
            "stable step " + std::to_string(dt) + " below the floor at t = " + std::to_string(state.t));
  } else if (state.steps == 0 && dt > stable_dt(state.surface, cfg)) {
    state.warnings.push_back("fixed dt exceeds the estimated stability bound");
  }
  const bool last = dt >= remaining;
  if (last) dt = remaining;

  GraphHypersurface next = state.surface;
  for (;;) {
    try {
      next = rk4_step(state.surface, state.k, cfg.speed, dt);
      break;
    } catch (const Error& e) {
      if (!cfg.adaptive || (e.code() != ErrorCode::GraphDegenerate && e.code() != ErrorCode::DivisionBySmall)) throw;
      dt *= 0.5;
      ++state.rejected_steps;
      require(dt >= cfg.dt_floor, ErrorCode::StepRejected,
              std::string("step failed down to the dt floor: ") + e.what());
    }
  }
  if (cfg.filter) {
    next = next.with_radii(cosine_filtered(next.radii(), cfg.filter_strength, cfg.filter_order));
  }
  const GraphHypersurface previous = std::move(state.surface);
  state.surface = std::move(next);
  state.t = (dt == remaining) ? cfg.t_end : state.t + dt;
  ++state.steps;

  if (state.steps % static_cast<std::size_t>(cfg.cadence) == 0 || state.t >= cfg.t_end) {
    DiagnosticRecord rec = diagnostics(state.surface, state.t, state.k, cfg.speed);
    rec.step = state.steps;
    rec.dt = dt;
    rec.truncation = 64.0 * kEps * std::fabs(rec.Q);
    if (cfg.truncation_estimate) {
      const GraphHypersurface half =
          rk4_step(rk4_step(previous, state.k, cfg.speed, 0.5 * dt), state.k, cfg.speed, 0.5 * dt);
      const double q_half = q_functional(measure(half), state.k);
      rec.truncation += std::fabs(rec.Q - q_half) * static_cast<double>(steps_since_record(state));
      rec.truncation += spatial_q_error(state.surface, rec.Q, state.k);
    }
    append_record(state, std::move(rec));
  }
  return dt;
}

FlowResult run_flow(FlowState state, const FlowConfig& cfg, const RecordCallback& on_record) {
  validate(cfg, state.surface);
  FlowSummary summary;
  summary.q_sphere = q_sphere_value(state.surface.dim(), state.k);
  const int d = state.surface.dim() - 1;

  if (state.history.empty()) {
    DiagnosticRecord rec = diagnostics(state.surface, state.t, state.k, cfg.speed);
    rec.step = state.steps;
    rec.truncation = 64.0 * kEps * std::fabs(rec.Q);
    if (cfg.truncation_estimate) rec.truncation += spatial_q_error(state.surface, rec.Q, state.k);
    append_record(state, std::move(rec));
    if (on_record) on_record(state.history.back());
  }
  const bool initially_convex = state.history.front().kappa_min >= 1.0 - kDefaultConeTol;
  summary.kappa_min = state.history.front().kappa_min;
  if (!initially_convex) state.warnings.push_back("initial surface is not horospherically convex");

  summary.stop = FlowStop::TimeReached;
  while (state.t < cfg.t_end) {
    const std::size_t before = state.history.size();
    advance(state, cfg);
    if (state.history.size() == before) continue;
    const DiagnosticRecord& rec = state.history.back();
    if (on_record) on_record(rec);
    summary.kappa_min = std::min(summary.kappa_min, rec.kappa_min);
    if (initially_convex && summary.hconvex_preserved && rec.kappa_min < 1.0 - kDefaultConeTol) {
      summary.hconvex_preserved = false;
      state.warnings.push_back("horospherical convexity lost at t = " + std::to_string(rec.t));
    }
    const auto& prev = state.history[state.history.size() - 2];
    const double rise = rec.Q - prev.Q;
    const double tol = cfg.monotonicity_factor * std::max(prev.truncation, rec.truncation);
    if (rise > tol && cfg.abort_on_violation) {
      summary.stop = FlowStop::MonotonicityViolation;
      break;
    }
    if (cfg.umbilicity_stop > 0.0 && rec.umbilicity < cfg.umbilicity_stop) {
      summary.stop = FlowStop::Umbilic;
      break;
    }
    if (cfg.q_plateau > 0.0 && std::fabs(rise) < cfg.q_plateau * std::fabs(rec.Q)) {
      summary.stop = FlowStop::Plateau;
      break;
    }
  }

  summary.steps = state.steps;
  summary.rejected_steps = state.rejected_steps;
  summary.t_final = state.t;
  summary.q_initial = state.history.front().Q;
  summary.q_final = state.history.back().Q;
  summary.monotonicity = check_monotonicity(state.history, cfg.monotonicity_factor);
  summary.min_area_growth_excess = std::numeric_limits<double>::infinity();
  for (const auto& rec : state.history) {
    summary.min_area_growth_excess = std::min(summary.min_area_growth_excess, rec.dlog_area - d);
  }
  summary.decay_rate = fit_decay_rate(state.history);
  return FlowResult{std::move(state), summary};
}

}  // namespace horoflow
