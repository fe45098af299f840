#pragma once

// Inverse curvature flow dX/dt = F nu of star-shaped hypersurfaces, evolved
// as dr/dt = F v on the radial graph.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "horoflow/hypersurface.hpp"

namespace horoflow {

enum class SpeedKind {
  Ratio,        // p_{2k-1} / p_{2k}
  InverseMean,  // 1 / p_1
};

std::string to_string(SpeedKind kind);

struct FlowConfig {
  int k = 1;
  SpeedKind speed = SpeedKind::Ratio;
  /// Adaptive: dt = min(dt, hyperbolic bound, parabolic bound) each step.
  /// Fixed: dt as given (a warning is recorded if it exceeds the bounds).
  bool adaptive = true;
  double dt = 1e-2;
  double cfl = 0.5;
  double parabolic_safety = 0.5;
  double dt_floor = 1e-6;
  double t_end = 1.0;
  /// Stop once max |kappa_i - 1| drops below this; 0 disables.
  double umbilicity_stop = 1e-3;
  /// Stop once |dQ| / Q between records drops below this; 0 disables.
  double q_plateau = 0.0;
  /// Record diagnostics every `cadence` steps (and at the final step).
  int cadence = 1;
  /// Per-record truncation estimates: step doubling in time, resampling at
  /// twice the resolution in space.
  bool truncation_estimate = true;
  double monotonicity_factor = 10.0;
  bool abort_on_violation = true;
  /// Exponential damping exp(-strength (l/N)^order) of the cosine modes of an
  /// axisymmetric profile after every step.
  bool filter = false;
  double filter_strength = 36.0;
  int filter_order = 16;
};

struct DiagnosticRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  double Q = 0.0;
  double area = 0.0;
  double volume = 0.0;
  double Lk = 0.0;
  double tilde_L = 0.0;
  double tilde_N = 0.0;
  std::vector<double> sigma;
  double W_odd = 0.0;  // W_{2k+1}, recursion route
  double umbilicity = 0.0;
  double kappa_min = 0.0;
  double dlog_area = 0.0;     // (n-1) \int p_1 F / |Sigma|
  double dlog_area_fd = 0.0;  // centred difference of log area over the history
  double dtilde_L_rhs = 0.0;  // (n-1-2k) \int N~_k F
  double dtilde_L_fd = 0.0;   // centred difference of \int L~_k
  double key_term = 0.0;      // (n-1-2k) \int (N~_k F - L~_k), non-positive
  double truncation = 0.0;    // estimated error of Q
  bool fd_valid = false;
};

struct FlowState {
  double t = 0.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  GraphHypersurface surface;
  int k = 1;
  std::vector<DiagnosticRecord> history;
  std::vector<std::string> warnings;

  explicit FlowState(GraphHypersurface s, int order = 1, double t0 = 0.0)
      : t(t0), surface(std::move(s)), k(order) {}
};

enum class FlowStop { TimeReached, Umbilic, Plateau, MonotonicityViolation };

std::string to_string(FlowStop stop);

/// F v at a single point. Throws DivisionBySmall when the denominator
/// p_{2k} (or p_1) is below the division floor.
double radial_speed(const PointFrame& frame, int k, SpeedKind speed = SpeedKind::Ratio);

/// Normal speed F at every node of a curvature field.
std::vector<double> normal_speed(const CurvatureField& field, int k, SpeedKind speed);

/// dr/dt at every node.
std::vector<double> radial_velocity(const GraphHypersurface& surface, int k, SpeedKind speed);

/// Largest stable step for the current surface under `cfg`.
double stable_dt(const GraphHypersurface& surface, const FlowConfig& cfg);

/// One classical Runge-Kutta 4 step; throws GraphDegenerate when a stage
/// leaves the positive finite radii.
GraphHypersurface rk4_step(const GraphHypersurface& surface, int k, SpeedKind speed, double dt);

/// Diagnostics of a surface at time t (finite-difference fields left unset).
DiagnosticRecord diagnostics(const GraphHypersurface& surface, double t, int k, SpeedKind speed);

/// Q = |Sigma|^{-(n-1-2k)/(n-1)} \int L_k.
double q_functional(const SurfaceMeasures& m, int k);

/// (2k)! C(n-1,2k) omega_{n-1}^{2k/(n-1)}: the value of Q on every sphere.
double q_sphere_value(int n, int k);

struct MonotonicityReport {
  bool monotone = true;
  std::size_t worst_index = 0;  // record where Q rose the most relative to its band
  double worst_excess = 0.0;    // max of (Q_{j+1} - Q_j) - tol_j
  double max_rise = 0.0;        // max of Q_{j+1} - Q_j
};

MonotonicityReport check_monotonicity(const std::vector<DiagnosticRecord>& history, double factor);

/// Least-squares slope of log(umbilicity) against t over the records with
/// t >= t_first + window_start * (t_last - t_first).
double fit_decay_rate(const std::vector<DiagnosticRecord>& history, double window_start = 0.5);

struct FlowSummary {
  FlowStop stop = FlowStop::TimeReached;
  std::size_t steps = 0;
  double t_final = 0.0;
  double q_initial = 0.0;
  double q_final = 0.0;
  double q_sphere = 0.0;
  MonotonicityReport monotonicity;
  double min_area_growth_excess = 0.0;  // min over records of dlog_area - (n-1)
  double decay_rate = 0.0;
  double kappa_min = 0.0;               // over the whole run
  bool hconvex_preserved = true;
  std::size_t rejected_steps = 0;
};

struct FlowResult {
  FlowState state;
  FlowSummary summary;
};

using RecordCallback = std::function<void(const DiagnosticRecord&)>;

/// Takes one step (adaptive or fixed dt) and appends a record at cadence.
/// Returns the step size used.
double advance(FlowState& state, const FlowConfig& cfg);

/// Integrates until a stop criterion fires. Errors (StepRejected,
/// GraphDegenerate, DivisionBySmall) propagate.
FlowResult run_flow(FlowState state, const FlowConfig& cfg, const RecordCallback& on_record = {});

void validate(const FlowConfig& cfg, const GraphHypersurface& surface);

}  // namespace horoflow
