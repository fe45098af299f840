#include <doctest.h>

#include <cmath>
#include <limits>

#include "horoflow/error.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/flow_io.hpp"

using namespace horoflow;

namespace {

// Spheres expand with normal speed tanh(rho), so sinh(rho(t)) = sinh(rho0) e^t.
double sphere_radius_at(double rho0, double t) { return std::asinh(std::sinh(rho0) * std::exp(t)); }

FlowConfig fixed(double dt, double t_end, int k = 1) {
  FlowConfig cfg;
  cfg.k = k;
  cfg.adaptive = false;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.umbilicity_stop = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("exact spheres follow the sinh law for every order and speed") {
  for (int n : {3, 5, 7}) {
    for (int k = 1; 2 * k <= n - 1; ++k) {
      for (auto speed : {SpeedKind::Ratio, SpeedKind::InverseMean}) {
        auto cfg = fixed(1e-3, 1.0, k);
        cfg.speed = speed;
        cfg.truncation_estimate = false;
        cfg.cadence = 100;
        auto res = run_flow(FlowState(GraphHypersurface::exact_sphere(n, 0.7), k), cfg);
        CHECK(res.state.t == doctest::Approx(1.0));
        CHECK(res.state.surface.sphere_radius() == doctest::Approx(sphere_radius_at(0.7, 1.0)).epsilon(1e-10));
        CHECK(res.summary.q_final == doctest::Approx(res.summary.q_initial).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("sphere on the grid keeps Q constant and stays centred") {
  auto cfg = fixed(5e-3, 0.5);
  cfg.cadence = 10;
  auto res = run_flow(FlowState(GraphHypersurface::axisym(5, 32, GeodesicSphereProfile{1.0}), 1), cfg);
  CHECK(std::fabs(res.summary.q_final / res.summary.q_initial - 1.0) < 1e-10);
  for (double r : res.state.surface.radii()) CHECK(r == doctest::Approx(sphere_radius_at(1.0, 0.5)).epsilon(1e-9));
  CHECK(res.summary.q_sphere == doctest::Approx(q_sphere_value(5, 1)));
}

TEST_CASE("perturbed sphere: monotone Q, area growth and the evolution identities") {
  FlowConfig cfg;
  cfg.k = 1;
  cfg.t_end = 1.5;
  cfg.umbilicity_stop = 0.0;
  auto res = run_flow(FlowState(GraphHypersurface::axisym(5, 48, LegendreProfile{{1.0, 0.0, 0.05}}), 1), cfg);
  const auto& h = res.state.history;
  REQUIRE(h.size() > 10);
  CHECK(res.summary.stop == FlowStop::TimeReached);
  CHECK(res.summary.monotonicity.monotone);
  CHECK(res.summary.q_final < res.summary.q_initial);
  CHECK(res.summary.q_final > res.summary.q_sphere);
  CHECK(res.summary.min_area_growth_excess >= -1e-4);
  CHECK(res.summary.hconvex_preserved);
  for (const auto& r : h) {
    CHECK(r.key_term <= 1e-9 * std::fabs(r.tilde_L));
    if (!r.fd_valid) continue;
    CHECK(r.dlog_area_fd == doctest::Approx(r.dlog_area).epsilon(1e-4));
    CHECK(r.dtilde_L_fd == doctest::Approx(r.dtilde_L_rhs).epsilon(1e-3));
  }
  CHECK(h.back().umbilicity < h.front().umbilicity);
}

TEST_CASE("Gauss-Bonnet endpoint: Q is constant when n - 1 = 2k") {
  FlowConfig cfg;
  cfg.k = 2;
  cfg.t_end = 0.5;
  cfg.umbilicity_stop = 0.0;
  auto res = run_flow(FlowState(GraphHypersurface::axisym(5, 48, LegendreProfile{{1.0, 0.0, 0.04}}), 2), cfg);
  CHECK(res.summary.q_final == doctest::Approx(res.summary.q_initial).epsilon(1e-6));
  CHECK(res.summary.monotonicity.monotone);
}

TEST_CASE("stable step") {
  CHECK(std::isinf(stable_dt(GraphHypersurface::exact_sphere(5, 1.0), FlowConfig{})));
  FlowConfig cfg;
  cfg.dt = 1.0;
  const LegendreProfile p{{1.0, 0.0, 0.05}};
  const double a = stable_dt(GraphHypersurface::axisym(5, 32, p), cfg);
  const double b = stable_dt(GraphHypersurface::axisym(5, 64, p), cfg);
  CHECK(a > 0.0);
  CHECK(b < a / 2.5);  // parabolic: ~ h^2
}

TEST_CASE("speed guards") {
  PointFrame f;
  f.lambda = 1.0;
  f.v = 1.0;
  f.kappa = {0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(radial_speed(f, 1), Error);
  f.kappa = {1.0, 2.0, 3.0, 4.0};
  // p_1 / p_2 for kappa = (1,2,3,4): p_1 = 10/4, p_2 = 35/6
  CHECK(radial_speed(f, 1) == doctest::Approx((10.0 / 4.0) / (35.0 / 6.0)));
  CHECK(radial_speed(f, 1, SpeedKind::InverseMean) == doctest::Approx(4.0 / 10.0));
}

TEST_CASE("invalid configurations") {
  const auto s = GraphHypersurface::axisym(5, 32, GeodesicSphereProfile{1.0});
  FlowConfig cfg;
  cfg.k = 3;
  CHECK_THROWS_AS(validate(cfg, s), Error);
  cfg.k = 1;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(validate(cfg, s), Error);
  cfg.dt = 1e-2;
  cfg.cadence = 0;
  CHECK_THROWS_AS(validate(cfg, s), Error);
}

TEST_CASE("monotonicity band and decay fit on synthetic histories") {
  std::vector<DiagnosticRecord> h(20);
  for (std::size_t j = 0; j < h.size(); ++j) {
    h[j].t = 0.1 * static_cast<double>(j);
    h[j].Q = 10.0 - 0.01 * static_cast<double>(j);
    h[j].truncation = 1e-6;
    h[j].umbilicity = 0.5 * std::exp(-1.5 * h[j].t);
  }
  CHECK(check_monotonicity(h, 10.0).monotone);
  CHECK(fit_decay_rate(h) == doctest::Approx(-1.5).epsilon(1e-10));
  h[7].Q = h[6].Q + 5e-6;  // inside the band of 1e-5
  CHECK(check_monotonicity(h, 10.0).monotone);
  h[7].Q = h[6].Q + 1e-4;
  const auto rep = check_monotonicity(h, 10.0);
  CHECK_FALSE(rep.monotone);
  CHECK(rep.worst_index == 7);  // the record that rose
}

TEST_CASE("restart snapshots round-trip") {
  FlowConfig cfg = fixed(1e-2, 0.05);
  auto res = run_flow(FlowState(GraphHypersurface::axisym(4, 32, LegendreProfile{{1.0, 0.0, 0.03}}), 1), cfg);
  SpeedKind speed = SpeedKind::InverseMean;
  const auto back = state_from_restart(nlohmann::json::parse(restart_json(res.state, SpeedKind::Ratio).dump()), &speed);
  CHECK(speed == SpeedKind::Ratio);
  CHECK(back.t == res.state.t);
  CHECK(back.steps == res.state.steps);
  for (std::size_t i = 0; i < back.surface.node_count(); ++i) CHECK(back.surface.radii()[i] == res.state.surface.radii()[i]);

  // continuing from the snapshot reproduces the uninterrupted run exactly
  FlowConfig longer = fixed(1e-2, 0.1);
  auto whole = run_flow(FlowState(GraphHypersurface::axisym(4, 32, LegendreProfile{{1.0, 0.0, 0.03}}), 1), longer);
  auto resumed = run_flow(back, longer);
  for (std::size_t i = 0; i < whole.state.surface.node_count(); ++i)
    CHECK(resumed.state.surface.radii()[i] == whole.state.surface.radii()[i]);
}

TEST_CASE("CSV output is stable") {
  FlowConfig cfg = fixed(1e-2, 0.03);
  auto a = run_flow(FlowState(GraphHypersurface::axisym(4, 16, LegendreProfile{{1.0, 0.0, 0.03}}), 1), cfg);
  auto b = run_flow(FlowState(GraphHypersurface::axisym(4, 16, LegendreProfile{{1.0, 0.0, 0.03}}), 1), cfg);
  const auto csv = history_csv(a.state.history, 4);
  CHECK(csv == history_csv(b.state.history, 4));
  CHECK(csv.rfind("step,t,dt,Q,area,volume,Lk,tilde_L,tilde_N,sigma_0,sigma_1,sigma_2,sigma_3,W_odd", 0) == 0);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
