#include "horoflow/flow_io.hpp"

#include <cstdio>
#include <sstream>

#include "horoflow/error.hpp"
#include "horoflow/hypersurface_io.hpp"

namespace horoflow {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string history_csv(const std::vector<DiagnosticRecord>& history, int n) {
  std::ostringstream out;
  out << "step,t,dt,Q,area,volume,Lk,tilde_L,tilde_N";
  for (int j = 0; j < n; ++j) out << ",sigma_" << j;
  out << ",W_odd,umbilicity,kappa_min,dlog_area,dlog_area_fd,dtilde_L_rhs,dtilde_L_fd,key_term,truncation,"
         "fd_valid\n";
  for (const auto& r : history) {
    out << r.step;
    for (double x : {r.t, r.dt, r.Q, r.area, r.volume, r.Lk, r.tilde_L, r.tilde_N}) out << ',' << format_double(x);
    for (int j = 0; j < n; ++j)
      out << ',' << format_double(j < static_cast<int>(r.sigma.size()) ? r.sigma[j] : 0.0);
    for (double x : {r.W_odd, r.umbilicity, r.kappa_min, r.dlog_area, r.dlog_area_fd, r.dtilde_L_rhs,
                     r.dtilde_L_fd, r.key_term, r.truncation})
      out << ',' << format_double(x);
    out << ',' << (r.fd_valid ? 1 : 0) << '\n';
  }
  return out.str();
}

json history_json(const std::vector<DiagnosticRecord>& history) {
  json rows = json::array();
  for (const auto& r : history) {
    rows.push_back({{"step", r.step},
                    {"t", r.t},
                    {"dt", r.dt},
                    {"Q", r.Q},
                    {"area", r.area},
                    {"volume", r.volume},
                    {"Lk", r.Lk},
                    {"tilde_L", r.tilde_L},
                    {"tilde_N", r.tilde_N},
                    {"sigma", r.sigma},
                    {"W_odd", r.W_odd},
                    {"umbilicity", r.umbilicity},
                    {"kappa_min", r.kappa_min},
                    {"dlog_area", r.dlog_area},
                    {"dlog_area_fd", r.dlog_area_fd},
                    {"dtilde_L_rhs", r.dtilde_L_rhs},
                    {"dtilde_L_fd", r.dtilde_L_fd},
                    {"key_term", r.key_term},
                    {"truncation", r.truncation},
                    {"fd_valid", r.fd_valid}});
  }
  return rows;
}

json flow_config_json(const FlowConfig& c) {
  return {{"k", c.k},
          {"speed", to_string(c.speed)},
          {"adaptive", c.adaptive},
          {"dt", c.dt},
          {"cfl", c.cfl},
          {"parabolic_safety", c.parabolic_safety},
          {"dt_floor", c.dt_floor},
          {"t_end", c.t_end},
          {"umbilicity_stop", c.umbilicity_stop},
          {"q_plateau", c.q_plateau},
          {"cadence", c.cadence},
          {"truncation_estimate", c.truncation_estimate},
          {"monotonicity_factor", c.monotonicity_factor},
          {"abort_on_violation", c.abort_on_violation},
          {"filter", c.filter},
          {"filter_strength", c.filter_strength},
          {"filter_order", c.filter_order}};
}

json flow_summary_json(const FlowSummary& s) {
  return {{"stop", to_string(s.stop)},
          {"steps", s.steps},
          {"rejected_steps", s.rejected_steps},
          {"t_final", s.t_final},
          {"q_initial", s.q_initial},
          {"q_final", s.q_final},
          {"q_sphere", s.q_sphere},
          {"monotone", s.monotonicity.monotone},
          {"worst_index", s.monotonicity.worst_index},
          {"worst_excess", s.monotonicity.worst_excess},
          {"max_rise", s.monotonicity.max_rise},
          {"min_area_growth_excess", s.min_area_growth_excess},
          {"decay_rate", s.decay_rate},
          {"kappa_min", s.kappa_min},
          {"hconvex_preserved", s.hconvex_preserved}};
}

SpeedKind speed_from_string(const std::string& name) {
  if (name == to_string(SpeedKind::Ratio)) return SpeedKind::Ratio;
  if (name == to_string(SpeedKind::InverseMean)) return SpeedKind::InverseMean;
  fail(ErrorCode::Config, "unknown speed '" + name + "'");
}

json restart_json(const FlowState& state, SpeedKind speed) {
  return {{"format", "horoflow-restart"},
          {"t", state.t},
          {"steps", state.steps},
          {"k", state.k},
          {"speed", to_string(speed)},
          {"surface", surface_samples_json(state.surface)}};
}

FlowState state_from_restart(const json& doc, SpeedKind* speed) {
  require_known_keys(doc, {"format", "t", "steps", "k", "speed", "surface"}, "restart snapshot");
  require(doc.value("format", "") == "horoflow-restart", ErrorCode::Config, "not a restart snapshot");
  try {
    FlowState state(surface_from_json(doc.at("surface")), doc.at("k").get<int>(), doc.at("t").get<double>());
    state.steps = doc.at("steps").get<std::size_t>();
    if (speed) *speed = speed_from_string(doc.at("speed").get<std::string>());
    return state;
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed restart snapshot: ") + e.what());
  }
}

}  // namespace horoflow
