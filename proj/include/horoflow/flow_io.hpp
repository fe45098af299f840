#pragma once

// Flow outputs: CSV / JSON time series, run summaries and restart snapshots.

#include <string>
#include <vector>

#include <json.hpp>

#include "horoflow/flow.hpp"

namespace horoflow {

/// Doubles as %.17g so files round-trip and are byte-stable.
std::string format_double(double x);

/// One row per record; sigma_0..sigma_{n-1} as separate columns.
std::string history_csv(const std::vector<DiagnosticRecord>& history, int n);
nlohmann::json history_json(const std::vector<DiagnosticRecord>& history);

nlohmann::json flow_config_json(const FlowConfig& cfg);
nlohmann::json flow_summary_json(const FlowSummary& summary);

SpeedKind speed_from_string(const std::string& name);

/// Radii samples plus time, step count, order and speed.
nlohmann::json restart_json(const FlowState& state, SpeedKind speed);
/// Inverse of restart_json; the history starts empty.
FlowState state_from_restart(const nlohmann::json& doc, SpeedKind* speed = nullptr);

}  // namespace horoflow
