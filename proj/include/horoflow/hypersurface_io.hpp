#pragma once

// Hypersurface definition files.
//
//   {"n": 5, "kind": "axisym", "resolution": 128,
//    "profile": {"type": "legendre", "coefficients": [1.0, 0.0, 0.05]}}
//
// kind is one of sphere (needs "radius"), axisym (resolution N) or grid3
// (n = 3, resolution [N, M]). Profile types: geodesic_sphere {radius, offset,
// axis: [polar, azimuth]}, legendre {coefficients}, harmonics {base, modes:
// [{l, m, amplitude}]}, samples {values}. Unknown keys are rejected.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "horoflow/hypersurface.hpp"

namespace horoflow {

GraphHypersurface surface_from_json(const nlohmann::json& doc);
/// Profile-backed surfaces keep their profile; others are written as samples.
nlohmann::json surface_to_json(const GraphHypersurface& surface);
/// Always writes explicit samples (restart snapshots).
nlohmann::json surface_samples_json(const GraphHypersurface& surface);

nlohmann::json profile_to_json(const RadialProfile& profile);
RadialProfile profile_from_json(const nlohmann::json& doc);

/// Throws Error(Io) when unreadable and Error(Config) on malformed JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

GraphHypersurface load_surface(const std::filesystem::path& path);

/// Rejects keys of `doc` outside `allowed`; `where` names the object in the message.
void require_known_keys(const nlohmann::json& doc, std::initializer_list<const char*> allowed,
                        const std::string& where);

}  // namespace horoflow
