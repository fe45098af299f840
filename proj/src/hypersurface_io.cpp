#include "horoflow/hypersurface_io.hpp"

#include <fstream>
#include <sstream>

#include "horoflow/error.hpp"

namespace horoflow {

using nlohmann::json;

void require_known_keys(const json& doc, std::initializer_list<const char*> allowed, const std::string& where) {
  require(doc.is_object(), ErrorCode::Config, where + " must be a JSON object");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    require(known, ErrorCode::Config, "unknown key '" + item.key() + "' in " + where);
  }
}

namespace {

template <typename T>
T get_field(const json& doc, const char* key, const std::string& where) {
  require(doc.contains(key), ErrorCode::Config, "missing key '" + std::string(key) + "' in " + where);
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::Config, "key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback, const std::string& where) {
  if (!doc.contains(key)) return fallback;
  return get_field<T>(doc, key, where);
}

}  // namespace

RadialProfile profile_from_json(const json& doc) {
  require(doc.is_object(), ErrorCode::Config, "profile must be a JSON object");
  const auto type = get_field<std::string>(doc, "type", "profile");
  if (type == "geodesic_sphere") {
    require_known_keys(doc, {"type", "radius", "offset", "axis"}, "geodesic_sphere profile");
    GeodesicSphereProfile p;
    p.radius = get_field<double>(doc, "radius", "geodesic_sphere profile");
    p.offset = get_or<double>(doc, "offset", 0.0, "geodesic_sphere profile");
    if (doc.contains("axis")) {
      auto axis = get_field<std::vector<double>>(doc, "axis", "geodesic_sphere profile");
      require(axis.size() == 2, ErrorCode::Config, "geodesic_sphere axis must be [polar, azimuth]");
      p.axis_polar = axis[0];
      p.axis_azimuth = axis[1];
    }
    return p;
  }
  if (type == "legendre") {
    require_known_keys(doc, {"type", "coefficients"}, "legendre profile");
    LegendreProfile p;
    p.coefficients = get_field<std::vector<double>>(doc, "coefficients", "legendre profile");
    require(!p.coefficients.empty(), ErrorCode::Config, "legendre profile needs at least one coefficient");
    return p;
  }
  if (type == "harmonics") {
    require_known_keys(doc, {"type", "base", "modes"}, "harmonics profile");
    HarmonicProfile p;
    p.base = get_field<double>(doc, "base", "harmonics profile");
    if (doc.contains("modes")) {
      require(doc["modes"].is_array(), ErrorCode::Config, "harmonics modes must be an array");
      for (const auto& m : doc["modes"]) {
        require_known_keys(m, {"l", "m", "amplitude"}, "harmonic mode");
        HarmonicMode mode;
        mode.l = get_field<int>(m, "l", "harmonic mode");
        mode.m = get_or<int>(m, "m", 0, "harmonic mode");
        mode.amplitude = get_field<double>(m, "amplitude", "harmonic mode");
        require(mode.l >= 0 && std::abs(mode.m) <= mode.l, ErrorCode::Config, "harmonic mode needs |m| <= l");
        p.modes.push_back(mode);
      }
    }
    return p;
  }
  fail(ErrorCode::Config, "unknown profile type '" + type + "'");
}

json profile_to_json(const RadialProfile& profile) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GeodesicSphereProfile>) {
          return {{"type", "geodesic_sphere"},
                  {"radius", p.radius},
                  {"offset", p.offset},
                  {"axis", {p.axis_polar, p.axis_azimuth}}};
        } else if constexpr (std::is_same_v<P, LegendreProfile>) {
          return {{"type", "legendre"}, {"coefficients", p.coefficients}};
        } else {
          json modes = json::array();
          for (const auto& m : p.modes) modes.push_back({{"l", m.l}, {"m", m.m}, {"amplitude", m.amplitude}});
          return {{"type", "harmonics"}, {"base", p.base}, {"modes", modes}};
        }
      },
      profile);
}

GraphHypersurface surface_from_json(const json& doc) {
  require_known_keys(doc, {"n", "kind", "radius", "resolution", "profile"}, "hypersurface");
  const auto kind = get_field<std::string>(doc, "kind", "hypersurface");
  if (kind == "sphere") {
    require(!doc.contains("profile") && !doc.contains("resolution"), ErrorCode::Config,
            "a sphere takes only n and radius");
    return GraphHypersurface::exact_sphere(get_field<int>(doc, "n", "hypersurface"),
                                           get_field<double>(doc, "radius", "hypersurface"));
  }
  require(!doc.contains("radius"), ErrorCode::Config, "radius applies to kind 'sphere' only; use a profile");
  require(doc.contains("profile"), ErrorCode::Config, "missing key 'profile' in hypersurface");
  const json& prof = doc["profile"];
  const bool samples = prof.is_object() && prof.value("type", "") == "samples";
  if (samples) require_known_keys(prof, {"type", "values"}, "samples profile");

  if (kind == "axisym") {
    const int n = get_field<int>(doc, "n", "hypersurface");
    if (samples) {
      auto values = get_field<std::vector<double>>(prof, "values", "samples profile");
      if (doc.contains("resolution"))
        require(get_field<int>(doc, "resolution", "hypersurface") == static_cast<int>(values.size()),
                ErrorCode::Config, "resolution does not match the number of samples");
      return GraphHypersurface::axisym_from_samples(n, std::move(values));
    }
    return GraphHypersurface::axisym(n, get_field<int>(doc, "resolution", "hypersurface"), profile_from_json(prof));
  }
  if (kind == "grid3") {
    require(get_or<int>(doc, "n", 3, "hypersurface") == 3, ErrorCode::Config, "grid3 surfaces live in H^3 (n = 3)");
    auto res = get_field<std::vector<int>>(doc, "resolution", "hypersurface");
    require(res.size() == 2, ErrorCode::Config, "grid3 resolution must be [polar, azimuth]");
    if (samples)
      return GraphHypersurface::grid3_from_samples(res[0], res[1],
                                                   get_field<std::vector<double>>(prof, "values", "samples profile"));
    return GraphHypersurface::grid3(res[0], res[1], profile_from_json(prof));
  }
  fail(ErrorCode::Config, "unknown hypersurface kind '" + kind + "'");
}

json surface_samples_json(const GraphHypersurface& s) {
  json doc{{"n", s.dim()}, {"kind", to_string(s.kind())}};
  switch (s.kind()) {
    case SurfaceKind::ExactSphere:
      doc["radius"] = s.sphere_radius();
      return doc;
    case SurfaceKind::Axisym:
      doc["resolution"] = s.polar_nodes();
      break;
    case SurfaceKind::Grid3:
      doc["resolution"] = {s.polar_nodes(), s.azimuth_nodes()};
      break;
  }
  doc["profile"] = {{"type", "samples"}, {"values", std::vector<double>(s.radii().begin(), s.radii().end())}};
  return doc;
}

json surface_to_json(const GraphHypersurface& s) {
  json doc = surface_samples_json(s);
  if (s.kind() != SurfaceKind::ExactSphere && s.profile()) doc["profile"] = profile_to_json(*s.profile());
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Config, path.string() + " is not valid JSON (byte " + std::to_string(e.byte) + ")");
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + path.string());
  out << text;
  out.flush();
  require(static_cast<bool>(out), ErrorCode::Io, "write failed for " + path.string());
}

GraphHypersurface load_surface(const std::filesystem::path& path) { return surface_from_json(read_json_file(path)); }

}  // namespace horoflow
