#include "horoflow/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "horoflow/error.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/flow_io.hpp"
#include "horoflow/hypersurface_io.hpp"
#include "horoflow/kernels/kernels.hpp"
#include "horoflow/parallel.hpp"
#include "horoflow/verify.hpp"
#include "horoflow/verify_io.hpp"

#ifndef HOROFLOW_VERSION
#define HOROFLOW_VERSION "unknown"
#endif
#ifndef HOROFLOW_GIT_REV
#define HOROFLOW_GIT_REV "unknown"
#endif

namespace horoflow::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class Kind { Int, Real, Text, Flag, Seed, Step };

struct OptionDef {
  std::string name;
  Kind kind;
  json fallback;
  std::string help;
};

std::vector<OptionDef> output_options() {
  return {{"output", Kind::Text, ".", "output directory"},
          {"format", Kind::Text, "csv", "table format: csv | json"}};
}

std::vector<OptionDef> source_options() {
  return {{"input", Kind::Text, "", "hypersurface definition file (JSON)"},
          {"generator", Kind::Text, "perturbed", "surface generator when no input: sphere | perturbed"},
          {"n", Kind::Int, 5, "ambient dimension of generated surfaces"},
          {"seed", Kind::Seed, 1, "generator seed"},
          {"radius-min", Kind::Real, 0.5, "smallest generated radius"},
          {"radius-max", Kind::Real, 2.0, "largest generated radius"},
          {"max-mode", Kind::Int, 4, "highest perturbation mode"},
          {"full-grid", Kind::Flag, false, "generate n = 3 surfaces on the full latitude-longitude grid"},
          {"resolution", Kind::Int, 0, "polar nodes; 0 keeps the input grid (64 for generated surfaces)"},
          {"azimuth", Kind::Int, 0, "azimuth nodes of a full grid; 0 means twice the polar nodes"}};
}

std::vector<OptionDef> append(std::vector<OptionDef> a, const std::vector<OptionDef>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<OptionDef> flow_options() {
  auto defs = append(output_options(), source_options());
  return append(defs, {
      {"sample", Kind::Int, 0, "index of the generated sample to evolve"},
      {"restart", Kind::Text, "", "restart snapshot to continue from (replaces the surface source)"},
      {"k", Kind::Int, 1, "order k of the speed p_{2k-1}/p_{2k}"},
      {"speed", Kind::Text, "ratio", "ratio | inverse_mean"},
      {"dt", Kind::Step, "auto", "time step, or auto for the adaptive stable step"},
      {"dt-max", Kind::Real, 1e-2, "upper bound of the adaptive step"},
      {"t-end", Kind::Real, 1.0, "final time"},
      {"cfl", Kind::Real, 0.5, "hyperbolic step safety factor"},
      {"parabolic-safety", Kind::Real, 0.5, "parabolic step safety factor"},
      {"dt-floor", Kind::Real, 1e-6, "smallest step before the run is rejected"},
      {"umbilicity-stop", Kind::Real, 1e-3, "stop once max |kappa - 1| is below this (0 disables)"},
      {"q-plateau", Kind::Real, 0.0, "stop once |dQ|/Q between records is below this (0 disables)"},
      {"cadence", Kind::Int, 1, "steps between diagnostic records"},
      {"truncation", Kind::Flag, true, "estimate truncation error of Q per record"},
      {"monotonicity-factor", Kind::Real, 10.0, "width of the monotonicity band in truncation estimates"},
      {"abort-on-violation", Kind::Flag, true, "stop when Q rises beyond the band"},
      {"filter", Kind::Flag, false, "damp the highest profile modes after every step"},
      {"filter-strength", Kind::Real, 36.0, "filter strength"},
      {"filter-order", Kind::Int, 16, "filter order"},
  });
}

std::vector<OptionDef> verify_options() {
  auto defs = append(output_options(), source_options());
  return append(defs, {
      {"count", Kind::Int, 1, "number of generated samples"},
      {"k", Kind::Int, 1, "order k"},
      {"thm", Kind::Text, "all", "all | 1.1 | 1.2 | 1.3 | 6.1 | 6.2 | gs | gs2 | conjecture | routes"},
      {"route", Kind::Text, "lemma_aimk", "quermass route for 1.3: recursion | lemma_aimk | lemma_ss"},
      {"tolerance", Kind::Real, kAnalyticTol, "relative tolerance of closed-form (sphere) evaluations"},
  });
}

std::vector<OptionDef> symcheck_options() {
  return append(output_options(), {
      {"n", Kind::Int, 7, "ambient dimension (curvature vectors have n-1 entries)"},
      {"k", Kind::Int, 1, "order k, 2k+1 <= n-1"},
      {"samples", Kind::Int, 1000, "number of curvature vectors"},
      {"seed", Kind::Seed, 1, "sample seed"},
      {"cone", Kind::Text, "hconvex", "hconvex | unitsub"},
      {"exact", Kind::Flag, false, "exact rational arithmetic"},
      {"kappa-max", Kind::Real, 4.0, "largest sampled principal curvature"},
      {"tolerance", Kind::Real, 1e-12, "tolerance relative to the margin scale (float path)"},
  });
}

std::vector<OptionDef> quermass_options() {
  auto defs = append(output_options(), source_options());
  return append(defs, {
      {"sample", Kind::Int, 0, "index of the generated sample"},
      {"route", Kind::Text, "all", "all | recursion | lemma_aimk | lemma_ss"},
  });
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::Int:
      return "an integer";
    case Kind::Real:
      return "a number";
    case Kind::Text:
      return "a string";
    case Kind::Flag:
      return "true or false";
    case Kind::Seed:
      return "a non-negative integer";
    case Kind::Step:
      return "a number or \"auto\"";
  }
  return "?";
}

json parse_text_value(const OptionDef& def, const std::string& text) {
  const std::string where = "--" + def.name + " expects " + kind_name(def.kind) + ", got '" + text + "'";
  errno = 0;
  char* end = nullptr;
  switch (def.kind) {
    case Kind::Text:
      return text;
    case Kind::Flag:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      fail(ErrorCode::Config, where);
    case Kind::Int: {
      const long v = std::strtol(text.c_str(), &end, 10);
      require(!text.empty() && *end == '\0' && errno == 0 && v >= INT32_MIN && v <= INT32_MAX, ErrorCode::Config,
              where);
      return static_cast<int>(v);
    }
    case Kind::Seed: {
      require(!text.empty() && text[0] != '-', ErrorCode::Config, where);
      const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
      require(*end == '\0' && errno == 0, ErrorCode::Config, where);
      return static_cast<std::uint64_t>(v);
    }
    case Kind::Step:
      if (text == "auto") return text;
      [[fallthrough]];
    case Kind::Real: {
      const double v = std::strtod(text.c_str(), &end);
      require(!text.empty() && *end == '\0' && errno == 0 && std::isfinite(v), ErrorCode::Config, where);
      return v;
    }
  }
  fail(ErrorCode::Config, where);
}

json check_json_value(const OptionDef& def, const json& v) {
  const std::string where = "config key '" + def.name + "' must be " + kind_name(def.kind);
  switch (def.kind) {
    case Kind::Text:
      require(v.is_string(), ErrorCode::Config, where);
      return v;
    case Kind::Flag:
      require(v.is_boolean(), ErrorCode::Config, where);
      return v;
    case Kind::Int:
      require(v.is_number_integer(), ErrorCode::Config, where);
      return v.get<int>();
    case Kind::Seed:
      require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), ErrorCode::Config,
              where);
      return v.get<std::uint64_t>();
    case Kind::Step:
      if (v.is_string() && v.get<std::string>() == "auto") return v;
      [[fallthrough]];
    case Kind::Real:
      require(v.is_number(), ErrorCode::Config, where);
      return v.get<double>();
  }
  fail(ErrorCode::Config, where);
}

/// Resolved option values plus which of them were given explicitly.
struct Options {
  json values = json::object();
  std::set<std::string> explicit_keys;

  int integer(const std::string& key) const { return values.at(key).get<int>(); }
  double real(const std::string& key) const { return values.at(key).get<double>(); }
  std::string text(const std::string& key) const { return values.at(key).get<std::string>(); }
  bool flag(const std::string& key) const { return values.at(key).get<bool>(); }
  std::uint64_t seed(const std::string& key) const { return values.at(key).get<std::uint64_t>(); }
  bool given(const std::string& key) const { return explicit_keys.count(key) > 0; }
};

struct Subcommand {
  std::string name;
  std::vector<OptionDef> defs;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::string config;
};

void register_options(Subcommand& sc) {
  sc.app->add_option("--config", sc.config, "JSON file with option values; flags override it");
  for (const auto& def : sc.defs) {
    std::string help = def.help + " [" + (def.fallback.is_string() ? def.fallback.get<std::string>()
                                                                     : def.fallback.dump()) + "]";
    if (def.kind == Kind::Flag) {
      sc.flags[def.name] = def.fallback.get<bool>();
      sc.app->add_flag("--" + def.name, sc.flags[def.name], help);
    } else {
      sc.app->add_option("--" + def.name, sc.text[def.name], help);
    }
  }
}

Options resolve(const Subcommand& sc) {
  Options opts;
  for (const auto& def : sc.defs) opts.values[def.name] = def.fallback;
  if (!sc.config.empty()) {
    const json cfg = read_json_file(sc.config);
    require(cfg.is_object(), ErrorCode::Config, sc.config + " must hold a JSON object");
    for (const auto& item : cfg.items()) {
      const std::string key = normalize_key(item.key());
      if (key == "subcommand") {
        require(item.value() == sc.name, ErrorCode::Config,
                "config file is for subcommand " + item.value().dump() + ", not " + sc.name);
        continue;
      }
      auto it = std::find_if(sc.defs.begin(), sc.defs.end(), [&](const OptionDef& d) { return d.name == key; });
      require(it != sc.defs.end(), ErrorCode::Config, "unknown key '" + item.key() + "' in " + sc.config);
      opts.values[key] = check_json_value(*it, item.value());
      opts.explicit_keys.insert(key);
    }
  }
  for (const auto& def : sc.defs) {
    auto* opt = sc.app->get_option("--" + def.name);
    if (opt->count() == 0) continue;
    opts.values[def.name] = def.kind == Kind::Flag ? json(sc.flags.at(def.name))
                                                   : parse_text_value(def, sc.text.at(def.name));
    opts.explicit_keys.insert(def.name);
  }
  return opts;
}

// ---------------------------------------------------------------------------
// Shared plumbing

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

struct Run {
  std::string subcommand;
  Options opts;
  fs::path dir;
  bool json_tables = false;
  json provenance = json::object();
  json outputs = json::array();
  json result = json::object();

  void write(const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    outputs.push_back(name);
  }

  void write_manifest() {
    json m{{"tool", "horoflow"},
           {"version", HOROFLOW_VERSION},
           {"git_revision", HOROFLOW_GIT_REV},
           {"subcommand", subcommand},
           {"config", opts.values},
           {"explicit", json(std::vector<std::string>(opts.explicit_keys.begin(), opts.explicit_keys.end()))},
           {"provenance", provenance},
           {"outputs", outputs},
           {"result", result}};
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
  }
};

Run start_run(const std::string& subcommand, Options opts) {
  Run run;
  run.subcommand = subcommand;
  const std::string format = opts.text("format");
  require(format == "csv" || format == "json", ErrorCode::Config, "--format must be csv or json");
  run.json_tables = format == "json";
  run.dir = opts.text("output");
  std::error_code ec;
  fs::create_directories(run.dir, ec);
  require(!ec && fs::is_directory(run.dir), ErrorCode::Io, "cannot create output directory " + run.dir.string());
  run.opts = std::move(opts);
  run.provenance = {{"isa", std::string(kernels::to_string(kernels::active().isa))},
                    {"threads", thread_count()},
#ifdef NDEBUG
                    {"build", "release"},
#else
                    {"build", "debug"},
#endif
                    {"compiler", __VERSION__}};
  return run;
}

void note_input(Run& run, const std::string& key) {
  const std::string path = run.opts.text(key);
  if (path.empty()) return;
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  run.provenance[key + "_fnv1a"] = hex(fnv1a(buf.str()));
}

SampleSpec sample_spec(const Options& o, std::size_t count) {
  SampleSpec spec;
  spec.generator = generator_from_string(o.text("generator"));
  require(spec.generator == GeneratorKind::ExactSphere || spec.generator == GeneratorKind::PerturbedSphere,
          ErrorCode::Config, "--generator must be sphere or perturbed");
  spec.n = o.integer("n");
  spec.count = count;
  spec.seed = o.seed("seed");
  spec.radius_min = o.real("radius-min");
  spec.radius_max = o.real("radius-max");
  spec.max_mode = o.integer("max-mode");
  spec.full_grid = o.flag("full-grid");
  if (o.integer("resolution") > 0) spec.polar_nodes = o.integer("resolution");
  require(spec.radius_min > 0.0 && spec.radius_min <= spec.radius_max, ErrorCode::Config,
          "need 0 < radius-min <= radius-max");
  require(spec.max_mode >= 2, ErrorCode::Config, "--max-mode must be at least 2");
  require(!spec.full_grid || spec.n == 3, ErrorCode::Config, "--full-grid needs n = 3");
  return spec;
}

GraphHypersurface apply_resolution(const Options& o, GraphHypersurface s) {
  const int res = o.integer("resolution");
  const int az = o.integer("azimuth");
  require(res >= 0 && az >= 0, ErrorCode::Config, "resolution must be non-negative");
  if (s.kind() == SurfaceKind::ExactSphere || (res == 0 && az == 0)) return s;
  const int polar = res > 0 ? res : s.polar_nodes();
  if (s.kind() == SurfaceKind::Grid3) return s.resampled(polar, az > 0 ? az : 2 * polar);
  return s.resampled(polar);
}

struct Source {
  GraphHypersurface surface;
  std::string descriptor;
  std::uint64_t seed = 0;
};

/// The input file when given, otherwise sample `index` of the generator.
Source surface_source(const Options& o, std::size_t index, const SampleSpec* spec) {
  const std::string input = o.text("input");
  if (!input.empty()) {
    GraphHypersurface s = apply_resolution(o, load_surface(input));
    require(!o.given("n") || o.integer("n") == s.dim(), ErrorCode::Config,
            "--n " + std::to_string(o.integer("n")) + " contradicts the input (n = " + std::to_string(s.dim()) + ")");
    return {s, fs::path(input).filename().string(), 0};
  }
  SurfaceSample sample = generate_surface(*spec, index);
  GraphHypersurface s = apply_resolution(o, std::move(sample.surface));
  return {s, sample.descriptor, sample.seed};
}

// ---------------------------------------------------------------------------
// flow

bool flow_error(ErrorCode code) {
  return code == ErrorCode::StepRejected || code == ErrorCode::GraphDegenerate ||
         code == ErrorCode::DivisionBySmall || code == ErrorCode::PoleSingularity;
}

int run_flow_command(Options opts, std::ostream& out, std::ostream& err) {
  Run run = start_run("flow", std::move(opts));
  const Options& o = run.opts;

  FlowConfig cfg;
  cfg.k = o.integer("k");
  cfg.speed = speed_from_string(o.text("speed"));
  if (o.values["dt"].is_string()) {
    cfg.adaptive = true;
    cfg.dt = o.real("dt-max");
  } else {
    cfg.adaptive = false;
    cfg.dt = o.real("dt");
  }
  cfg.t_end = o.real("t-end");
  cfg.cfl = o.real("cfl");
  cfg.parabolic_safety = o.real("parabolic-safety");
  cfg.dt_floor = o.real("dt-floor");
  cfg.umbilicity_stop = o.real("umbilicity-stop");
  cfg.q_plateau = o.real("q-plateau");
  cfg.cadence = o.integer("cadence");
  cfg.truncation_estimate = o.flag("truncation");
  cfg.monotonicity_factor = o.real("monotonicity-factor");
  cfg.abort_on_violation = o.flag("abort-on-violation");
  cfg.filter = o.flag("filter");
  cfg.filter_strength = o.real("filter-strength");
  cfg.filter_order = o.integer("filter-order");

  std::optional<FlowState> state;
  if (!o.text("restart").empty()) {
    SpeedKind speed = cfg.speed;
    state.emplace(state_from_restart(read_json_file(o.text("restart")), &speed));
    require(!o.given("k") || state->k == cfg.k, ErrorCode::Config, "--k contradicts the restart snapshot");
    require(!o.given("speed") || speed == cfg.speed, ErrorCode::Config, "--speed contradicts the restart snapshot");
    cfg.k = state->k;
    cfg.speed = speed;
    state->surface = apply_resolution(o, state->surface);
    note_input(run, "restart");
    run.provenance["surface"] = "restart t=" + format_double(state->t);
  } else {
    const int index = o.integer("sample");
    require(index >= 0, ErrorCode::Config, "--sample must be non-negative");
    std::optional<SampleSpec> spec;
    if (o.text("input").empty()) spec = sample_spec(o, static_cast<std::size_t>(index) + 1);
    Source src = surface_source(o, static_cast<std::size_t>(index), spec ? &*spec : nullptr);
    note_input(run, "input");
    run.provenance["surface"] = src.descriptor;
    run.provenance["surface_seed"] = src.seed;
    state.emplace(std::move(src.surface), cfg.k, 0.0);
  }
  run.opts.values["k"] = cfg.k;
  run.opts.values["speed"] = to_string(cfg.speed);
  run.result["flow_config"] = flow_config_json(cfg);
  validate(cfg, state->surface);
  const int n = state->surface.dim();

  std::vector<DiagnosticRecord> records;
  auto emit = [&](const FlowState* last, std::optional<FlowSummary> summary) {
    if (run.json_tables) {
      run.write("flow.json", history_json(records).dump(1) + "\n");
    } else {
      run.write("flow.csv", history_csv(records, n));
    }
    if (last) run.write("restart.json", restart_json(*last, cfg.speed).dump(1) + "\n");
    if (summary) run.result["summary"] = flow_summary_json(*summary);
    run.write_manifest();
  };

  // Finite-difference columns are filled into a record once its successor
  // exists, so the final history is authoritative; `partial` only backs the
  // abort path.
  std::vector<DiagnosticRecord> partial;
  try {
    FlowResult res = run_flow(std::move(*state), cfg, [&](const DiagnosticRecord& r) { partial.push_back(r); });
    records = res.state.history;
    emit(&res.state, res.summary);
    out << "flow: " << to_string(res.summary.stop) << " at t=" << format_double(res.summary.t_final)
        << " after " << res.summary.steps << " steps, Q " << format_double(res.summary.q_initial) << " -> "
        << format_double(res.summary.q_final) << " (sphere " << format_double(res.summary.q_sphere) << ")\n";
    if (res.summary.stop == FlowStop::MonotonicityViolation) {
      err << "horoflow: flow aborted: Q rose beyond the truncation band at record "
          << res.summary.monotonicity.worst_index << "\n";
      return kExitFlowAbort;
    }
    return kExitOk;
  } catch (const Error& e) {
    if (!flow_error(e.code())) throw;
    run.result["abort"] = e.what();
    records = std::move(partial);
    emit(nullptr, std::nullopt);
    err << "horoflow: flow aborted: " << e.what() << "\n";
    return kExitFlowAbort;
  }
}

// ---------------------------------------------------------------------------
// verify

QuermassRoute route_from_string(const std::string& name) {
  for (auto r : {QuermassRoute::Recursion, QuermassRoute::LemmaAimk, QuermassRoute::LemmaSS})
    if (to_string(r) == name) return r;
  fail(ErrorCode::Config, "unknown quermass route '" + name + "'");
}

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names{"all", "1.1", "1.2", "1.3", "6.1", "6.2",
                                              "gs",  "gs2", "conjecture", "routes"};
  return names;
}

std::vector<InequalityReport> selected_checks(Evaluation& e, const std::string& thm, int k, QuermassRoute route) {
  const int n = e.dim();
  if (thm == "all") return run_theorem_checks(e, k);
  if (thm == "1.1") return {check_thm_1_1(e, k)};
  if (thm == "1.2") return {check_thm_1_2(e, k)};
  if (thm == "1.3") return {check_thm_1_3(e, k, route)};
  if (thm == "6.1") return {check_thm_6_1(e)};
  if (thm == "6.2") return {check_eq_6_2(e)};
  if (thm == "routes") return check_quermass_routes(e);
  if (thm == "conjecture") {
    auto pair = explore_conjecture(e, k);
    return {pair[0], pair[1]};
  }
  std::vector<InequalityReport> reps;
  if (thm == "gs") {
    for (int r = 1; r <= n; ++r)
      for (int s = 0; s < r; ++s) reps.push_back(check_gallego_solanes(e, r, s));
  } else {
    for (int j = 1; j <= n - 1; ++j) reps.push_back(check_gallego_solanes_sigma(e, j));
  }
  return reps;
}

int run_verify_command(Options opts, std::ostream& out, std::ostream&) {
  Run run = start_run("verify", std::move(opts));
  const Options& o = run.opts;
  const std::string thm = o.text("thm");
  const auto& names = theorem_names();
  require(std::find(names.begin(), names.end(), thm) != names.end(), ErrorCode::Config,
          "unknown --thm '" + thm + "'");
  const int k = o.integer("k");
  const QuermassRoute route = route_from_string(o.text("route"));
  const double tol = o.real("tolerance");
  require(tol > 0.0, ErrorCode::Config, "--tolerance must be positive");

  const bool from_file = !o.text("input").empty();
  const int count = from_file ? 1 : o.integer("count");
  require(count >= 1, ErrorCode::Config, "--count must be at least 1");
  std::optional<SampleSpec> spec;
  if (!from_file) spec = sample_spec(o, static_cast<std::size_t>(count));
  note_input(run, "input");

  // Surfaces are built serially so input errors surface before any work;
  // checks run in parallel and are merged in sample order.
  std::vector<Source> sources;
  for (int i = 0; i < count; ++i) sources.push_back(surface_source(o, static_cast<std::size_t>(i), spec ? &*spec : nullptr));
  std::vector<std::vector<InequalityReport>> per_sample(sources.size());
  std::vector<std::string> errors(sources.size());
  std::vector<int> error_codes(sources.size(), -1);
  parallel_for(sources.size(), [&](std::size_t i) {
    try {
      Evaluation e(sources[i].surface, sources[i].descriptor, sources[i].seed);
      e.set_analytic_tol(tol);
      per_sample[i] = selected_checks(e, thm, k, route);
      for (auto& rep : per_sample[i]) rep.sample = i;
    } catch (const Error& ex) {
      errors[i] = ex.what();
      error_codes[i] = static_cast<int>(ex.code());
    }
  });
  for (std::size_t i = 0; i < sources.size(); ++i)
    if (error_codes[i] >= 0) throw Error(static_cast<ErrorCode>(error_codes[i]), "sample " + std::to_string(i) + ": " + errors[i].substr(errors[i].find(": ") + 2));

  std::vector<InequalityReport> reports;
  for (auto& reps : per_sample)
    for (auto& r : reps) reports.push_back(std::move(r));
  std::size_t failures = 0, equalities = 0, asserted = 0;
  double min_rel = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (!r.asserted) continue;
    ++asserted;
    if (!r.pass) ++failures;
    if (r.equality && !r.identity) ++equalities;
    min_rel = std::min(min_rel, r.relative_margin);
  }
  run.write("reports.jsonl", reports_jsonl(reports));
  if (!run.json_tables) run.write("reports.csv", reports_csv(reports));
  run.result = {{"samples", count},
                {"checks", reports.size()},
                {"asserted", asserted},
                {"failures", failures},
                {"equalities", equalities},
                {"min_relative_margin", asserted ? json(min_rel) : json(nullptr)}};
  run.write_manifest();
  out << "verify: " << count << " surface(s), " << asserted << " asserted checks, " << failures << " failed, "
      << equalities << " at equality (identities excluded)\n";
  return failures > 0 ? kExitInequality : kExitOk;
}

// ---------------------------------------------------------------------------
// symcheck

int run_symcheck_command(Options opts, std::ostream& out, std::ostream&) {
  Run run = start_run("symcheck", std::move(opts));
  const Options& o = run.opts;
  SymcheckSpec spec;
  spec.n = o.integer("n");
  spec.k = o.integer("k");
  require(o.integer("samples") >= 1, ErrorCode::Config, "--samples must be at least 1");
  spec.samples = static_cast<std::size_t>(o.integer("samples"));
  spec.seed = o.seed("seed");
  spec.cone = cone_from_string(o.text("cone"));
  spec.exact = o.flag("exact");
  spec.kappa_max = o.real("kappa-max");
  spec.rel_tol = o.real("tolerance");
  require(spec.kappa_max > 1.0, ErrorCode::Config, "--kappa-max must exceed 1");
  require(spec.rel_tol >= 0.0, ErrorCode::Config, "--tolerance must be non-negative");

  const SymcheckResult res = run_symcheck(spec);
  if (run.json_tables) {
    run.write("symcheck.json", symcheck_json(spec, res).dump(1) + "\n");
  } else {
    run.write("symcheck.csv", symcheck_csv(res));
  }
  run.result = symcheck_json(spec, res);
  run.write_manifest();
  std::size_t failures = 0;
  for (const auto& s : res.stats) failures += s.failures;
  out << "symcheck: " << res.samples << " samples (" << to_string(spec.cone) << (spec.exact ? ", exact" : "")
      << "), " << failures << " failures\n";
  return res.pass ? kExitOk : kExitInequality;
}

// ---------------------------------------------------------------------------
// quermass

int run_quermass_command(Options opts, std::ostream& out, std::ostream&) {
  Run run = start_run("quermass", std::move(opts));
  const Options& o = run.opts;
  const std::string which = o.text("route");
  std::vector<QuermassRoute> routes;
  if (which == "all") {
    routes = {QuermassRoute::Recursion, QuermassRoute::LemmaAimk, QuermassRoute::LemmaSS};
  } else {
    routes = {route_from_string(which)};
  }
  const int index = o.integer("sample");
  require(index >= 0, ErrorCode::Config, "--sample must be non-negative");
  std::optional<SampleSpec> spec;
  if (o.text("input").empty()) spec = sample_spec(o, static_cast<std::size_t>(index) + 1);
  Source src = surface_source(o, static_cast<std::size_t>(index), spec ? &*spec : nullptr);
  note_input(run, "input");
  run.provenance["surface"] = src.descriptor;

  const SurfaceMeasures m = measure(src.surface);
  const int n = src.surface.dim();
  json rows = json::array();
  std::ostringstream csv;
  csv << "route,r,W\n";
  for (auto route : routes) {
    const QuermassVector q = quermass(m, route);
    for (int r = 0; r <= n; ++r) {
      if (!q.w[r]) continue;
      csv << to_string(route) << ',' << r << ',' << format_double(*q.w[r]) << '\n';
      rows.push_back({{"route", to_string(route)}, {"r", r}, {"W", *q.w[r]}});
    }
  }
  if (run.json_tables) {
    run.write("quermass.json", rows.dump(1) + "\n");
  } else {
    run.write("quermass.csv", csv.str());
  }
  run.result = {{"n", n}, {"rows", rows.size()}};
  run.write_manifest();
  out << "quermass: " << rows.size() << " values for " << src.descriptor << "\n";
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse curvature flows and Alexandrov-Fenchel type inequalities in hyperbolic space",
               "horoflow"};
  app.require_subcommand(1);
  std::vector<Subcommand> subs(4);
  subs[0].name = "flow";
  subs[0].defs = flow_options();
  subs[1].name = "verify";
  subs[1].defs = verify_options();
  subs[2].name = "symcheck";
  subs[2].defs = symcheck_options();
  subs[3].name = "quermass";
  subs[3].defs = quermass_options();
  const std::map<std::string, std::string> about{
      {"flow", "evolve a hypersurface by inverse curvature flow"},
      {"verify", "check the inequalities on a surface or generated samples"},
      {"symcheck", "sweep the pointwise symmetric-function inequalities"},
      {"quermass", "quermassintegrals of a surface by each route"},
  };
  for (auto& sc : subs) {
    sc.app = app.add_subcommand(sc.name, about.at(sc.name));
    register_options(sc);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "horoflow: " << one_line(e.what()) << "\n";
    return kExitConfig;
  }

  try {
    for (auto& sc : subs) {
      if (!sc.app->parsed()) continue;
      Options opts = resolve(sc);
      if (sc.name == "flow") return run_flow_command(std::move(opts), out, err);
      if (sc.name == "verify") return run_verify_command(std::move(opts), out, err);
      if (sc.name == "symcheck") return run_symcheck_command(std::move(opts), out, err);
      return run_quermass_command(std::move(opts), out, err);
    }
  } catch (const Error& e) {
    err << "horoflow: " << one_line(e.what()) << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "horoflow: " << one_line(e.what()) << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace horoflow::cli
