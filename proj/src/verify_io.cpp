#include "horoflow/verify_io.hpp"

#include <sstream>

#include "horoflow/error.hpp"
#include "horoflow/flow_io.hpp"

namespace horoflow {

using nlohmann::json;

json report_json(const InequalityReport& r) {
  return {{"sample", r.sample},
          {"descriptor", r.descriptor},
          {"seed", r.seed},
          {"inequality", r.name},
          {"n", r.n},
          {"k", r.k},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"margin", r.margin},
          {"relative_margin", r.relative_margin},
          {"tolerance", r.tolerance},
          {"equality", r.equality},
          {"identity", r.identity},
          {"asserted", r.asserted},
          {"pass", r.pass},
          {"resolution", r.resolution},
          {"rechecked", r.rechecked}};
}

std::string reports_jsonl(const std::vector<InequalityReport>& reports) {
  std::string out;
  for (const auto& r : reports) out += report_json(r).dump() + "\n";
  return out;
}

namespace {

// Descriptors are generated internally but may contain commas.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string reports_csv(const std::vector<InequalityReport>& reports) {
  std::ostringstream out;
  out << "sample,descriptor,seed,inequality,n,k,lhs,rhs,margin,relative_margin,tolerance,equality,identity,"
         "asserted,pass,resolution,rechecked\n";
  for (const auto& r : reports) {
    out << r.sample << ',' << csv_field(r.descriptor) << ',' << r.seed << ',' << r.name << ',' << r.n << ','
        << r.k << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.margin)
        << ',' << format_double(r.relative_margin) << ',' << format_double(r.tolerance) << ',' << r.equality
        << ',' << r.identity << ',' << r.asserted << ',' << r.pass << ',' << r.resolution << ',' << r.rechecked
        << '\n';
  }
  return out.str();
}

json symcheck_json(const SymcheckSpec& spec, const SymcheckResult& result) {
  json stats = json::array();
  for (const auto& s : result.stats)
    stats.push_back({{"check", s.name},
                     {"evaluated", s.evaluated},
                     {"failures", s.failures},
                     {"equalities", s.equalities},
                     {"min_relative", s.min_relative},
                     {"worst_seed", s.worst_seed}});
  return {{"n", spec.n},          {"k", spec.k},       {"samples", result.samples},
          {"seed", spec.seed},    {"cone", to_string(spec.cone)},
          {"exact", spec.exact},  {"pass", result.pass}, {"stats", stats}};
}

std::string symcheck_csv(const SymcheckResult& result) {
  std::ostringstream out;
  out << "check,evaluated,failures,equalities,min_relative,worst_seed\n";
  for (const auto& s : result.stats)
    out << s.name << ',' << s.evaluated << ',' << s.failures << ',' << s.equalities << ','
        << format_double(s.min_relative) << ',' << s.worst_seed << '\n';
  return out.str();
}

GeneratorKind generator_from_string(const std::string& name) {
  for (auto g : {GeneratorKind::ExactSphere, GeneratorKind::PerturbedSphere, GeneratorKind::RandomHConvex,
                 GeneratorKind::RandomUnitSubconvex})
    if (to_string(g) == name) return g;
  fail(ErrorCode::Config, "unknown generator '" + name + "'");
}

std::string to_string(SymCone cone) { return cone == SymCone::HConvex ? "hconvex" : "unitsub"; }

SymCone cone_from_string(const std::string& name) {
  if (name == "hconvex") return SymCone::HConvex;
  if (name == "unitsub" || name == "unit_subconvex") return SymCone::UnitSubconvex;
  fail(ErrorCode::Config, "unknown cone '" + name + "' (hconvex | unitsub)");
}

}  // namespace horoflow
