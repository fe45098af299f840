#pragma once

// Verification reports: one JSON object per line, plus an aggregate CSV.

#include <string>
#include <vector>

#include <json.hpp>

#include "horoflow/verify.hpp"

namespace horoflow {

nlohmann::json report_json(const InequalityReport& rep);
std::string reports_jsonl(const std::vector<InequalityReport>& reports);
std::string reports_csv(const std::vector<InequalityReport>& reports);

nlohmann::json symcheck_json(const SymcheckSpec& spec, const SymcheckResult& result);
std::string symcheck_csv(const SymcheckResult& result);

GeneratorKind generator_from_string(const std::string& name);
SymCone cone_from_string(const std::string& name);
std::string to_string(SymCone cone);

}  // namespace horoflow
