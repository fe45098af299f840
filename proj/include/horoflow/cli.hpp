#pragma once

// horoflow command line: flow | verify | symcheck | quermass.
//
// Every option can also come from --config FILE (a JSON object keyed by the
// option names, '-' or '_' alike); flags override the file. Each run writes
// manifest.json with the fully resolved options into --output.

#include <iosfwd>
#include <string>
#include <vector>

namespace horoflow::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,      // configuration or I/O error, one line on stderr
  kExitInequality = 2,  // an asserted inequality check failed
  kExitFlowAbort = 3,   // the flow stopped on a monotonicity violation or a numerical error
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace horoflow::cli
