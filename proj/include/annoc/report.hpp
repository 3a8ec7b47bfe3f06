#pragma once

// Pipeline driver shared by the command-line tool and the tests.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "annoc/vcgen.hpp"

namespace annoc {

struct RunConfig {
  enum class Command { Verify, DumpAst, EmitVcs };
  Command command = Command::Verify;
  std::string input_path;
  std::optional<std::string> function;
  bool solve = true;
  bool rewrite = true;
  std::optional<std::string> json_path;  // "-": standard output, replacing the text report
  bool trace = false;
  bool color = false;
  bool oracle = false;  // also check every VC in the bounded model
};

enum ExitCode { kExitOk = 0, kExitResidual = 1, kExitFrontend = 2, kExitStrategy = 3 };

struct FunctionReport {
  std::string name;
  Loc loc;
  VcReport vcs;
  std::optional<Diagnostic> error;  // strategy or symbolic execution failure
  std::vector<std::vector<std::string>> solver_traces;  // per VC when solving
  std::vector<std::string> oracle;                      // per VC when requested

  int solved() const;
};

// Renders the machine report; byte-identical for identical input.
std::string report_json(const std::vector<FunctionReport>& reports);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace annoc
