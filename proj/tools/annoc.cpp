#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "annoc/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"annoc: annotation verifier for a mini-C subset"};
  app.require_subcommand(1);

  annoc::RunConfig cfg;
  std::string func, json;
  bool no_solve = false, no_rewrite = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input_path, "mini-C source file")->required();
    sub->add_option("--func", func, "only this function");
  };
  auto* verify = app.add_subcommand("verify", "generate VCs and solve them");
  add_common(verify);
  verify->add_flag("--no-solve", no_solve, "skip the entailment solver");
  verify->add_flag("--no-rewrite", no_rewrite, "disable list lemma rewriting");
  verify->add_option("--json", json, "write the JSON report to PATH (- for stdout)");
  verify->add_flag("--trace", cfg.trace, "print strategy and solver traces");
  verify->add_flag("--oracle", cfg.oracle, "check every VC in the bounded model");

  auto* dump = app.add_subcommand("dump-ast", "print the annotated program after building");
  add_common(dump);

  auto* emit = app.add_subcommand("emit-vcs", "generate VCs without solving");
  add_common(emit);
  emit->add_option("--json", json, "write the JSON report to PATH (- for stdout)");
  emit->add_flag("--trace", cfg.trace, "print the strategy trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : annoc::kExitFrontend;
  }

  if (dump->parsed()) cfg.command = annoc::RunConfig::Command::DumpAst;
  if (emit->parsed()) cfg.command = annoc::RunConfig::Command::EmitVcs;
  if (!func.empty()) cfg.function = func;
  if (!json.empty()) cfg.json_path = json;
  cfg.solve = !no_solve;
  cfg.rewrite = !no_rewrite;
  const char* color = std::getenv("ANNOC_COLOR");
  cfg.color = color && std::string(color) == "1";

  try {
    return annoc::run(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "annoc: internal error: " << e.what() << "\n";
    return annoc::kExitStrategy;
  }
}
