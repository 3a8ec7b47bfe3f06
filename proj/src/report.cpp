#include "annoc/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "annoc/entail.hpp"
#include "annoc/model.hpp"

namespace annoc {

int FunctionReport::solved() const {
  int n = 0;
  for (const auto& e : vcs.entailments)
    if (e.status != Entailment::Status::Open) ++n;
  return n;
}

std::string report_json(const std::vector<FunctionReport>& reports) {
  using json = nlohmann::ordered_json;
  json all = json::array();
  for (const auto& r : reports) {
    json f;
    f["function"] = r.name;
    json vcs = json::array();
    for (const auto& e : r.vcs.entailments) {
      json v;
      v["id"] = e.id;
      v["line"] = e.loc.line;
      v["col"] = e.loc.col;
      v["slot"] = e.slot;
      json sigma = json::array();
      for (const auto& b : e.sigma) sigma.push_back(json{{"name", b.name}, {"sort", sort_name(b.sort)}});
      v["sigma"] = sigma;
      json gamma = json::array();
      for (const auto& g : e.gamma) gamma.push_back(to_string(g));
      v["gamma"] = gamma;
      v["lhs"] = to_string(e.lhs);
      v["rhs"] = to_string(e.rhs);
      v["status"] = status_name(e.status);
      json res = json::array();
      for (const auto& p : e.residual_pure) res.push_back(to_string(p));
      v["residual_pure"] = res;
      vcs.push_back(v);
    }
    f["vcs"] = vcs;
    json trace = json::array();
    for (const auto& [rule, loc] : r.vcs.trace)
      trace.push_back(rule + "@" + std::to_string(loc.line) + ":" + std::to_string(loc.col));
    f["trace"] = trace;
    if (r.error) f["error"] = json{{"kind", r.error->kind}, {"line", r.error->loc.line},
                                   {"col", r.error->loc.col}, {"message", r.error->message}};
    all.push_back(f);
  }
  return all.dump(2) + "\n";
}

namespace {

std::string paint(bool on, const char* code, const std::string& s) {
  if (!on) return s;
  return std::string("\x1b[") + code + "m" + s + "\x1b[0m";
}

std::string summary(int total, int solved) {
  std::string s = std::to_string(total) + " VCs, " + std::to_string(solved) + " solved";
  if (solved != total) s += ", " + std::to_string(total - solved) + " residual";
  return s;
}

void print_diag(std::ostream& err, const std::string& path, const Diagnostic& d) {
  err << path << ":" << d.loc.line << ":" << d.loc.col << ": " << d.kind << ": " << d.message << "\n";
}

void print_vc(std::ostream& out, const Entailment& e, bool color) {
  const char* code = e.status == Entailment::Status::Open ? "33" : "32";
  out << "  VC " << e.id << " [" << e.slot << "] line " << e.loc.line << ":" << e.loc.col << "  "
      << paint(color, code, status_name(e.status)) << "\n";
  out << "    Σ:";
  for (const auto& b : e.sigma) out << " " << b.name << ":" << sort_name(b.sort);
  out << "\n    Γ:";
  for (std::size_t i = 0; i < e.gamma.size(); ++i) out << (i ? "; " : " ") << to_string(e.gamma[i]);
  out << "\n    " << to_string(e.lhs) << "\n    ⊨ " << to_string(e.rhs) << "\n";
  for (const auto& p : e.residual_pure) out << "    residual: " << to_string(p) << "\n";
  if (!e.residual_reason.empty()) out << "    reason: " << e.residual_reason << "\n";
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) {
    err << cfg.input_path << ": cannot read input file\n";
    return kExitFrontend;
  }
  std::stringstream ss;
  ss << in.rdbuf();

  BuildResult built;
  try {
    built = build_source(ss.str());
  } catch (const FrontendError& e) {
    for (const auto& d : e.diagnostics()) print_diag(err, cfg.input_path, d);
    return kExitFrontend;
  }

  std::vector<const BuiltFunction*> selected;
  for (const auto& f : built.functions)
    if (!cfg.function || f.name == *cfg.function) selected.push_back(&f);
  if (cfg.function && selected.empty()) {
    err << cfg.input_path << ": no function named " << *cfg.function << "\n";
    return kExitFrontend;
  }

  if (cfg.command == RunConfig::Command::DumpAst) {
    for (const auto* f : selected) {
      out << "function " << f->name << "\n";
      out << "  With:";
      for (const auto& b : f->spec.with) out << " " << b.name << ":" << sort_name(b.sort);
      out << "\n  Require: " << to_string(f->spec.require) << "\n";
      out << "  Ensure: " << to_string(f->spec.ensure) << "\n";
      out << pretty(f->body, 1) << "\n";
    }
    return kExitOk;
  }

  SolveOptions sopt;
  sopt.rewrite = cfg.rewrite;
  Bounds bounds;
  if (auto ls = list_shape(built.records)) {
    sopt.list = *ls;
    bounds.list = *ls;
  }
  bool solving = cfg.command == RunConfig::Command::Verify && cfg.solve;

  std::vector<FunctionReport> reports;
  int code = kExitOk;
  int total = 0, solved = 0;
  for (const auto* f : selected) {
    FunctionReport r;
    r.name = f->name;
    r.loc = f->loc;
    try {
      r.vcs = verify_function(*f);
    } catch (const VerifyError& e) {
      r.error = e.diagnostics().front();
      print_diag(err, cfg.input_path, *r.error);
      code = kExitStrategy;
      reports.push_back(std::move(r));
      continue;
    }
    for (auto& e : r.vcs.entailments) {
      if (solving) {
        Verdict v = solve(e, sopt);
        r.solver_traces.push_back(v.trace);
        if (v.kind == Verdict::Kind::Valid) {
          e.status = v.unsat_premise ? Entailment::Status::UnsatPre : Entailment::Status::SolvedAuto;
        } else {
          e.residual_pure = v.residual;
          e.residual_reason = v.reason;
        }
      }
      if (cfg.oracle) {
        OracleResult o = oracle_check(e, bounds);
        r.oracle.push_back(o.valid ? "valid within bounds"
                                   : "countermodel " + to_string(*o.countermodel));
      }
    }
    total += static_cast<int>(r.vcs.entailments.size());
    solved += r.solved();
    if (cfg.command == RunConfig::Command::Verify && code == kExitOk && r.solved() != static_cast<int>(r.vcs.entailments.size()))
      code = kExitResidual;
    reports.push_back(std::move(r));
  }

  bool json_stdout = cfg.json_path && *cfg.json_path == "-";
  for (const auto& r : reports) {
    if (json_stdout) break;
    if (r.error) {
      out << r.name << ": " << paint(cfg.color, "31", "failed") << " (" << r.error->kind << ")\n";
      continue;
    }
    const auto& es = r.vcs.entailments;
    for (std::size_t i = 0; i < es.size(); ++i) {
      print_vc(out, es[i], cfg.color);
      if (cfg.trace && i < r.solver_traces.size())
        for (const auto& t : r.solver_traces[i]) out << "      . " << t << "\n";
      if (i < r.oracle.size()) out << "    oracle: " << r.oracle[i] << "\n";
    }
    if (cfg.trace) {
      out << "  trace:";
      for (const auto& [rule, loc] : r.vcs.trace) out << " " << rule << "@" << loc.line;
      out << "\n";
    }
    int n = static_cast<int>(es.size());
    if (cfg.command == RunConfig::Command::Verify)
      out << r.name << ": " << summary(n, r.solved()) << "\n";
    else
      out << r.name << ": " << n << " VCs\n";
  }
  if (!json_stdout && reports.size() > 1 && cfg.command == RunConfig::Command::Verify) out << "total: " << summary(total, solved) << "\n";

  if (cfg.json_path) {
    std::string doc = report_json(reports);
    if (*cfg.json_path == "-") {
      out << doc;
    } else {
      std::ofstream js(*cfg.json_path, std::ios::binary);
      if (!js || !(js << doc)) {
        err << *cfg.json_path << ": cannot write JSON report\n";
        return kExitFrontend;
      }
    }
  }
  return code;
}

}  // namespace annoc
