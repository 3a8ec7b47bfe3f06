#pragma once

// Symbolic-heap entailment solver and the list-theory rewriter.

#include <string>
#include <vector>

#include "annoc/ast.hpp"
#include "annoc/vcgen.hpp"

namespace annoc {

struct Verdict {
  enum class Kind { Valid, Unknown, Invalid };
  Kind kind = Kind::Unknown;
  bool unsat_premise = false;
  std::vector<std::string> trace;
  std::vector<PureProp> residual;
  std::string reason;
};

struct SolveOptions {
  // Lemma rules (app_nil_r, associativity, rev distribution and involution).
  // Computation rules for rev/app on nil and cons are always on.
  bool rewrite = true;
  // Cell layout behind ll and lseg.
  ListShape list{"list", "head", "tail"};
};

Verdict solve(const Entailment& e, const SolveOptions& opt = {});

// Rewriting to normal form. `steps` counts rule applications.
struct Rewriter {
  bool lemmas = true;
  long steps = 0;

  Term normalize(const Term& t);
  // Equal after normalization.
  bool equal(const Term& a, const Term& b);
};

// Flattened sequence: cons(h, nil) per element, variables, rev of variables.
std::vector<Term> seq_atoms(const Term& t, long* steps = nullptr);

// Proves p from the known equalities (congruence plus rewriting).
bool normalize_pure(const PureProp& p, const std::vector<PureProp>& known, bool lemmas = true);

// Runs solve on every entailment and records statuses and residuals.
void solve_report(VcReport& report, const SolveOptions& opt = {});

}  // namespace annoc
