#pragma once

// Forward symbolic execution over exists-free canonical assertions.

#include <vector>

#include "annoc/ast.hpp"
#include "annoc/closure.hpp"
#include "annoc/error.hpp"

namespace annoc {

struct Ctx {
  std::vector<Binder> sigma;
  std::vector<PureProp> gamma;
};

// Throws VerifyError("UnboundProgVar").
Term eval_expr(const Assertion& p, const Expr& e, Loc loc = {});

// Closure over gamma, P.pure and non-NULL points-to addresses.
Closure facts_closure(const Ctx& ctx, const Assertion& p);

// Strongest postcondition of an assignment. Throws VerifyError with kind
// NoChunk, AmbiguousChunk, NoField or UnboundProgVar.
Assertion ae(const Ctx& ctx, const Assertion& p, const Assign& c, Loc loc = {});

// P with the branch fact for `b` evaluating to `branch`; a contradiction
// appends 0 = 1.
Assertion norm_cond(const Ctx& ctx, const Assertion& p, const Cond& b, bool branch, Loc loc = {});

PureProp branch_fact(const Assertion& p, const Cond& b, bool branch, Loc loc = {});

bool has_falsum(const Assertion& p);

}  // namespace annoc
