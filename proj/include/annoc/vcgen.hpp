#pragma once

// Annotation-driven reduction of a function's triple to entailments.

#include <string>
#include <utility>
#include <vector>

#include "annoc/annot.hpp"
#include "annoc/ast.hpp"
#include "annoc/symexec.hpp"

namespace annoc {

struct Entailment {
  enum class Status { Open, SolvedAuto, UnsatPre };
  int id = 0;
  Loc loc;
  std::string slot;  // "pre-consequence", "normal", "return", "normal→conInv", ...
  int slot_id = 0;   // distinct per postcondition slot instance
  std::vector<Binder> sigma;
  std::vector<PureProp> gamma;
  Assertion lhs;
  Assertion rhs;
  Status status = Status::Open;
  std::vector<PureProp> residual_pure;  // goals the solver could not discharge
  std::string residual_reason;
};

const char* status_name(Entailment::Status s);

struct HoleRecord {
  int id = 0;
  Loc loc;
  Assertion value;
  bool instantiated = false;
  bool unreachable = false;  // no exit reached the hole; instantiated to 0 = 1
  Entailment closing;        // the reverted reflexive entailment
};

struct VcReport {
  std::vector<Entailment> entailments;
  std::vector<HoleRecord> holes;
  std::vector<std::pair<std::string, Loc>> trace;
};

struct Post {
  enum class Kind { Absent, Known, Hole };
  Kind kind = Kind::Absent;
  Assertion a;
  std::string tag;
  int slot_id = 0;
  int hole = -1;

  static Post absent() { return {}; }
};

struct Posts {
  Post normal, brk, con, ret;
};

class Verifier {
 public:
  explicit Verifier(VcReport& out) : out_(out) {}

  Post known(Assertion a, std::string tag);
  void run(Ctx ctx, Assertion p, const AStmt& c, const Posts& posts);

 private:
  VcReport& out_;
  int next_slot_ = 1;
  int next_hole_ = 0;
  // Entailments routed to each open hole.
  std::vector<std::vector<Entailment>> hole_hits_;

  void emit(const Ctx& ctx, const Assertion& lhs, const Post& post, Loc loc, const char* what);
  void trace(const char* rule, Loc loc) { out_.trace.emplace_back(rule, loc); }
  int count_slot(int slot_id) const;
  void seq(Ctx ctx, Assertion p, const AStmt& c, const Posts& posts);
  void single(Ctx ctx, Assertion p, const AStmt& c, const Posts& posts);
};

// Folds Γ and Σ entries added after the snapshot back into the assertion.
Entailment revert(std::size_t sigma_len, std::size_t gamma_len, const Entailment& e);

// Throws VerifyError("HoleAlreadyInstantiated").
void instantiate_hole(VcReport& report, int hole_id, const Assertion& a);

// Throws VerifyError (StrategyStuck, HoleMultiplyConstrained, symbolic
// execution failures, ShapeMismatch).
VcReport verify_function(const BuiltFunction& f);

}  // namespace annoc
