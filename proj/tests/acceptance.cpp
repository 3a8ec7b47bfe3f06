// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "annoc/entail.hpp"
#include "annoc/model.hpp"
#include "annoc/symexec.hpp"
#include "annoc/vcgen.hpp"
#include "support.hpp"

using namespace annoc;
using namespace annoc::test;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  if (!ok) ++failures;
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail.str() << std::endl;
}

int solved_count(const VcReport& rep, bool rewrite) {
  SolveOptions opt;
  opt.rewrite = rewrite;
  int n = 0;
  for (const auto& e : rep.entailments) n += solve(e, opt).kind == Verdict::Kind::Valid;
  return n;
}

const AStmt* find_loop(const AStmt& c) {
  if (c.kind == AStmt::Kind::Loop) return &c;
  for (const auto& k : c.kids)
    if (const AStmt* l = find_loop(k)) return l;
  return nullptr;
}

// Walks a chain of Given clauses, checking their names; returns the scope.
const AStmt* expect_givens(const AStmt* c, const std::vector<std::string>& names, std::ostringstream& d) {
  for (const auto& n : names) {
    if (c->kind != AStmt::Kind::Given || c->binder.name != n) {
      d << "expected Given " << n << " ";
      return nullptr;
    }
    c = &c->kids[0];
  }
  return c;
}

// Mirrors the function-level slot setup and counts VCs on the normal slot.
int normal_slot_vcs(const std::vector<Binder>& sigma, const Assertion& pre, const Assertion& ensure,
                    const AStmt& body) {
  VcReport rep;
  Verifier v(rep);
  Ctx ctx;
  ctx.sigma = sigma;
  Posts posts;
  posts.ret = v.known(ensure, "return");
  if (!ensure.locals.count(kRetVar)) posts.normal = v.known(ensure, "normal");
  v.run(ctx, pre, body, posts);
  if (posts.normal.kind != Post::Kind::Known) return 0;
  int n = 0;
  for (const auto& e : rep.entailments) n += e.slot_id == posts.normal.slot_id;
  return n;
}

std::vector<std::string> names_of(const std::vector<Binder>& bs) {
  std::vector<std::string> out;
  for (const auto& b : bs) out.push_back(b.name);
  return out;
}

bool reverse_end_to_end(std::ostringstream& d) {
  auto t0 = Clock::now();
  auto built = build_corpus("reverse.c");
  VcReport rep = verify_function(function_named(built, "reverse"));
  int total = static_cast<int>(rep.entailments.size());
  int plain = solved_count(rep, false);
  int full = solved_count(rep, true);
  double t = seconds_since(t0);
  d << total << " VCs, " << plain << " solved without lemmas, " << full << " with, " << t << " s";
  return total == 4 && plain == 2 && full == 4 && t < 1.0;
}

bool postcondition_omission(std::ostringstream& d) {
  auto built = build_corpus("reverse.c");
  VcReport rep = verify_function(function_named(built, "reverse"));
  if (rep.holes.size() != 1 || !rep.holes[0].instantiated) {
    d << rep.holes.size() << " holes";
    return false;
  }
  Assertion want;
  want.exists = {{"a", Sort::Val}, {"b", Sort::Val}, {"l1", Sort::Seq}, {"l2", Sort::Seq}};
  want.locals["w"] = Term::var("a");
  want.locals["v"] = Term::var("b");
  want.pure = {PureProp::eq(Term::var("l"), Term::app(Term::rev(Term::var("l1")), Term::var("l2"))),
               PureProp::eq(Term::var("b"), Term::null())};
  want.spatial = {Chunk::list(Term::var("a"), Term::var("l1")), Chunk::list(Term::var("b"), Term::var("l2"))};
  const Assertion& got = rep.holes[0].value;
  int solved = solved_count(rep, true);
  d << "hole " << to_string(got) << "; " << solved << "/" << rep.entailments.size() << " solved";
  return alpha_equal(got, want) && solved == static_cast<int>(rep.entailments.size());
}

bool exit_counting(std::ostringstream& d) {
  auto built = build_corpus("reverse.c");
  const AStmt* loop = find_loop(function_named(built, "reverse").body);
  int loop_exits = loop ? count_normal_exit(*loop) : -1;
  AStmt guard = AStmt::if_({Cond::Kind::Truthy, Expr::var("v"), {}}, AStmt::skip(), AStmt::brk());
  int guard_breaks = count_break(guard);

  int checked = 0, mismatches = 0, exits = 0;
  std::string first;
  auto law = [&](const std::string& what, const std::function<int()>& vcs, const AStmt& body) {
    ++checked;
    int want = count_normal_exit(body);
    exits += want;
    int got = -1;
    try {
      got = vcs();
    } catch (const std::exception& e) {
      first = first.empty() ? what + ": " + e.what() : first;
    }
    if (got != want) {
      ++mismatches;
      if (first.empty()) first = what + ": count " + std::to_string(want) + " vs " + std::to_string(got) + " VCs";
    }
  };
  for (const char* file : {"reverse.c", "reverse_fig1.c", "append.c", "two.c"}) {
    auto r = build_corpus(file);
    for (const auto& f : r.functions)
      law(std::string(file) + ":" + f.name,
          [&] { return normal_slot_vcs(f.spec.with, f.spec.require, f.spec.ensure, f.body); }, f.body);
  }
  Gen g(2024);
  for (int i = 0; i < 200; ++i) {
    AStmt c = g.astmt(4);
    law("random #" + std::to_string(i), [&] { return normal_slot_vcs({}, Gen::exec_pre(), Assertion{}, c); }, c);
  }
  d << "reverse loop exits " << loop_exits << ", guard breaks " << guard_breaks << ", " << checked
    << " statements (" << exits << " normal exits), " << mismatches << " mismatches";
  if (!first.empty()) d << " (" << first << ")";
  return loop_exits == 1 && guard_breaks == 1 && mismatches == 0;
}

bool frontend_golden(std::ostringstream& d) {
  auto built = build_corpus("reverse.c");
  const BuiltFunction& f = function_named(built, "reverse");
  std::string golden = read_file(corpus_path("reverse.golden"));
  while (!golden.empty() && (golden.back() == '\n' || golden.back() == '\r')) golden.pop_back();
  bool same = sexpr(f.body) == golden;

  bool shape = f.spec.with == std::vector<Binder>{{"l", Sort::Seq}};
  const AStmt* loop = find_loop(f.body);
  shape = shape && loop && loop->assertion == loop->con_inv && loop->kids[1].kind == AStmt::Kind::Skip;
  const AStmt* body = loop ? expect_givens(&loop->kids[0], {"a", "b", "l1", "l2"}, d) : nullptr;
  shape = shape && body && body->kind == AStmt::Kind::Seq && body->kids[0].kind == AStmt::Kind::If;
  if (shape) {
    const AStmt& rest = body->kids[1];
    shape = rest.kind == AStmt::Kind::Seq && rest.kids[0].kind == AStmt::Kind::Assert &&
            expect_givens(&rest.kids[1], {"c", "x", "l2'"}, d) != nullptr;
  }
  d << (same ? "golden match" : "golden differs") << ", " << (shape ? "structure ok" : "structure wrong");
  return same && shape;
}

bool append_verified(std::ostringstream& d) {
  auto built = build_corpus("append.c");
  VcReport rep = verify_function(function_named(built, "append"));
  int valid = 0, solved = 0;
  for (const auto& e : rep.entailments) {
    valid += oracle_check(e).valid;
    solved += solve(e).kind == Verdict::Kind::Valid;
  }
  int n = static_cast<int>(rep.entailments.size());
  d << n << " VCs, " << valid << " oracle-valid, " << solved << " solved";
  return n > 0 && valid == n && solved == n;
}

bool solver_soundness(std::ostringstream& d) {
  auto t0 = Clock::now();
  Gen g(7);
  int valid = 0, violations = 0;
  std::string first;
  for (int i = 0; i < 500; ++i) {
    Entailment e = g.entailment(i % 2 == 0);
    if (solve(e).kind != Verdict::Kind::Valid) continue;
    ++valid;
    OracleResult o = oracle_check(e);
    if (!o.valid) {
      ++violations;
      if (first.empty()) first = to_string(e.lhs) + " ⊨ " + to_string(e.rhs);
    }
  }
  double t = seconds_since(t0);
  d << "500 entailments, " << valid << " solved, " << violations << " violations, " << t << " s";
  if (!first.empty()) d << " (" << first << ")";
  return violations == 0 && t < 60.0;
}

bool ae_strongest_post(std::ostringstream& d) {
  Gen g(11);
  int cases = 0, attempts = 0, violations = 0;
  long pre_models = 0, post_models = 0;
  std::string first;
  auto fail = [&](const std::string& why) {
    ++violations;
    if (first.empty()) first = why;
  };
  while (cases < 200 && attempts < 10000) {
    ++attempts;
    Gen::AeCase k = g.ae_case();
    Ctx ctx{k.sigma, {}};
    Assertion q;
    try {
      q = ae(ctx, k.pre, k.assign);
    } catch (const VerifyError&) {
      continue;
    }
    ++cases;
    Bounds b;
    collect_literals(k.pre, b.literals);
    collect_literals(q, b.literals);
    if (k.assign.value.kind == Expr::Kind::Int) b.literals.insert(k.assign.value.value);
    SortEnv sorts;
    for (const auto& s : k.sigma) sorts[s.name] = s.sort;
    auto keep = names_of(k.sigma);
    std::string what = to_string(k.pre) + " ; " + to_string(k.assign);

    std::set<std::string> reached;
    Stmt step = Stmt::assign_(k.assign);
    enumerate_models(k.sigma, {}, k.pre, b, [&](const ConcreteState& s) {
      ++pre_models;
      long fuel = 10;
      ExecResult r = exec_concrete(s, step, fuel);
      if (r.kind != ExecResult::Kind::Normal) {
        fail(what + ": " + exec_kind_name(r.kind));
        return true;
      }
      if (!satisfies(r.state, q, sorts, b, false)) fail(what + ": post state outside Q");
      reached.insert(to_string(canonical(r.state, keep, b)));
      return true;
    });
    enumerate_models(k.sigma, {}, q, b, [&](const ConcreteState& s) {
      ++post_models;
      if (!reached.count(to_string(canonical(s, keep, b)))) {
        fail(what + ": Q model not reached " + to_string(s));
        return false;
      }
      return true;
    });
  }
  d << cases << " pairs, " << pre_models << " pre models, " << post_models << " post models, " << violations << " violations";
  if (!first.empty()) d << " (" << first << ")";
  return cases == 200 && violations == 0;
}

bool desk_scale(std::ostringstream& d) {
  int bad_vcs = 0, inputs = 0, bad_runs = 0;
  std::string first;
  for (const auto& [file, fn] : {std::pair{"reverse.c", "reverse"}, std::pair{"append.c", "append"}}) {
    auto built = build_corpus(file);
    const BuiltFunction& f = function_named(built, fn);
    VcReport rep = verify_function(f);
    for (const auto& e : rep.entailments) bad_vcs += !oracle_check(e).valid;
    Bounds b;
    SortEnv sorts;
    for (const auto& w : f.spec.with) sorts[w.name] = w.sort;
    enumerate_models(f.spec.with, {}, f.spec.require, b, [&](const ConcreteState& s) {
      ++inputs;
      long fuel = 10000;
      ExecResult r = exec_concrete(s, f.plain, fuel);
      bool ok = (r.kind == ExecResult::Kind::Return || r.kind == ExecResult::Kind::Normal) &&
                satisfies(r.state, f.spec.ensure, sorts, b, false);
      if (!ok) {
        ++bad_runs;
        if (first.empty()) first = std::string(fn) + " " + exec_kind_name(r.kind) + " from " + to_string(s);
      }
      return true;
    });
  }
  d << bad_vcs << " VCs with countermodels, " << inputs << " inputs, " << bad_runs << " bad runs";
  if (!first.empty()) d << " (" << first << ")";
  return bad_vcs == 0 && bad_runs == 0 && inputs > 0;
}

}  // namespace

int main() {
  report("reverse end-to-end", reverse_end_to_end);
  report("postcondition omission", postcondition_omission);
  report("exit counting", exit_counting);
  report("frontend golden", frontend_golden);
  report("append", append_verified);
  report("solver soundness", solver_soundness);
  report("ae strongest post", ae_strongest_post);
  report("desk-scale soundness", desk_scale);
  return failures == 0 ? 0 : 1;
}
