#include "annoc/ast.hpp"

#include <algorithm>

namespace annoc {

const char* sort_name(Sort s) { return s == Sort::Val ? "Val" : "Seq"; }

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}
Term Term::null() { return Term{}; }
Term Term::integer(std::int64_t v) {
  Term t;
  t.kind = Kind::Int;
  t.value = v;
  return t;
}
Term Term::nil() {
  Term t;
  t.kind = Kind::Nil;
  return t;
}
Term Term::cons(Term head, Term tail) {
  Term t;
  t.kind = Kind::Cons;
  t.args = {std::move(head), std::move(tail)};
  return t;
}
Term Term::app(Term l, Term r) {
  Term t;
  t.kind = Kind::App;
  t.args = {std::move(l), std::move(r)};
  return t;
}
Term Term::rev(Term x) {
  Term t;
  t.kind = Kind::Rev;
  t.args = {std::move(x)};
  return t;
}

bool Term::operator==(const Term& o) const {
  return kind == o.kind && name == o.name && value == o.value && args == o.args;
}

bool Term::operator<(const Term& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (name != o.name) return name < o.name;
  if (value != o.value) return value < o.value;
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
}

bool PureProp::is_falsum() const {
  return op == Op::Eq && lhs.is_const() && rhs.is_const() &&
         lhs.const_value() != rhs.const_value();
}

Chunk Chunk::points_to(Term addr, std::string record,
                       std::vector<std::pair<std::string, Term>> fields) {
  Chunk c;
  c.kind = Kind::PointsTo;
  c.addr = std::move(addr);
  c.record = std::move(record);
  c.fields = std::move(fields);
  return c;
}
Chunk Chunk::list(Term addr, Term contents) {
  Chunk c;
  c.kind = Kind::ListPred;
  c.addr = std::move(addr);
  c.contents = std::move(contents);
  return c;
}
Chunk Chunk::segment(Term addr, Term end, Term contents) {
  Chunk c;
  c.kind = Kind::ListSeg;
  c.addr = std::move(addr);
  c.end = std::move(end);
  c.contents = std::move(contents);
  return c;
}

// ---------------------------------------------------------------------------

Stmt Stmt::skip(Loc l) {
  Stmt s;
  s.loc = l;
  return s;
}
Stmt Stmt::seq(Stmt a, Stmt b) {
  Stmt s;
  s.kind = Kind::Seq;
  s.loc = a.loc;
  s.kids = {std::move(a), std::move(b)};
  return s;
}
Stmt Stmt::if_(annoc::Cond c, Stmt t, Stmt e, Loc l) {
  Stmt s;
  s.kind = Kind::If;
  s.loc = l;
  s.cond = std::move(c);
  s.kids = {std::move(t), std::move(e)};
  return s;
}
Stmt Stmt::loop(Stmt body, Stmt incr, Loc l) {
  Stmt s;
  s.kind = Kind::Loop;
  s.loc = l;
  s.kids = {std::move(body), std::move(incr)};
  return s;
}
Stmt Stmt::assign_(annoc::Assign a, Loc l) {
  Stmt s;
  s.kind = Kind::Assign;
  s.loc = l;
  s.assign = std::move(a);
  return s;
}
Stmt Stmt::brk(Loc l) {
  Stmt s;
  s.kind = Kind::Break;
  s.loc = l;
  return s;
}
Stmt Stmt::cont(Loc l) {
  Stmt s;
  s.kind = Kind::Continue;
  s.loc = l;
  return s;
}
Stmt Stmt::return_(std::optional<Expr> e, Loc l) {
  Stmt s;
  s.kind = Kind::Return;
  s.loc = l;
  s.ret = std::move(e);
  return s;
}

bool Stmt::operator==(const Stmt& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Assign:
      return assign == o.assign;
    case Kind::If:
      return cond == o.cond && kids == o.kids;
    case Kind::Return:
      return ret == o.ret;
    default:
      return kids == o.kids;
  }
}

AStmt AStmt::skip(Loc l) {
  AStmt s;
  s.loc = l;
  return s;
}
AStmt AStmt::assert_(Assertion a, Loc l) {
  AStmt s;
  s.kind = Kind::Assert;
  s.loc = l;
  s.assertion = std::move(a);
  return s;
}
AStmt AStmt::seq(AStmt head, AStmt rest) {
  AStmt s;
  s.kind = Kind::Seq;
  s.loc = head.loc;
  s.kids = {std::move(head), std::move(rest)};
  return s;
}
AStmt AStmt::given(Binder b, AStmt scope, Loc l) {
  AStmt s;
  s.kind = Kind::Given;
  s.loc = l;
  s.binder = std::move(b);
  s.kids = {std::move(scope)};
  return s;
}
AStmt AStmt::if_(annoc::Cond c, AStmt t, AStmt e, Loc l) {
  AStmt s;
  s.kind = Kind::If;
  s.loc = l;
  s.cond = std::move(c);
  s.kids = {std::move(t), std::move(e)};
  return s;
}
AStmt AStmt::loop(Assertion inv, Assertion con_inv, AStmt body, AStmt incr, Loc l) {
  AStmt s;
  s.kind = Kind::Loop;
  s.loc = l;
  s.assertion = std::move(inv);
  s.con_inv = std::move(con_inv);
  s.kids = {std::move(body), std::move(incr)};
  return s;
}
AStmt AStmt::assign_(annoc::Assign a, Loc l) {
  AStmt s;
  s.kind = Kind::Assign;
  s.loc = l;
  s.assign = std::move(a);
  return s;
}
AStmt AStmt::brk(Loc l) {
  AStmt s;
  s.kind = Kind::Break;
  s.loc = l;
  return s;
}
AStmt AStmt::cont(Loc l) {
  AStmt s;
  s.kind = Kind::Continue;
  s.loc = l;
  return s;
}
AStmt AStmt::return_(std::optional<Expr> e, Loc l) {
  AStmt s;
  s.kind = Kind::Return;
  s.loc = l;
  s.ret = std::move(e);
  return s;
}

bool AStmt::operator==(const AStmt& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Assert:
      return assertion == o.assertion;
    case Kind::Assign:
      return assign == o.assign;
    case Kind::If:
      return cond == o.cond && kids == o.kids;
    case Kind::Loop:
      return assertion == o.assertion && con_inv == o.con_inv && kids == o.kids;
    case Kind::Return:
      return ret == o.ret;
    case Kind::Given:
      return binder == o.binder && kids == o.kids;
    default:
      return kids == o.kids;
  }
}

// ---------------------------------------------------------------------------
// Erasure

namespace {

bool annotation_only(const AStmt& c) {
  switch (c.kind) {
    case AStmt::Kind::Assert:
      return true;
    case AStmt::Kind::Given:
      return annotation_only(c.kids[0]);
    case AStmt::Kind::Seq:
      return annotation_only(c.kids[0]) && annotation_only(c.kids[1]);
    default:
      return false;
  }
}

}  // namespace

Stmt erase_annotations(const AStmt& c) {
  using K = AStmt::Kind;
  switch (c.kind) {
    case K::Skip:
    case K::Assert:
      return Stmt::skip(c.loc);
    case K::Given:
      return erase_annotations(c.kids[0]);
    case K::If:
      return Stmt::if_(c.cond, erase_annotations(c.kids[0]), erase_annotations(c.kids[1]), c.loc);
    case K::Loop:
      return Stmt::loop(erase_annotations(c.kids[0]), erase_annotations(c.kids[1]), c.loc);
    case K::Assign:
      return Stmt::assign_(c.assign, c.loc);
    case K::Break:
      return Stmt::brk(c.loc);
    case K::Continue:
      return Stmt::cont(c.loc);
    case K::Return:
      return Stmt::return_(c.ret, c.loc);
    case K::Seq: {
      const AStmt& head = c.kids[0];
      const AStmt& rest = c.kids[1];
      if (annotation_only(head)) return erase_annotations(rest);
      if (annotation_only(rest)) return erase_annotations(head);
      return Stmt::seq(erase_annotations(head), erase_annotations(rest));
    }
  }
  return Stmt::skip();
}

// ---------------------------------------------------------------------------
// Variables

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Var) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars(const PureProp& p, std::vector<std::string>& out) {
  collect_vars(p.lhs, out);
  collect_vars(p.rhs, out);
}

void collect_vars(const Chunk& c, std::vector<std::string>& out) {
  collect_vars(c.addr, out);
  switch (c.kind) {
    case Chunk::Kind::PointsTo:
      for (const auto& [f, v] : c.fields) collect_vars(v, out);
      break;
    case Chunk::Kind::ListPred:
      collect_vars(c.contents, out);
      break;
    case Chunk::Kind::ListSeg:
      collect_vars(c.end, out);
      collect_vars(c.contents, out);
      break;
  }
}

std::vector<std::string> free_logical_vars(const Assertion& a) {
  std::vector<std::string> all;
  for (const auto& [x, t] : a.locals) collect_vars(t, all);
  for (const auto& p : a.pure) collect_vars(p, all);
  for (const auto& c : a.spatial) collect_vars(c, all);
  std::vector<std::string> out;
  for (auto& n : all) {
    bool bound = std::any_of(a.exists.begin(), a.exists.end(),
                             [&](const Binder& b) { return b.name == n; });
    if (!bound) out.push_back(std::move(n));
  }
  return out;
}

bool occurs(const std::string& name, const Term& t) {
  if (t.kind == Term::Kind::Var) return t.name == name;
  return std::any_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return occurs(name, a); });
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string n = base;
  while (taken.count(n)) n += "'";
  return n;
}

std::optional<Sort> sort_of(const Term& t, const std::map<std::string, Sort>& env) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case K::Null:
    case K::Int:
      return Sort::Val;
    case K::Nil:
      return Sort::Seq;
    case K::Cons:
      if (sort_of(t.args[0], env) != Sort::Val || sort_of(t.args[1], env) != Sort::Seq)
        return std::nullopt;
      return Sort::Seq;
    case K::App:
      if (sort_of(t.args[0], env) != Sort::Seq || sort_of(t.args[1], env) != Sort::Seq)
        return std::nullopt;
      return Sort::Seq;
    case K::Rev:
      if (sort_of(t.args[0], env) != Sort::Seq) return std::nullopt;
      return Sort::Seq;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Well-typedness

namespace {

bool assertion_closed(const std::set<std::string>& scope, const Assertion& a,
                      std::string* unbound) {
  for (const auto& n : free_logical_vars(a)) {
    if (!scope.count(n)) {
      if (unbound) *unbound = n;
      return false;
    }
  }
  return true;
}

bool well_typed_in(std::set<std::string>& scope, const AStmt& c, std::string* unbound) {
  using K = AStmt::Kind;
  switch (c.kind) {
    case K::Assert:
      return assertion_closed(scope, c.assertion, unbound);
    case K::Loop:
      return assertion_closed(scope, c.assertion, unbound) &&
             assertion_closed(scope, c.con_inv, unbound) &&
             well_typed_in(scope, c.kids[0], unbound) && well_typed_in(scope, c.kids[1], unbound);
    case K::Given: {
      bool fresh = scope.insert(c.binder.name).second;
      bool ok = well_typed_in(scope, c.kids[0], unbound);
      if (fresh) scope.erase(c.binder.name);
      return ok;
    }
    case K::If:
    case K::Seq:
      return well_typed_in(scope, c.kids[0], unbound) && well_typed_in(scope, c.kids[1], unbound);
    default:
      return true;
  }
}

}  // namespace

bool well_typed(const std::vector<Binder>& scope, const AStmt& c, std::string* unbound) {
  std::set<std::string> names;
  for (const auto& b : scope) names.insert(b.name);
  return well_typed_in(names, c, unbound);
}

// ---------------------------------------------------------------------------
// Substitution

Term subst(const Term& t, const TermMap& m) {
  if (t.kind == Term::Kind::Var) {
    auto it = m.find(t.name);
    return it == m.end() ? t : it->second;
  }
  if (t.args.empty()) return t;
  Term r = t;
  for (auto& a : r.args) a = subst(a, m);
  return r;
}

PureProp subst(const PureProp& p, const TermMap& m) {
  return {p.op, subst(p.lhs, m), subst(p.rhs, m)};
}

Chunk subst(const Chunk& c, const TermMap& m) {
  Chunk r = c;
  r.addr = subst(c.addr, m);
  for (auto& [f, v] : r.fields) v = subst(v, m);
  r.contents = subst(c.contents, m);
  r.end = subst(c.end, m);
  return r;
}

namespace {

std::set<std::string> range_vars(const TermMap& m) {
  std::vector<std::string> vs;
  for (const auto& [k, v] : m) collect_vars(v, vs);
  return {vs.begin(), vs.end()};
}

// Adjusts `m` for entering the scope of binder `b`; returns the binder's new
// name (renamed if it would capture a variable of the mapping's range).
std::string enter_binder(const std::string& b, TermMap& m, const std::set<std::string>& avoid) {
  m.erase(b);
  if (m.empty()) return b;
  auto rv = range_vars(m);
  if (!rv.count(b)) return b;
  std::set<std::string> taken = rv;
  taken.insert(avoid.begin(), avoid.end());
  for (const auto& [k, v] : m) taken.insert(k);
  std::string nb = fresh_name(b, taken);
  m[b] = Term::var(nb);
  return nb;
}

std::set<std::string> assertion_names(const Assertion& a) {
  std::vector<std::string> vs;
  for (const auto& [x, t] : a.locals) collect_vars(t, vs);
  for (const auto& p : a.pure) collect_vars(p, vs);
  for (const auto& c : a.spatial) collect_vars(c, vs);
  std::set<std::string> s(vs.begin(), vs.end());
  for (const auto& b : a.exists) s.insert(b.name);
  return s;
}

}  // namespace

Assertion subst(const Assertion& a, const TermMap& m0) {
  TermMap m = m0;
  auto avoid = assertion_names(a);
  Assertion r;
  for (const auto& b : a.exists) r.exists.push_back({enter_binder(b.name, m, avoid), b.sort});
  for (const auto& [x, t] : a.locals) r.locals[x] = subst(t, m);
  for (const auto& p : a.pure) r.pure.push_back(subst(p, m));
  for (const auto& c : a.spatial) r.spatial.push_back(subst(c, m));
  return r;
}

AStmt subst(const AStmt& c, const TermMap& m0) {
  if (m0.empty()) return c;
  AStmt r = c;
  switch (c.kind) {
    case AStmt::Kind::Assert:
      r.assertion = subst(c.assertion, m0);
      break;
    case AStmt::Kind::Loop:
      r.assertion = subst(c.assertion, m0);
      r.con_inv = subst(c.con_inv, m0);
      r.kids[0] = subst(c.kids[0], m0);
      r.kids[1] = subst(c.kids[1], m0);
      break;
    case AStmt::Kind::Given: {
      TermMap m = m0;
      r.binder.name = enter_binder(c.binder.name, m, {});
      r.kids[0] = subst(c.kids[0], m);
      break;
    }
    case AStmt::Kind::If:
    case AStmt::Kind::Seq:
      r.kids[0] = subst(c.kids[0], m0);
      r.kids[1] = subst(c.kids[1], m0);
      break;
    default:
      break;
  }
  return r;
}

}  // namespace annoc
