#include "annoc/symexec.hpp"

namespace annoc {

Term eval_expr(const Assertion& p, const Expr& e, Loc loc) {
  switch (e.kind) {
    case Expr::Kind::Null:
      return Term::null();
    case Expr::Kind::Int:
      return Term::integer(e.value);
    case Expr::Kind::Var: {
      auto it = p.locals.find(e.name);
      if (it == p.locals.end())
        throw VerifyError("UnboundProgVar", loc, "program variable " + e.name + " has no value here");
      return it->second;
    }
  }
  return Term::null();
}

bool has_falsum(const Assertion& p) {
  for (const auto& q : p.pure)
    if (q.is_falsum()) return true;
  return false;
}

Closure facts_closure(const Ctx& ctx, const Assertion& p) {
  Closure cl;
  for (const auto& q : ctx.gamma) cl.add(q);
  for (const auto& q : p.pure) cl.add(q);
  for (const auto& c : p.spatial)
    if (c.kind == Chunk::Kind::PointsTo) cl.add_neq(c.addr, Term::null());
  return cl;
}

namespace {

std::size_t find_chunk(const Ctx& ctx, const Assertion& p, const Term& addr, const std::string& field, Loc loc) {
  Closure cl = facts_closure(ctx, p);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < p.spatial.size(); ++i) {
    const Chunk& c = p.spatial[i];
    if (c.kind == Chunk::Kind::PointsTo && cl.equal(c.addr, addr)) hits.push_back(i);
  }
  if (hits.empty())
    throw VerifyError("NoChunk", loc, "no points-to for " + to_string(addr) + " to access field " + field);
  if (hits.size() > 1)
    throw VerifyError("AmbiguousChunk", loc, "several points-to chunks match " + to_string(addr));
  return hits[0];
}

std::size_t field_index(const Chunk& c, const std::string& field, Loc loc) {
  for (std::size_t i = 0; i < c.fields.size(); ++i)
    if (c.fields[i].first == field) return i;
  throw VerifyError("NoField", loc, "record " + c.record + " has no field " + field);
}

}  // namespace

Assertion ae(const Ctx& ctx, const Assertion& p, const Assign& c, Loc loc) {
  Assertion q = p;
  switch (c.form) {
    case Assign::Form::Copy:
      q.locals[c.target] = eval_expr(p, c.value, loc);
      return q;
    case Assign::Form::Load: {
      Term a = eval_expr(p, c.base, loc);
      if (has_falsum(p)) {
        q.locals[c.target] = Term::null();
        return q;
      }
      const Chunk& ch = p.spatial[find_chunk(ctx, p, a, c.field, loc)];
      q.locals[c.target] = ch.fields[field_index(ch, c.field, loc)].second;
      return q;
    }
    case Assign::Form::Store: {
      Term a = eval_expr(p, c.base, loc);
      Term v = eval_expr(p, c.value, loc);
      if (has_falsum(p)) return q;
      std::size_t i = find_chunk(ctx, p, a, c.field, loc);
      Chunk& ch = q.spatial[i];
      ch.fields[field_index(ch, c.field, loc)].second = v;
      return q;
    }
  }
  return q;
}

PureProp branch_fact(const Assertion& p, const Cond& b, bool branch, Loc loc) {
  Term l = eval_expr(p, b.lhs, loc);
  Term r = b.kind == Cond::Kind::Truthy ? Term::null() : eval_expr(p, b.rhs, loc);
  bool eq = b.kind == Cond::Kind::Eq;  // Truthy and Ne test for inequality
  if (!branch) eq = !eq;
  return eq ? PureProp::eq(l, r) : PureProp::neq(l, r);
}

Assertion norm_cond(const Ctx& ctx, const Assertion& p, const Cond& b, bool branch, Loc loc) {
  Assertion q = p;
  q.pure.push_back(branch_fact(p, b, branch, loc));
  if (has_falsum(p)) return q;
  Closure cl = facts_closure(ctx, q);
  bool dup = false;
  for (std::size_t i = 0; i < q.spatial.size() && !dup; ++i)
    for (std::size_t j = i + 1; j < q.spatial.size() && !dup; ++j)
      if (q.spatial[i].kind == Chunk::Kind::PointsTo && q.spatial[j].kind == Chunk::Kind::PointsTo &&
          cl.equal(q.spatial[i].addr, q.spatial[j].addr))
        dup = true;
  if (dup || cl.inconsistent()) q.pure.push_back(PureProp::falsum());
  return q;
}

}  // namespace annoc
