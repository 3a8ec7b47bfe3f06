#include <algorithm>

#include "annoc/entail.hpp"

namespace annoc {

namespace {

Term canon_const(const Term& t) {
  if (t.kind == Term::Kind::Int && t.value == 0) return Term::null();
  return t;
}

bool seq_shaped(const Term& t) {
  using K = Term::Kind;
  return t.kind == K::Nil || t.kind == K::Cons || t.kind == K::App || t.kind == K::Rev;
}

// Atoms: cons(h, nil) for a single element, a variable, or rev of a variable.
void atoms_into(const Term& t, std::vector<Term>& out, long& steps) {
  using K = Term::Kind;
  ++steps;
  switch (t.kind) {
    case K::Nil:
      return;
    case K::Cons:
      out.push_back(Term::cons(canon_const(t.args[0]), Term::nil()));
      atoms_into(t.args[1], out, steps);
      return;
    case K::App:
      atoms_into(t.args[0], out, steps);
      atoms_into(t.args[1], out, steps);
      return;
    case K::Rev: {
      std::vector<Term> inner;
      atoms_into(t.args[0], inner, steps);
      for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
        ++steps;
        if (it->kind == K::Cons)
          out.push_back(*it);
        else if (it->kind == K::Rev)
          out.push_back(it->args[0]);
        else
          out.push_back(Term::rev(*it));
      }
      return;
    }
    default:
      out.push_back(t);
  }
}

Term rebuild(const std::vector<Term>& atoms) {
  Term acc = Term::nil();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    if (it->kind == Term::Kind::Cons)
      acc = Term::cons(it->args[0], acc);
    else if (acc.kind == Term::Kind::Nil)
      acc = *it;
    else
      acc = Term::app(*it, acc);
  }
  return acc;
}

}  // namespace

std::vector<Term> seq_atoms(const Term& t, long* steps) {
  long s = 0;
  std::vector<Term> out;
  atoms_into(t, out, s);
  if (steps) *steps += s;
  return out;
}

Term Rewriter::normalize(const Term& t) {
  using K = Term::Kind;
  if (lemmas) {
    if (!seq_shaped(t)) return canon_const(t);
    return rebuild(seq_atoms(t, &steps));
  }
  // Computation rules only.
  switch (t.kind) {
    case K::Cons:
      return Term::cons(normalize(t.args[0]), normalize(t.args[1]));
    case K::Rev: {
      Term x = normalize(t.args[0]);
      if (x.kind == K::Nil) {
        ++steps;
        return Term::nil();
      }
      if (x.kind == K::Cons) {
        ++steps;
        return normalize(Term::app(Term::rev(x.args[1]), Term::cons(x.args[0], Term::nil())));
      }
      return Term::rev(x);
    }
    case K::App: {
      Term a = normalize(t.args[0]);
      Term b = normalize(t.args[1]);
      if (a.kind == K::Nil) {
        ++steps;
        return b;
      }
      if (a.kind == K::Cons) {
        ++steps;
        return Term::cons(a.args[0], normalize(Term::app(a.args[1], b)));
      }
      return Term::app(a, b);
    }
    default:
      return canon_const(t);
  }
}

bool Rewriter::equal(const Term& a, const Term& b) { return normalize(a) == normalize(b); }

}  // namespace annoc
