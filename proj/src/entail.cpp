#include "annoc/entail.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "annoc/closure.hpp"

namespace annoc {

namespace {

using K = Term::Kind;

bool is_seq_term(const Term& t) {
  return t.kind == K::Nil || t.kind == K::Cons || t.kind == K::App || t.kind == K::Rev;
}

bool clash(const Term& a, const Term& b) {
  if (a.is_const() && b.is_const()) return a.const_value() != b.const_value();
  return (a.kind == K::Nil && b.kind == K::Cons) || (a.kind == K::Cons && b.kind == K::Nil);
}

bool find_sub(const std::vector<Term>& hay, const std::vector<Term>& needle, std::size_t& at) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i)
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(i))) {
      at = i;
      return true;
    }
  return false;
}

struct SeqRule {
  std::vector<Term> from, to;
};

// Known sequence equations as oriented atom-list rewrites, longer to shorter.
std::vector<SeqRule> seq_rules(const std::vector<PureProp>& known) {
  std::vector<SeqRule> rules;
  for (const auto& p : known) {
    if (p.op != PureProp::Op::Eq) continue;
    if (!is_seq_term(p.lhs) && !is_seq_term(p.rhs)) continue;
    auto a = seq_atoms(p.lhs), b = seq_atoms(p.rhs);
    if (a == b) continue;
    bool a_big = a.size() != b.size() ? a.size() > b.size() : b < a;
    if (a_big)
      rules.push_back({a, b});
    else
      rules.push_back({b, a});
  }
  return rules;
}

std::vector<Term> apply_rules(std::vector<Term> xs, const std::vector<SeqRule>& rules) {
  for (int round = 0; round < 64; ++round) {
    bool hit = false;
    for (const auto& r : rules) {
      std::size_t at = 0;
      if (!find_sub(xs, r.from, at)) continue;
      std::vector<Term> ys(xs.begin(), xs.begin() + static_cast<long>(at));
      ys.insert(ys.end(), r.to.begin(), r.to.end());
      ys.insert(ys.end(), xs.begin() + static_cast<long>(at + r.from.size()), xs.end());
      xs = std::move(ys);
      hit = true;
      break;
    }
    if (!hit) break;
  }
  return xs;
}

Term rebuild_atoms(const std::vector<Term>& atoms) {
  Term acc = Term::nil();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    if (it->kind == K::Cons)
      acc = Term::cons(it->args[0], acc);
    else if (acc.kind == K::Nil)
      acc = *it;
    else
      acc = Term::app(*it, acc);
  }
  return acc;
}

Closure closure_of(const std::vector<PureProp>& known, Rewriter& rw) {
  Closure cl;
  for (const auto& p : known) {
    cl.add(p);
    PureProp n = p;
    n.lhs = rw.normalize(p.lhs);
    n.rhs = rw.normalize(p.rhs);
    cl.add(n);
  }
  return cl;
}

bool prove(const PureProp& goal, const std::vector<PureProp>& known, bool lemmas, std::string* how) {
  Rewriter rw{lemmas};
  Term a = rw.normalize(goal.lhs), b = rw.normalize(goal.rhs);
  if (goal.op == PureProp::Op::Eq) {
    if (a == b) {
      if (how) *how = "rewriting";
      return true;
    }
    Closure cl = closure_of(known, rw);
    if (cl.inconsistent() || cl.equal(a, b)) {
      if (how) *how = "congruence";
      return true;
    }
    if (lemmas && (is_seq_term(a) || is_seq_term(b) || a.is_var() || b.is_var())) {
      auto rules = seq_rules(known);
      if (!rules.empty()) {
        Term ra = rebuild_atoms(apply_rules(seq_atoms(a), rules));
        Term rb = rebuild_atoms(apply_rules(seq_atoms(b), rules));
        if (ra == rb || cl.equal(ra, rb)) {
          if (how) *how = "rewriting with hypotheses";
          return true;
        }
      }
    }
    return false;
  }
  if (clash(a, b)) {
    if (how) *how = "distinct constructors";
    return true;
  }
  Closure cl = closure_of(known, rw);
  cl.add_eq(a, b);
  cl.add_eq(goal.lhs, goal.rhs);
  if (cl.inconsistent()) {
    if (how) *how = "congruence";
    return true;
  }
  return false;
}

class Solver {
 public:
  Solver(const Entailment& e, const SolveOptions& opt) : e_(e), opt_(opt) {}

  Verdict run();

 private:
  const Entailment& e_;
  SolveOptions opt_;
  Verdict v_;
  TermMap sigma_;  // eliminated left-hand variables
  TermMap theta_;  // witnesses for right-hand existentials
  std::set<std::string> uvars_;
  std::set<std::string> taken_;
  std::vector<PureProp> known_;
  std::vector<Chunk> lhs_;
  std::vector<PureProp> goals_;
  std::set<std::string> split_done_;
  bool contra_ = false;

  void note(std::string s) { v_.trace.push_back(std::move(s)); }
  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, taken_);
    taken_.insert(n);
    return n;
  }
  std::string fresh_uvar(const std::string& base) {
    std::string n = fresh("?" + base);
    uvars_.insert(n);
    return n;
  }

  Term canon(const Term& t) const;
  Chunk canon(const Chunk& c) const;
  bool open_uvar(const Term& t) const { return t.is_var() && uvars_.count(t.name) && !theta_.count(t.name); }
  bool has_open(const Term& t) const;

  void assume_eq(const Term& a, const Term& b);
  void assume_neq(const Term& a, const Term& b) { known_.push_back(PureProp::neq(canon(a), canon(b))); }
  void assume(const PureProp& p) {
    if (p.op == PureProp::Op::Eq)
      assume_eq(p.lhs, p.rhs);
    else
      assume_neq(p.lhs, p.rhs);
  }
  std::vector<PureProp> facts() const;
  bool provably_eq(const Term& a, const Term& b) const;
  bool provably_neq(const Term& a, const Term& b) const;
  bool same(const Term& a, const Term& b) const;

  void unify(const Term& a, const Term& b);
  void derive();
  bool one_step(std::vector<Chunk>& work);
  int find_lhs(Chunk::Kind k, const Term& addr) const;
  bool unfold_at(const Chunk& want);
  bool bind_open_addr(std::vector<Chunk>& work);
  bool settle_goals();
  bool bind_structurally(const Term& x, const Term& y);
};

Term Solver::canon(const Term& t) const {
  switch (t.kind) {
    case K::Var: {
      if (auto it = sigma_.find(t.name); it != sigma_.end()) return canon(it->second);
      if (auto it = theta_.find(t.name); it != theta_.end()) return canon(it->second);
      return t;
    }
    case K::Int:
      return t.value == 0 ? Term::null() : t;
    case K::Cons:
    case K::App:
    case K::Rev: {
      Term r = t;
      for (auto& a : r.args) a = canon(a);
      return r;
    }
    default:
      return t;
  }
}

Chunk Solver::canon(const Chunk& c) const {
  Chunk r = c;
  r.addr = canon(c.addr);
  for (auto& f : r.fields) f.second = canon(f.second);
  r.contents = canon(c.contents);
  r.end = canon(c.end);
  return r;
}

bool Solver::has_open(const Term& t) const {
  std::vector<std::string> vs;
  collect_vars(canon(t), vs);
  for (const auto& v : vs)
    if (uvars_.count(v) && !theta_.count(v)) return true;
  return false;
}

void Solver::assume_eq(const Term& x, const Term& y) {
  Term a = canon(x), b = canon(y);
  if (a == b) return;
  const Term* var = nullptr;
  const Term* other = nullptr;
  if (a.is_var() && !occurs(a.name, b)) {
    var = &a;
    other = &b;
  } else if (b.is_var() && !occurs(b.name, a)) {
    var = &b;
    other = &a;
  }
  if (var) {
    sigma_[var->name] = *other;
    note("eliminate " + var->name + " := " + to_string(*other));
    auto old = std::move(known_);
    known_.clear();
    for (const auto& p : old) assume(p);
    return;
  }
  if (a.kind == K::Cons && b.kind == K::Cons) {
    assume_eq(a.args[0], b.args[0]);
    assume_eq(a.args[1], b.args[1]);
    return;
  }
  if (clash(a, b)) {
    contra_ = true;
    note("clash " + to_string(a) + " = " + to_string(b));
    return;
  }
  known_.push_back(PureProp::eq(a, b));
}

std::vector<PureProp> Solver::facts() const {
  std::vector<PureProp> fs;
  for (const auto& p : known_) fs.push_back({p.op, canon(p.lhs), canon(p.rhs)});
  std::vector<Term> cells;
  for (const auto& c0 : lhs_) {
    Chunk c = canon(c0);
    if (c.kind == Chunk::Kind::PointsTo) {
      fs.push_back(PureProp::neq(c.addr, Term::null()));
      for (const auto& o : cells) fs.push_back(PureProp::neq(c.addr, o));
      cells.push_back(c.addr);
    } else if (c.contents.kind == K::Cons) {
      fs.push_back(PureProp::neq(c.addr, Term::null()));
    }
  }
  return fs;
}

bool Solver::provably_eq(const Term& a, const Term& b) const {
  Term x = canon(a), y = canon(b);
  if (x == y) return true;
  Closure cl;
  for (const auto& p : facts()) cl.add(p);
  return cl.equal(x, y);
}

bool Solver::provably_neq(const Term& a, const Term& b) const {
  Term x = canon(a), y = canon(b);
  if (clash(x, y)) return true;
  Closure cl;
  for (const auto& p : facts()) cl.add(p);
  cl.add_eq(x, y);
  return cl.inconsistent();
}

bool Solver::same(const Term& a, const Term& b) const {
  Term x = canon(a), y = canon(b);
  if (x == y) return true;
  if (has_open(x) || has_open(y)) return false;
  return provably_eq(x, y);
}

void Solver::unify(const Term& x, const Term& y) {
  Term a = canon(x), b = canon(y);
  if (a == b) return;
  if (open_uvar(a) && !occurs(a.name, b)) {
    theta_[a.name] = b;
    return;
  }
  if (open_uvar(b) && !occurs(b.name, a)) {
    theta_[b.name] = a;
    return;
  }
  if (a.kind == K::Cons && b.kind == K::Cons) {
    unify(a.args[0], b.args[0]);
    unify(a.args[1], b.args[1]);
    return;
  }
  goals_.push_back(PureProp::eq(a, b));
}

// Consequences of the left-hand list predicates, to a fixpoint.
void Solver::derive() {
  for (int round = 0; round < 64 && !contra_; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < lhs_.size() && !changed; ++i) {
      Chunk c = canon(lhs_[i]);
      if (c.kind == Chunk::Kind::PointsTo) continue;
      std::string key = to_string(c);
      if (c.kind == Chunk::Kind::ListPred) {
        if (c.addr.kind == K::Null || provably_eq(c.addr, Term::null())) {
          note("empty list at NULL: " + key);
          assume_eq(c.contents, Term::nil());
          lhs_.erase(lhs_.begin() + static_cast<long>(i));
          changed = true;
        } else if (c.contents.kind == K::Nil) {
          note("nil contents: " + key);
          assume_eq(c.addr, Term::null());
          lhs_.erase(lhs_.begin() + static_cast<long>(i));
          changed = true;
        } else if (c.contents.kind != K::Cons && !split_done_.count(key) &&
                   provably_neq(c.addr, Term::null())) {
          split_done_.insert(key);
          std::string h = fresh("h#"), t = fresh("t#");
          note("nonempty list: " + key);
          assume_eq(c.contents, Term::cons(Term::var(h), Term::var(t)));
          changed = true;
        }
      } else {
        if (c.contents.kind == K::Nil) {
          note("empty segment: " + key);
          assume_eq(c.addr, c.end);
          lhs_.erase(lhs_.begin() + static_cast<long>(i));
          changed = true;
        } else if (c.contents.kind != K::Cons && !split_done_.count(key) && provably_neq(c.addr, c.end)) {
          split_done_.insert(key);
          std::string h = fresh("h#"), t = fresh("t#");
          note("nonempty segment: " + key);
          assume_eq(c.contents, Term::cons(Term::var(h), Term::var(t)));
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
}

int Solver::find_lhs(Chunk::Kind k, const Term& addr) const {
  for (std::size_t i = 0; i < lhs_.size(); ++i)
    if (lhs_[i].kind == k && same(lhs_[i].addr, addr)) return static_cast<int>(i);
  return -1;
}

// Unfolds a left-hand list or segment starting at want.addr into a cell.
bool Solver::unfold_at(const Chunk& want) {
  if (want.record != opt_.list.record) return false;
  for (std::size_t i = 0; i < lhs_.size(); ++i) {
    Chunk c = canon(lhs_[i]);
    if (c.kind == Chunk::Kind::PointsTo || !same(c.addr, want.addr)) continue;
    bool nonempty = c.contents.kind == K::Cons ||
                    (c.kind == Chunk::Kind::ListPred ? provably_neq(c.addr, Term::null())
                                                     : provably_neq(c.addr, c.end));
    if (!nonempty) continue;
    Term h, t;
    if (c.contents.kind == K::Cons) {
      h = c.contents.args[0];
      t = c.contents.args[1];
    } else {
      h = Term::var(fresh("h#"));
      t = Term::var(fresh("t#"));
      assume_eq(c.contents, Term::cons(h, t));
    }
    Term n = Term::var(fresh("n#"));
    note("unfold " + to_string(c));
    Chunk cell = Chunk::points_to(c.addr, opt_.list.record, {{opt_.list.value_field, h}, {opt_.list.next_field, n}});
    Chunk rest = c.kind == Chunk::Kind::ListPred ? Chunk::list(n, t) : Chunk::segment(n, c.end, t);
    lhs_.erase(lhs_.begin() + static_cast<long>(i));
    lhs_.push_back(cell);
    lhs_.push_back(rest);
    return true;
  }
  return false;
}

const Term* field_of(const Chunk& c, const std::string& f) {
  for (const auto& [n, t] : c.fields)
    if (n == f) return &t;
  return nullptr;
}

// One matching step on the first right-hand chunk that admits one.
bool Solver::one_step(std::vector<Chunk>& work) {
  for (std::size_t w = 0; w < work.size(); ++w) {
    Chunk r = canon(work[w]);
    auto done = [&](std::vector<Chunk> more) {
      work.erase(work.begin() + static_cast<long>(w));
      work.insert(work.begin(), more.begin(), more.end());
      return true;
    };
    auto take = [&](int i) { lhs_.erase(lhs_.begin() + i); };
    if (open_uvar(r.addr)) continue;
    switch (r.kind) {
      case Chunk::Kind::PointsTo: {
        int i = find_lhs(Chunk::Kind::PointsTo, r.addr);
        if (i >= 0) {
          Chunk l = canon(lhs_[static_cast<std::size_t>(i)]);
          if (l.record != r.record) break;
          for (const auto& [f, t] : r.fields) {
            const Term* lt = field_of(l, f);
            if (!lt) return false;
            unify(t, *lt);
          }
          note("match " + to_string(l));
          take(i);
          return done({});
        }
        if (unfold_at(r)) return true;
        break;
      }
      case Chunk::Kind::ListPred: {
        if (int i = find_lhs(Chunk::Kind::ListPred, r.addr); i >= 0) {
          note("match " + to_string(canon(lhs_[static_cast<std::size_t>(i)])));
          unify(r.contents, lhs_[static_cast<std::size_t>(i)].contents);
          take(i);
          return done({});
        }
        if (r.addr.kind == K::Null || (!has_open(r.addr) && provably_eq(r.addr, Term::null()))) {
          unify(r.contents, Term::nil());
          note("empty list " + to_string(r));
          return done({});
        }
        if (int i = find_lhs(Chunk::Kind::PointsTo, r.addr); i >= 0) {
          Chunk l = canon(lhs_[static_cast<std::size_t>(i)]);
          const Term* h = field_of(l, opt_.list.value_field);
          const Term* n = field_of(l, opt_.list.next_field);
          if (l.record != opt_.list.record || !h || !n) break;
          Term k = Term::var(fresh_uvar("k#"));
          unify(r.contents, Term::cons(*h, k));
          note("fold " + to_string(l));
          Term next = *n;
          take(i);
          return done({Chunk::list(next, k)});
        }
        if (int i = find_lhs(Chunk::Kind::ListSeg, r.addr); i >= 0) {
          Chunk l = canon(lhs_[static_cast<std::size_t>(i)]);
          Term k = Term::var(fresh_uvar("k#"));
          unify(r.contents, Term::app(l.contents, k));
          note("fold segment " + to_string(l));
          take(i);
          return done({Chunk::list(l.end, k)});
        }
        break;
      }
      case Chunk::Kind::ListSeg: {
        if (open_uvar(r.end)) continue;
        if (same(r.addr, r.end)) {
          if (int i = find_lhs(Chunk::Kind::ListSeg, r.addr); i >= 0) {
            Chunk l = canon(lhs_[static_cast<std::size_t>(i)]);
            if (same(l.end, r.end)) {
              note("match " + to_string(l));
              unify(r.contents, l.contents);
              take(i);
              return done({});
            }
          }
          unify(r.contents, Term::nil());
          note("empty segment " + to_string(r));
          return done({});
        }
        if (int i = find_lhs(Chunk::Kind::ListSeg, r.addr); i >= 0) {
          Chunk l = canon(lhs_[static_cast<std::size_t>(i)]);
          take(i);
          if (same(l.end, r.end)) {
            note("match " + to_string(l));
            unify(r.contents, l.contents);
            return done({});
          }
          Term k = Term::var(fresh_uvar("k#"));
          unify(r.contents, Term::app(l.contents, k));
          note("compose " + to_string(l));
          return done({Chunk::segment(l.end, r.end, k)});
        }
        if (int i = find_lhs(Chunk::Kind::PointsTo, r.addr); i >= 0) {
          Chunk l = canon(lhs_[static_cast<std::size_t>(i)]);
          const Term* h = field_of(l, opt_.list.value_field);
          const Term* n = field_of(l, opt_.list.next_field);
          if (l.record != opt_.list.record || !h || !n) break;
          Term k = Term::var(fresh_uvar("k#"));
          unify(r.contents, Term::cons(*h, k));
          note("follow " + to_string(l));
          Term next = *n;
          take(i);
          return done({Chunk::segment(next, r.end, k)});
        }
        if (r.end.kind == K::Null) {
          if (int i = find_lhs(Chunk::Kind::ListPred, r.addr); i >= 0) {
            note("list as segment " + to_string(canon(lhs_[static_cast<std::size_t>(i)])));
            unify(r.contents, lhs_[static_cast<std::size_t>(i)].contents);
            take(i);
            return done({});
          }
        }
        break;
      }
    }
  }
  return false;
}

// Guesses the address of a right-hand chunk whose address is still unknown.
bool Solver::bind_open_addr(std::vector<Chunk>& work) {
  for (auto& w : work) {
    Chunk r = canon(w);
    if (!open_uvar(r.addr)) continue;
    for (const auto& l0 : lhs_) {
      Chunk l = canon(l0);
      bool ok = l.kind == r.kind && (r.kind != Chunk::Kind::PointsTo || l.record == r.record);
      if (r.kind == Chunk::Kind::ListPred && l.kind == Chunk::Kind::PointsTo && l.record == opt_.list.record)
        ok = true;
      if (!ok) continue;
      theta_[r.addr.name] = l.addr;
      note("choose " + r.addr.name + " := " + to_string(l.addr));
      return true;
    }
    if (r.kind == Chunk::Kind::ListPred) {
      theta_[r.addr.name] = Term::null();
      note("choose " + r.addr.name + " := NULL");
      return true;
    }
  }
  return false;
}

// First-order match that binds right-hand unknowns; nothing is kept on failure.
bool Solver::bind_structurally(const Term& x, const Term& y) {
  TermMap saved = theta_;
  std::function<bool(const Term&, const Term&)> go = [&](const Term& p, const Term& q) {
    Term a = canon(p), b = canon(q);
    if (a == b) return true;
    if (open_uvar(a) && !occurs(a.name, b)) {
      theta_[a.name] = b;
      return true;
    }
    if (open_uvar(b) && !occurs(b.name, a)) {
      theta_[b.name] = a;
      return true;
    }
    if (a.kind != b.kind || a.args.empty() || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!go(a.args[i], b.args[i])) return false;
    return true;
  };
  if (go(x, y)) return true;
  theta_ = std::move(saved);
  return false;
}

// Binds unknowns that appear alone on one side of an equation goal.
bool Solver::settle_goals() {
  bool any = false;
  Rewriter rw{opt_.rewrite};
  auto old = std::move(goals_);
  goals_.clear();
  for (const auto& g : old) {
    if (g.op != PureProp::Op::Eq) {
      goals_.push_back(g);
      continue;
    }
    Term a = canon(g.lhs), b = canon(g.rhs);
    if ((open_uvar(a) && !occurs(a.name, b)) || (open_uvar(b) && !occurs(b.name, a))) {
      unify(a, b);
      any = true;
      continue;
    }
    Term na = rw.normalize(a), nb = rw.normalize(b);
    if ((open_uvar(na) && !occurs(na.name, nb)) || (open_uvar(nb) && !occurs(nb.name, na)) ||
        (na.kind == K::Cons && nb.kind == K::Cons && (has_open(na) || has_open(nb)))) {
      unify(na, nb);
      any = true;
      continue;
    }
    goals_.push_back(g);
  }
  return any;
}

Verdict Solver::run() {
  for (const auto& b : e_.sigma) taken_.insert(b.name);
  auto take_names = [&](const Assertion& a) {
    for (const auto& n : free_logical_vars(a)) taken_.insert(n);
    for (const auto& b : a.exists) taken_.insert(b.name);
  };
  take_names(e_.lhs);
  take_names(e_.rhs);
  for (const auto& g : e_.gamma) {
    std::vector<std::string> vs;
    collect_vars(g, vs);
    taken_.insert(vs.begin(), vs.end());
  }

  // Skolemize the left, open the right.
  TermMap sk;
  for (const auto& b : e_.lhs.exists) sk[b.name] = Term::var(fresh(b.name + "#"));
  TermMap ex;
  for (const auto& b : e_.rhs.exists) ex[b.name] = Term::var(fresh_uvar(b.name));
  Assertion lhs = e_.lhs, rhs = e_.rhs;
  lhs.exists.clear();
  rhs.exists.clear();
  lhs = subst(lhs, sk);
  rhs = subst(rhs, ex);

  for (const auto& g : e_.gamma) assume(g);
  for (const auto& p : lhs.pure) assume(p);
  lhs_ = lhs.spatial;
  derive();
  if (!contra_) {
    Closure cl;
    for (const auto& p : facts()) cl.add(p);
    if (cl.inconsistent()) {
      contra_ = true;
      note("premise inconsistent");
    }
  }
  if (contra_) {
    v_.kind = Verdict::Kind::Valid;
    v_.unsat_premise = true;
    return v_;
  }

  for (const auto& [x, t] : rhs.locals) {
    auto it = lhs.locals.find(x);
    if (it == lhs.locals.end()) {
      v_.kind = Verdict::Kind::Unknown;
      v_.reason = "no value for program variable " + x + " on the left";
      return v_;
    }
    unify(t, it->second);
  }
  for (const auto& p : rhs.pure) goals_.push_back(p);
  settle_goals();

  std::vector<Chunk> work = rhs.spatial;
  for (int guard = 0; guard < 512 && !work.empty(); ++guard) {
    if (one_step(work)) {
      settle_goals();
      derive();
      continue;
    }
    if (settle_goals()) continue;
    if (!bind_open_addr(work)) break;
  }
  if (contra_) {
    v_.kind = Verdict::Kind::Valid;
    v_.unsat_premise = true;
    return v_;
  }
  if (!work.empty()) {
    v_.kind = Verdict::Kind::Unknown;
    v_.reason = "unmatched chunk " + to_string(canon(work.front()));
    return v_;
  }
  if (!lhs_.empty()) note("frame " + std::to_string(lhs_.size()) + " chunk(s)");

  while (settle_goals()) {
  }
  for (const auto& g : goals_) {
    if (g.op != PureProp::Op::Eq || (!has_open(canon(g.lhs)) && !has_open(canon(g.rhs)))) continue;
    Rewriter rw{opt_.rewrite};
    if (bind_structurally(g.lhs, g.rhs) || bind_structurally(rw.normalize(canon(g.lhs)), rw.normalize(canon(g.rhs)))) {
      note("bind by shape " + to_string(canon(g.lhs)));
      continue;
    }
    for (const auto& k : facts()) {
      if (k.op != PureProp::Op::Eq) continue;
      bool bound = false;
      for (bool swap : {false, true}) {
        TermMap saved = theta_;
        const Term& u = swap ? k.rhs : k.lhs;
        const Term& v = swap ? k.lhs : k.rhs;
        if (bind_structurally(g.lhs, u) && bind_structurally(g.rhs, v)) {
          bound = true;
          break;
        }
        theta_ = std::move(saved);
      }
      if (bound) {
        note("bind by hypothesis " + to_string(k));
        break;
      }
    }
  }
  std::vector<PureProp> known = facts();
  for (const auto& g0 : goals_) {
    PureProp g{g0.op, canon(g0.lhs), canon(g0.rhs)};
    std::string how;
    if (!has_open(g.lhs) && !has_open(g.rhs) && prove(g, known, opt_.rewrite, &how)) {
      note("pure " + to_string(g) + " by " + how);
      continue;
    }
    Rewriter rw{opt_.rewrite};
    g.lhs = rw.normalize(g.lhs);
    g.rhs = rw.normalize(g.rhs);
    v_.residual.push_back(g);
  }
  if (!v_.residual.empty()) {
    v_.kind = Verdict::Kind::Unknown;
    v_.reason = "pure goal not proved";
    return v_;
  }
  v_.kind = Verdict::Kind::Valid;
  return v_;
}

}  // namespace

Verdict solve(const Entailment& e, const SolveOptions& opt) { return Solver(e, opt).run(); }

bool normalize_pure(const PureProp& p, const std::vector<PureProp>& known, bool lemmas) {
  return prove(p, known, lemmas, nullptr);
}

void solve_report(VcReport& report, const SolveOptions& opt) {
  for (auto& e : report.entailments) {
    Verdict v = solve(e, opt);
    e.residual_pure.clear();
    e.residual_reason.clear();
    if (v.kind == Verdict::Kind::Valid) {
      e.status = v.unsat_premise ? Entailment::Status::UnsatPre : Entailment::Status::SolvedAuto;
    } else {
      e.status = Entailment::Status::Open;
      e.residual_pure = v.residual;
      e.residual_reason = v.reason;
    }
  }
}

}  // namespace annoc
