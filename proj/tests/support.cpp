#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace annoc::test {

std::string corpus_path(const std::string& name) { return std::string(ANNOC_CORPUS_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BuildResult build_corpus(const std::string& name) { return build_source(read_file(corpus_path(name))); }

const BuiltFunction& function_named(const BuildResult& r, const std::string& name) {
  for (const auto& f : r.functions)
    if (f.name == name) return f;
  throw std::runtime_error("no function " + name);
}

namespace {

std::vector<std::string> sorted_strings(const std::vector<PureProp>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(to_string(p));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted_strings(const std::vector<Chunk>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(to_string(c));
  std::sort(out.begin(), out.end());
  return out;
}

// Body of `a` with the exists binders renamed through `names`.
Assertion open_with(const Assertion& a, const std::vector<std::string>& names) {
  TermMap m;
  for (std::size_t i = 0; i < a.exists.size(); ++i) m[a.exists[i].name] = Term::var(names[i]);
  Assertion r;
  for (const auto& [k, t] : a.locals) r.locals[k] = subst(t, m);
  for (const auto& p : a.pure) r.pure.push_back(subst(p, m));
  for (const auto& c : a.spatial) r.spatial.push_back(subst(c, m));
  return r;
}

}  // namespace

bool alpha_equal(const Assertion& a, const Assertion& b) {
  std::size_t n = a.exists.size();
  if (n != b.exists.size()) return false;
  std::vector<std::string> tmp;
  for (std::size_t i = 0; i < n; ++i) tmp.push_back("%" + std::to_string(i));
  Assertion bo = open_with(b, tmp);
  auto bp = sorted_strings(bo.pure);
  auto bs = sorted_strings(bo.spatial);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  do {
    bool sorts = true;
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) {
      names[i] = tmp[perm[i]];
      sorts = sorts && a.exists[i].sort == b.exists[perm[i]].sort;
    }
    if (!sorts) continue;
    Assertion ao = open_with(a, names);
    if (ao.locals == bo.locals && sorted_strings(ao.pure) == bp && sorted_strings(ao.spatial) == bs) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Chunk pts(Term addr, Term head, Term tail) {
  return Chunk::points_to(std::move(addr), "list", {{"head", std::move(head)}, {"tail", std::move(tail)}});
}

int Gen::pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

bool Gen::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Term Gen::val_term(const std::vector<std::string>& vals, bool ints) {
  int r = pick(10);
  if (r < 7 || (!ints && r >= 9)) return Term::var(one_of(vals));
  if (r < 9) return Term::null();
  return Term::integer(1 + pick(2));
}

Term Gen::seq_term(const std::vector<std::string>& vals, const std::vector<std::string>& seqs, int depth) {
  int r = pick(depth > 0 ? 10 : 4);
  if (seqs.empty()) r = r < 4 ? 0 : 4;
  if (r == 0) return Term::nil();
  if (r < 4) return Term::var(one_of(seqs));
  if (r < 7) return Term::cons(val_term(vals), depth > 0 ? seq_term(vals, seqs, depth - 1) : Term::nil());
  if (r < 9) return Term::app(seq_term(vals, seqs, depth - 1), seq_term(vals, seqs, depth - 1));
  return Term::rev(seq_term(vals, seqs, depth - 1));
}

Chunk Gen::chunk(const std::vector<std::string>& vals, const std::vector<std::string>& seqs) {
  Term addr = coin(0.9) ? Term::var(one_of(vals)) : Term::null();
  switch (pick(3)) {
    case 0:
      return pts(addr, val_term(vals), val_term(vals, false));
    case 1:
      return Chunk::list(addr, seq_term(vals, seqs, 1));
    default:
      return Chunk::segment(addr, val_term(vals, false), seq_term(vals, seqs, 1));
  }
}

PureProp Gen::pure(const std::vector<std::string>& vals, const std::vector<std::string>& seqs) {
  if (!seqs.empty() && coin(0.2)) return PureProp::eq(Term::var(one_of(seqs)), seq_term(vals, seqs, 1));
  Term l = Term::var(one_of(vals));
  Term r = val_term(vals);
  return coin(0.5) ? PureProp::eq(l, r) : PureProp::neq(l, r);
}

namespace {

std::set<std::string> names_of(const Assertion& a) {
  auto v = free_logical_vars(a);
  return {v.begin(), v.end()};
}

bool same_term(const Term& a, const Term& b) { return a == b; }

// Applies one validity-preserving step; false if it did not apply.
bool fold_step(Assertion& r, int which) {
  auto& sp = r.spatial;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    for (std::size_t j = 0; j < sp.size(); ++j) {
      if (i == j) continue;
      const Chunk& p = sp[i];
      const Chunk& q = sp[j];
      Chunk merged;
      if (which == 0 && p.kind == Chunk::Kind::PointsTo && q.kind != Chunk::Kind::PointsTo &&
          same_term(p.fields[1].second, q.addr)) {
        merged = q;
        merged.addr = p.addr;
        merged.contents = Term::cons(p.fields[0].second, q.contents);
      } else if (which == 1 && p.kind == Chunk::Kind::ListSeg && q.kind != Chunk::Kind::PointsTo &&
                 same_term(p.end, q.addr)) {
        merged = q;
        merged.addr = p.addr;
        merged.contents = Term::app(p.contents, q.contents);
      } else {
        continue;
      }
      std::size_t hi = std::max(i, j), lo = std::min(i, j);
      sp.erase(sp.begin() + static_cast<long>(hi));
      sp.erase(sp.begin() + static_cast<long>(lo));
      sp.push_back(merged);
      return true;
    }
  }
  return false;
}

}  // namespace

Entailment Gen::entailment(bool valid) {
  static const std::vector<std::string> kVals{"a", "b", "c"}, kSeqs{"L", "M"};
  Assertion lhs;
  std::vector<std::string> vals, seqs;
  int tmpl = valid ? pick(5) : 4;
  if (tmpl < 4) {
    vals = {"a", "b"};
    seqs = {"L"};
    if (tmpl == 1) seqs.push_back("M");
    if (tmpl == 3) vals.push_back("c");
    Term x = coin(0.5) ? Term::var("a") : Term::integer(1 + pick(2));
    switch (tmpl) {
      case 0:
        lhs.spatial = {pts(Term::var("a"), x, Term::var("b")), Chunk::list(Term::var("b"), Term::var("L"))};
        break;
      case 1:
        lhs.spatial = {Chunk::segment(Term::var("a"), Term::var("b"), Term::var("L")),
                       Chunk::list(Term::var("b"), Term::var("M"))};
        break;
      case 2:
        lhs.spatial = {pts(Term::var("a"), x, Term::var("b")),
                       Chunk::segment(Term::var("b"), Term::null(), Term::var("L"))};
        break;
      default:
        lhs.spatial = {pts(Term::var("a"), x, Term::var("b")),
                       Chunk::segment(Term::var("b"), Term::var("c"), Term::var("L")),
                       Chunk::list(Term::var("c"), Term::nil())};
    }
  } else {
    int nv = 1 + pick(3);
    int ns = pick(std::min(2, 4 - nv) + 1);
    vals.assign(kVals.begin(), kVals.begin() + nv);
    seqs.assign(kSeqs.begin(), kSeqs.begin() + ns);
    int nc = pick(4);
    for (int i = 0; i < nc; ++i) lhs.spatial.push_back(chunk(vals, seqs));
  }
  int np = pick(3);
  for (int i = 0; i < np; ++i) lhs.pure.push_back(pure(vals, seqs));
  if (coin(0.3)) lhs.locals["x"] = val_term(vals);

  std::map<std::string, Sort> sorts;
  for (const auto& v : vals) sorts[v] = Sort::Val;
  for (const auto& s : seqs) sorts[s] = Sort::Seq;

  Assertion rhs;
  if (valid) {
    rhs = lhs;
    int steps = 1 + pick(3);
    for (int k = 0; k < steps; ++k) {
      switch (pick(6)) {
        case 0:
          if (!rhs.spatial.empty()) rhs.spatial.erase(rhs.spatial.begin() + pick(static_cast<int>(rhs.spatial.size())));
          break;
        case 1:
          if (!rhs.pure.empty()) rhs.pure.erase(rhs.pure.begin() + pick(static_cast<int>(rhs.pure.size())));
          break;
        case 2:
        case 3:
          fold_step(rhs, pick(2));
          break;
        case 4: {
          auto free = free_logical_vars(rhs);
          if (free.empty()) break;
          const std::string& n = one_of(free);
          rhs.exists.push_back({n, sorts.at(n)});
          break;
        }
        default:
          rhs.locals.clear();
      }
    }
  } else {
    int nc = pick(4);
    for (int i = 0; i < nc; ++i) rhs.spatial.push_back(chunk(vals, seqs));
    int rp = pick(3);
    for (int i = 0; i < rp; ++i) rhs.pure.push_back(pure(vals, seqs));
    if (coin(0.3)) rhs.locals["x"] = coin(0.5) && lhs.locals.count("x") ? lhs.locals["x"] : val_term(vals);
    auto in_lhs = names_of(lhs);
    for (const auto& n : free_logical_vars(rhs))
      if (!in_lhs.count(n) && coin(0.7)) rhs.exists.push_back({n, sorts.at(n)});
  }

  auto in_rhs = names_of(rhs);
  for (const auto& n : free_logical_vars(lhs))
    if (!in_rhs.count(n) && coin(0.3)) lhs.exists.push_back({n, sorts.at(n)});

  Entailment e;
  auto fl = names_of(lhs);
  auto fr = names_of(rhs);
  for (const auto& [n, s] : sorts)
    if (fl.count(n) || fr.count(n)) e.sigma.push_back({n, s});
  if (!lhs.pure.empty() && coin(0.3)) {
    std::vector<std::string> vs;
    collect_vars(lhs.pure.front(), vs);
    bool ok = true;
    for (const auto& v : vs)
      ok = ok && std::any_of(e.sigma.begin(), e.sigma.end(), [&](const Binder& b) { return b.name == v; });
    if (ok) {
      e.gamma.push_back(lhs.pure.front());
      lhs.pure.erase(lhs.pure.begin());
    }
  }
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  e.slot = "random";
  return e;
}

Gen::AeCase Gen::ae_case() {
  static const std::vector<std::string> kVals{"a", "b", "c"}, kSeqs{"L"};
  AeCase k;
  Assertion& p = k.pre;
  p.locals["x"] = coin(0.85) ? Term::var(one_of(kVals)) : Term::null();
  p.locals["y"] = coin(0.85) ? Term::var(one_of(kVals)) : Term::null();
  if (coin(0.7)) {
    Term at = p.locals[coin(0.5) ? "x" : "y"];
    p.spatial.push_back(pts(at, val_term(kVals), val_term(kVals, false)));
  }
  int more = pick(3);
  for (int i = 0; i < more; ++i) p.spatial.push_back(chunk(kVals, kSeqs));
  if (coin(0.3)) p.pure.push_back(pure(kVals, kSeqs));

  static const std::vector<std::string> kProg{"x", "y", "z"};
  auto var_or_const = [&]() {
    int r = pick(6);
    if (r < 4) return Expr::var(r < 2 ? "x" : "y");
    return r == 4 ? Expr::null() : Expr::integer(2);
  };
  Assign& c = k.assign;
  switch (pick(3)) {
    case 0:
      c.form = Assign::Form::Copy;
      c.target = one_of(kProg);
      c.value = var_or_const();
      break;
    case 1:
      c.form = Assign::Form::Load;
      c.target = one_of(kProg);
      c.base = Expr::var(coin(0.5) ? "x" : "y");
      c.field = coin(0.5) ? "head" : "tail";
      break;
    default:
      c.form = Assign::Form::Store;
      c.base = Expr::var(coin(0.5) ? "x" : "y");
      c.field = coin(0.5) ? "head" : "tail";
      c.value = var_or_const();
  }
  auto used = names_of(p);
  for (const auto& v : kVals)
    if (used.count(v)) k.sigma.push_back({v, Sort::Val});
  if (used.count("L")) k.sigma.push_back({"L", Sort::Seq});
  return k;
}

Gen::CondCase Gen::cond_case() {
  AeCase base = ae_case();
  CondCase k{base.sigma, base.pre, {}};
  Expr l = Expr::var(coin(0.5) ? "x" : "y");
  int r = pick(3);
  if (r == 0) {
    k.cond = {Cond::Kind::Truthy, l, {}};
  } else {
    int w = pick(3);
    Expr rhs = w == 0 ? Expr::var(l.name == "x" ? "y" : "x") : (w == 1 ? Expr::null() : Expr::integer(1));
    k.cond = {r == 1 ? Cond::Kind::Eq : Cond::Kind::Ne, l, rhs};
  }
  return k;
}

Assertion Gen::exec_pre() {
  Assertion a;
  a.locals["x"] = Term::null();
  a.locals["y"] = Term::null();
  return a;
}

Assertion Gen::loop_inv() {
  Assertion a;
  a.exists = {{"a", Sort::Val}, {"b", Sort::Val}};
  a.locals["x"] = Term::var("a");
  a.locals["y"] = Term::var("b");
  return a;
}

AStmt Gen::leaf(bool in_loop) {
  int r = pick(in_loop ? 8 : 6);
  Assign c;
  c.form = Assign::Form::Copy;
  switch (r) {
    case 0:
      return AStmt::skip();
    case 1:
      c.target = "x";
      c.value = Expr::var("y");
      return AStmt::assign_(c);
    case 2:
      c.target = "y";
      c.value = coin(0.5) ? Expr::null() : Expr::integer(1);
      return AStmt::assign_(c);
    case 3:
      return AStmt::assert_(loop_inv());
    case 4:
      c.target = "x";
      c.value = Expr::integer(2);
      return AStmt::assign_(c);
    case 5:
      return AStmt::return_(coin(0.5) ? std::optional<Expr>(Expr::var("x")) : std::nullopt);
    case 6:
      return AStmt::brk();
    default:
      return AStmt::cont();
  }
}

AStmt Gen::astmt(int depth) { return astmt_in(depth, false); }

AStmt Gen::astmt_in(int depth, bool in_loop) {
  if (depth <= 0) return leaf(in_loop);
  int r = pick(10);
  if (r < 2) return leaf(in_loop);
  if (r < 5) {
    AStmt head = r == 4 ? leaf(in_loop) : astmt_in(depth - 1, in_loop);
    if (head.kind == AStmt::Kind::Seq) head = leaf(in_loop);
    AStmt rest = astmt_in(depth - 1, in_loop);
    bool starts_assert = rest.kind == AStmt::Kind::Assert ||
                         (rest.kind == AStmt::Kind::Seq && rest.kids[0].kind == AStmt::Kind::Assert);
    if (head.is_complex() && count_normal_exit(head) > 1 && rest.kind != AStmt::Kind::Skip && !starts_assert)
      rest = AStmt::seq(AStmt::assert_(loop_inv()), rest);
    return AStmt::seq(head, rest);
  }
  if (r < 8) {
    static const std::vector<Cond> kConds{
        {Cond::Kind::Truthy, Expr::var("x"), {}},
        {Cond::Kind::Eq, Expr::var("x"), Expr::null()},
        {Cond::Kind::Ne, Expr::var("y"), Expr::integer(1)},
        {Cond::Kind::Eq, Expr::var("x"), Expr::var("y")},
    };
    return AStmt::if_(one_of(kConds), astmt_in(depth - 1, in_loop), astmt_in(depth - 1, in_loop));
  }
  AStmt incr = AStmt::skip();
  if (coin(0.3)) {
    Assign c;
    c.form = Assign::Form::Copy;
    c.target = "y";
    c.value = Expr::null();
    incr = AStmt::assign_(c);
  }
  return AStmt::loop(loop_inv(), loop_inv(), astmt_in(depth - 1, true), incr);
}

}  // namespace annoc::test
