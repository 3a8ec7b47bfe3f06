#include <set>

#include "annoc/vcgen.hpp"

namespace annoc {

using AK = AStmt::Kind;

const char* status_name(Entailment::Status s) {
  switch (s) {
    case Entailment::Status::Open:
      return "open";
    case Entailment::Status::SolvedAuto:
      return "solvedAuto";
    case Entailment::Status::UnsatPre:
      return "unsat-pre";
  }
  return "?";
}

namespace {

[[noreturn]] void stuck(Loc l, const std::string& why) { throw VerifyError("StrategyStuck", l, why); }

void names_in(const AStmt& c, std::set<std::string>& out) {
  for (const Assertion* a : {&c.assertion, &c.con_inv}) {
    for (const auto& v : free_logical_vars(*a)) out.insert(v);
    for (const auto& b : a->exists) out.insert(b.name);
  }
  if (c.kind == AK::Given) out.insert(c.binder.name);
  for (const auto& k : c.kids) names_in(k, out);
}

std::set<std::string> sigma_names(const Ctx& ctx) {
  std::set<std::string> s;
  for (const auto& b : ctx.sigma) s.insert(b.name);
  return s;
}

bool extractable(const PureProp& p, const std::set<std::string>& sig) {
  std::vector<std::string> vs;
  collect_vars(p, vs);
  for (const auto& v : vs)
    if (!sig.count(v)) return false;
  return true;
}

bool annotation_only(const AStmt& c) {
  if (c.kind == AK::Assert) return true;
  if (c.kind == AK::Given) return annotation_only(c.kids[0]);
  if (c.kind == AK::Seq) return annotation_only(c.kids[0]) && annotation_only(c.kids[1]);
  return false;
}

}  // namespace

Post Verifier::known(Assertion a, std::string tag) {
  Post p;
  p.kind = Post::Kind::Known;
  p.a = std::move(a);
  p.tag = std::move(tag);
  p.slot_id = next_slot_++;
  return p;
}

int Verifier::count_slot(int slot_id) const {
  int n = 0;
  for (const auto& e : out_.entailments) n += e.slot_id == slot_id;
  return n;
}

void Verifier::emit(const Ctx& ctx, const Assertion& lhs, const Post& post, Loc loc, const char* what) {
  if (post.kind == Post::Kind::Absent) stuck(loc, std::string("no postcondition for a ") + what + " exit here");
  Entailment e;
  e.loc = loc;
  e.slot = post.tag;
  e.slot_id = post.slot_id;
  e.sigma = ctx.sigma;
  e.gamma = ctx.gamma;
  e.lhs = lhs;
  if (post.kind == Post::Kind::Hole) {
    e.slot = "hole";
    hole_hits_[static_cast<std::size_t>(post.hole)].push_back(std::move(e));
    return;
  }
  e.rhs = post.a;
  e.id = static_cast<int>(out_.entailments.size()) + 1;
  out_.entailments.push_back(std::move(e));
}

void Verifier::run(Ctx ctx, Assertion p, const AStmt& c, const Posts& posts) {
  // Given / ImpGiven: consume the head existential.
  if (c.kind == AK::Given) {
    if (p.exists.empty()) stuck(c.loc, "Given " + c.binder.name + " but the precondition has no existential");
    Binder head = p.exists.front();
    if (head.sort != c.binder.sort) stuck(c.loc, "Given " + c.binder.name + " has the wrong sort");
    std::set<std::string> sig = sigma_names(ctx);
    Binder b = c.binder;
    AStmt scope = c.kids[0];
    if (sig.count(b.name)) {
      std::set<std::string> taken = sig;
      names_in(scope, taken);
      std::string fresh = fresh_name(b.name, taken);
      scope = subst(scope, {{b.name, Term::var(fresh)}});
      b.name = fresh;
    }
    p.exists.erase(p.exists.begin());
    p = subst(p, {{head.name, Term::var(b.name)}});
    ctx.sigma.push_back(b);
    trace("Given", c.loc);
    run(std::move(ctx), std::move(p), scope, posts);
    return;
  }
  // Exists: introduce every existential of P.
  if (!p.exists.empty()) {
    std::set<std::string> taken = sigma_names(ctx);
    names_in(c, taken);
    TermMap m;
    for (const auto& b : p.exists) {
      std::string n = b.name;
      if (taken.count(n)) {
        n = fresh_name(n, taken);
        m[b.name] = Term::var(n);
      }
      taken.insert(n);
      ctx.sigma.push_back({n, b.sort});
    }
    p.exists.clear();
    if (!m.empty()) p = subst(p, m);
    trace("Exists", c.loc);
  }
  // Pure: maximal leading extractable conjuncts move to Γ.
  {
    std::set<std::string> sig = sigma_names(ctx);
    std::size_t k = 0;
    while (k < p.pure.size() && extractable(p.pure[k], sig)) ++k;
    if (k > 0) {
      for (std::size_t i = 0; i < k; ++i) ctx.gamma.push_back(p.pure[i]);
      p.pure.erase(p.pure.begin(), p.pure.begin() + static_cast<long>(k));
      trace("Pure", c.loc);
    }
  }
  if (c.kind == AK::Assert) {
    emit(ctx, p, known(c.assertion, "pre-consequence"), c.loc, "assertion");
    trace("Assertion", c.loc);
    run(ctx, c.assertion, AStmt::skip(c.loc), posts);
    return;
  }
  if (c.kind == AK::Seq) {
    seq(std::move(ctx), std::move(p), c, posts);
    return;
  }
  single(std::move(ctx), std::move(p), c, posts);
}

void Verifier::single(Ctx ctx, Assertion p, const AStmt& c, const Posts& posts) {
  switch (c.kind) {
    case AK::Skip:
      trace("Skip", c.loc);
      emit(ctx, p, posts.normal, c.loc, "normal");
      return;
    case AK::Assign:
      trace("Assignment", c.loc);
      emit(ctx, ae(ctx, p, c.assign, c.loc), posts.normal, c.loc, "normal");
      return;
    case AK::Break:
      trace("Break", c.loc);
      emit(ctx, p, posts.brk, c.loc, "break");
      return;
    case AK::Continue:
      trace("Continue", c.loc);
      emit(ctx, p, posts.con, c.loc, "continue");
      return;
    case AK::Return: {
      trace("Return", c.loc);
      Assertion q = p;
      if (c.ret) q.locals[kRetVar] = eval_expr(p, *c.ret, c.loc);
      emit(ctx, q, posts.ret, c.loc, "return");
      return;
    }
    case AK::If:
      trace("If", c.loc);
      run(ctx, norm_cond(ctx, p, c.cond, true, c.loc), c.kids[0], posts);
      run(ctx, norm_cond(ctx, p, c.cond, false, c.loc), c.kids[1], posts);
      return;
    case AK::Loop: {
      trace("Loop", c.loc);
      emit(ctx, p, known(c.assertion, "pre-consequence"), c.loc, "loop entry");
      Posts body{known(c.con_inv, "normal→conInv"), posts.normal, known(c.con_inv, "continue→conInv"), posts.ret};
      run(ctx, c.assertion, c.kids[0], body);
      const AStmt& incr = c.kids[1];
      if (incr.kind == AK::Skip && c.con_inv == c.assertion) {
        trace("Skip-refl", incr.loc);
        return;
      }
      Posts inc{known(c.assertion, "normal→inv"), posts.normal, Post::absent(), posts.ret};
      run(ctx, c.con_inv, incr, inc);
      return;
    }
    default:
      stuck(c.loc, "unexpected statement");
  }
}

void Verifier::seq(Ctx ctx, Assertion p, const AStmt& c, const Posts& posts) {
  const AStmt& h = c.kids[0];
  const AStmt& rest = c.kids[1];
  if (h.kind == AK::Seq) {
    trace("Assoc", c.loc);
    run(std::move(ctx), std::move(p), AStmt::seq(h.kids[0], AStmt::seq(h.kids[1], rest)), posts);
    return;
  }
  if (h.kind == AK::Assert) {
    emit(ctx, p, known(h.assertion, "pre-consequence"), h.loc, "assertion");
    trace("SeqAssertion", h.loc);
    run(std::move(ctx), h.assertion, rest, posts);
    return;
  }
  if (h.kind == AK::Given) stuck(h.loc, "Given on the left of a sequence");
  switch (h.kind) {
    case AK::Skip:
      trace("SeqSkip", h.loc);
      run(std::move(ctx), std::move(p), rest, posts);
      return;
    case AK::Assign: {
      trace("SeqAssign", h.loc);
      Assertion q = ae(ctx, p, h.assign, h.loc);
      run(std::move(ctx), std::move(q), rest, posts);
      return;
    }
    case AK::Break:
    case AK::Continue:
    case AK::Return:
      single(std::move(ctx), std::move(p), h, posts);  // the rest is unreachable
      return;
    default:
      break;
  }
  // Complex head.
  if (rest.kind == AK::Skip) {
    trace("SeqSkipTail", rest.loc);
    single(std::move(ctx), std::move(p), h, posts);
    return;
  }
  bool rest_assert = rest.kind == AK::Assert || (rest.kind == AK::Seq && rest.kids[0].kind == AK::Assert);
  if (rest_assert) {
    const AStmt& a = rest.kind == AK::Assert ? rest : rest.kids[0];
    AStmt after = rest.kind == AK::Assert ? AStmt::skip(rest.loc) : rest.kids[1];
    trace(annotation_only(rest) ? "SeqPost" : "SeqComplex", h.loc);
    Posts inner = posts;
    inner.normal = known(a.assertion, "pre-consequence");
    single(ctx, p, h, inner);
    if (count_slot(inner.normal.slot_id) == 0) return;  // no normal exit reaches the assertion
    run(std::move(ctx), a.assertion, after, posts);
    return;
  }
  // Postcondition hole.
  trace("SeqHole", h.loc);
  int hid = next_hole_++;
  hole_hits_.emplace_back();
  HoleRecord rec;
  rec.id = hid;
  rec.loc = h.loc;
  out_.holes.push_back(rec);
  std::size_t sl = ctx.sigma.size(), gl = ctx.gamma.size();
  Posts inner = posts;
  inner.normal.kind = Post::Kind::Hole;
  inner.normal.hole = hid;
  inner.normal.tag = "hole";
  inner.normal.slot_id = next_slot_++;
  single(ctx, p, h, inner);
  auto hits = std::move(hole_hits_[static_cast<std::size_t>(hid)]);
  if (hits.empty()) {
    Assertion f;
    f.pure.push_back(PureProp::falsum());
    instantiate_hole(out_, hid, f);
    for (auto& hr : out_.holes)
      if (hr.id == hid) hr.unreachable = true;
    trace("HoleUnreachable", h.loc);
    return;
  }
  if (hits.size() > 1)
    throw VerifyError("HoleMultiplyConstrained", h.loc,
                      std::to_string(hits.size()) + " exits reach a postcondition hole");
  Entailment r = revert(sl, gl, hits[0]);
  trace("Revert", h.loc);
  instantiate_hole(out_, hid, r.lhs);
  for (auto& hr : out_.holes)
    if (hr.id == hid) {
      hr.closing = r;
      hr.closing.rhs = r.lhs;
      hr.closing.status = Entailment::Status::SolvedAuto;
      hr.closing.slot = "hole";
    }
  run(std::move(ctx), r.lhs, rest, posts);
}

Entailment revert(std::size_t sigma_len, std::size_t gamma_len, const Entailment& e) {
  Entailment r = e;
  for (std::size_t i = r.gamma.size(); i-- > gamma_len;) r.lhs.pure.insert(r.lhs.pure.begin(), r.gamma[i]);
  for (std::size_t i = r.sigma.size(); i-- > sigma_len;) r.lhs.exists.insert(r.lhs.exists.begin(), r.sigma[i]);
  r.gamma.resize(std::min(gamma_len, r.gamma.size()));
  r.sigma.resize(std::min(sigma_len, r.sigma.size()));
  return r;
}

void instantiate_hole(VcReport& report, int hole_id, const Assertion& a) {
  for (auto& h : report.holes) {
    if (h.id != hole_id) continue;
    if (h.instantiated) throw VerifyError("HoleAlreadyInstantiated", h.loc, "hole instantiated twice");
    h.instantiated = true;
    h.value = a;
    return;
  }
  HoleRecord h;
  h.id = hole_id;
  h.value = a;
  h.instantiated = true;
  report.holes.push_back(h);
}

VcReport verify_function(const BuiltFunction& f) {
  if (!(erase_annotations(f.body) == f.plain))
    throw VerifyError("ShapeMismatch", f.loc, "annotated body does not erase to the plain body");
  VcReport rep;
  Verifier v(rep);
  Ctx ctx;
  ctx.sigma = f.spec.with;
  Posts posts;
  posts.ret = v.known(f.spec.ensure, "return");
  if (!f.spec.ensure.locals.count(kRetVar)) posts.normal = v.known(f.spec.ensure, "normal");
  v.run(ctx, f.spec.require, f.body, posts);
  for (const auto& h : rep.holes)
    if (!h.instantiated) throw VerifyError("StrategyStuck", h.loc, "hole left uninstantiated");
  return rep;
}

}  // namespace annoc
