#include <functional>
#include <optional>

#include "annoc/annot.hpp"

namespace annoc {

namespace {

using CK = CStmt::Kind;
using AK = AStmt::Kind;
using RK = RawAnnotation::Kind;

struct Item {
  bool is_annot = false;
  RawAnnotation raw;
  std::string payload;
  Loc payload_loc;
  CStmt stmt;
};

void flatten(const CStmt& c, std::vector<Item>& out) {
  switch (c.kind) {
    case CK::Seq:
      flatten(c.kids[0], out);
      flatten(c.kids[1], out);
      return;
    case CK::CommentL:
      out.push_back({true, classify_annotation(c.text, c.text_loc), c.text, c.text_loc, {}});
      flatten(c.kids[0], out);
      return;
    case CK::CommentR:
      flatten(c.kids[0], out);
      out.push_back({true, classify_annotation(c.text, c.text_loc), c.text, c.text_loc, {}});
      return;
    default:
      out.push_back({false, {}, {}, {}, c});
  }
}

CStmt unflatten(const std::vector<Item>& items, Loc loc) {
  std::vector<CStmt> stmts;
  std::vector<const Item*> leading;
  for (const auto& it : items) {
    if (!it.is_annot) {
      stmts.push_back(it.stmt);
    } else if (stmts.empty()) {
      leading.push_back(&it);
    } else {
      stmts.back() = CStmt::comment_r(std::move(stmts.back()), it.payload, it.payload_loc);
    }
  }
  if (stmts.empty()) stmts.push_back(CStmt::skip(loc));
  for (auto r = leading.rbegin(); r != leading.rend(); ++r)
    stmts.front() = CStmt::comment_l((*r)->payload, (*r)->payload_loc, std::move(stmts.front()));
  CStmt acc = std::move(stmts.back());
  for (std::size_t i = stmts.size() - 1; i-- > 0;) acc = CStmt::seq(std::move(stmts[i]), std::move(acc));
  return acc;
}

// Removes the With/Require/Ensure header from a flattened body.
std::vector<RawAnnotation> take_spec(std::vector<Item>& items, Loc fn_loc) {
  std::vector<RawAnnotation> spec;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < items.size() && idx.size() < 3; ++i)
    if (items[i].is_annot) idx.push_back(i);
  std::size_t k = 0;
  auto kind_at = [&](std::size_t j) { return items[idx[j]].raw.kind; };
  if (k < idx.size() && kind_at(k) == RK::With) spec.push_back(items[idx[k++]].raw);
  for (RK want : {RK::Require, RK::Ensure}) {
    if (k >= idx.size() || kind_at(k) != want) {
      Loc at = k < idx.size() ? items[idx[k]].raw.loc : fn_loc;
      throw FrontendError("SpecError", at,
                          std::string("expected ") + annotation_kind_name(want) +
                              " in the function header (With, Require, Ensure)");
    }
    spec.push_back(items[idx[k++]].raw);
  }
  for (std::size_t j = k; j-- > 0;) items.erase(items.begin() + static_cast<long>(idx[j]));
  return spec;
}

struct Unit {
  bool is_assert = false;
  RawAnnotation raw;
  CStmt stmt;
  std::vector<RawAnnotation> invs;
};

std::vector<Unit> pair_invariants(const std::vector<Item>& items) {
  std::vector<Unit> units;
  std::vector<RawAnnotation> pending;
  auto dangling = [&]() {
    throw FrontendError("AnnParseError", pending.front().loc, "Inv annotation not followed by a loop");
  };
  for (const auto& it : items) {
    if (it.is_annot) {
      switch (it.raw.kind) {
        case RK::Inv:
          pending.push_back(it.raw);
          continue;
        case RK::Assert:
          if (!pending.empty()) dangling();
          units.push_back({true, it.raw, {}, {}});
          continue;
        default:
          throw FrontendError("SpecError", it.raw.loc,
                              std::string(annotation_kind_name(it.raw.kind)) +
                                  " is only allowed in the function header");
      }
    }
    if (it.stmt.kind == CK::Loop) {
      units.push_back({false, {}, it.stmt, std::move(pending)});
      pending.clear();
      continue;
    }
    if (!pending.empty() && !(it.stmt.kind == CK::Assign && it.stmt.for_init)) dangling();
    units.push_back({false, {}, it.stmt, {}});
  }
  if (!pending.empty()) dangling();
  return units;
}

class Converter {
 public:
  explicit Converter(AnnScope scope) : base_(std::move(scope)) {}

  AStmt block(const CStmt& c, const std::vector<Binder>& binders) {
    std::vector<Item> items;
    flatten(c, items);
    return items_to_astmt(items, binders, c.loc);
  }

  AStmt items_to_astmt(const std::vector<Item>& items, const std::vector<Binder>& binders, Loc loc) {
    std::vector<Unit> units = pair_invariants(items);
    auto r = units_from(units, 0, binders);
    return r ? *r : AStmt::skip(loc);
  }

 private:
  AnnScope base_;

  AnnScope scope_with(const std::vector<Binder>& binders) const {
    AnnScope s = base_;
    s.binders = binders;
    return s;
  }

  Assertion parse(const RawAnnotation& raw, const std::vector<Binder>& binders) {
    Assertion a = parse_assertion(raw.text, scope_with(binders), raw.loc);
    return a;
  }

  // Adds `news` to the scope (shadowing), returns the Given chain binders,
  // freshened against the outer scope, and the renaming to apply.
  static std::vector<Binder> enter(const std::vector<Binder>& outer, const std::vector<Binder>& news,
                                   std::vector<Binder>& inner, TermMap& renames) {
    std::set<std::string> taken;
    for (const auto& b : outer) taken.insert(b.name);
    for (const auto& b : news) taken.insert(b.name);
    inner.clear();
    for (const auto& b : outer) {
      bool shadowed = false;
      for (const auto& n : news) shadowed = shadowed || n.name == b.name;
      if (!shadowed) inner.push_back(b);
    }
    std::vector<Binder> given;
    for (const auto& n : news) {
      bool clash = false;
      for (const auto& b : outer) clash = clash || b.name == n.name;
      Binder g = n;
      if (clash) {
        g.name = fresh_name(n.name, taken);
        taken.insert(g.name);
        renames[n.name] = Term::var(g.name);
      }
      given.push_back(g);
      inner.push_back(n);
    }
    return given;
  }

  static AStmt wrap_givens(const std::vector<Binder>& given, AStmt scope, const TermMap& renames, Loc l) {
    if (!renames.empty()) scope = subst(scope, renames);
    for (auto it = given.rbegin(); it != given.rend(); ++it) scope = AStmt::given(*it, std::move(scope), l);
    return scope;
  }

  std::optional<AStmt> units_from(const std::vector<Unit>& units, std::size_t i,
                                  const std::vector<Binder>& binders) {
    if (i == units.size()) return std::nullopt;
    const Unit& u = units[i];
    if (u.is_assert) {
      Assertion q = parse(u.raw, binders);
      AStmt head = AStmt::assert_(q, u.raw.loc);
      head.text = u.raw.text;
      std::vector<Binder> inner;
      TermMap renames;
      std::vector<Binder> given = enter(binders, q.exists, inner, renames);
      auto rest = units_from(units, i + 1, q.exists.empty() ? binders : inner);
      if (!rest) return head;
      return AStmt::seq(std::move(head), wrap_givens(given, std::move(*rest), renames, u.raw.loc));
    }
    AStmt s = stmt(u, binders);
    auto rest = units_from(units, i + 1, binders);
    if (!rest) return s;
    return AStmt::seq(std::move(s), std::move(*rest));
  }

  AStmt stmt(const Unit& u, const std::vector<Binder>& binders) {
    const CStmt& c = u.stmt;
    switch (c.kind) {
      case CK::Skip:
        return AStmt::skip(c.loc);
      case CK::Assign:
        return AStmt::assign_(c.assign, c.loc);
      case CK::Break:
        return AStmt::brk(c.loc);
      case CK::Continue:
        return AStmt::cont(c.loc);
      case CK::Return:
        return AStmt::return_(c.ret, c.loc);
      case CK::If:
        return AStmt::if_(c.cond, block(c.kids[0], binders), block(c.kids[1], binders), c.loc);
      case CK::Loop:
        return loop(u, binders);
      default:
        break;
    }
    throw FrontendError("AnnParseError", c.loc, "unexpected statement shape");
  }

  AStmt loop(const Unit& u, const std::vector<Binder>& binders) {
    const CStmt& c = u.stmt;
    if (u.invs.empty()) throw FrontendError("MissingInvariant", c.loc, "loop has no Inv annotation");
    if (u.invs.size() > 2)
      throw FrontendError("AmbiguousInvariant", c.loc,
                          std::to_string(u.invs.size()) + " Inv annotations precede the loop");
    CStmt body = c.kids[0];
    CStmt incr = c.kids[1];
    const RawAnnotation& r1 = u.invs[0];
    const RawAnnotation& r2 = u.invs.size() == 2 ? u.invs[1] : u.invs[0];
    if (u.invs.size() == 1 && incr.kind != CK::Skip) {
      if (has_continue(body))
        throw FrontendError("SingleInvariantUnsupported", c.loc,
                            "one Inv with a non-empty increment and a continue in the body");
      body = CStmt::seq(std::move(body), std::move(incr));
      incr = CStmt::skip(c.loc);
    }
    Assertion inv = parse(r1, binders);
    Assertion con = parse(r2, binders);

    auto enter_body = [&](const Assertion& a, const CStmt& part) {
      std::vector<Binder> inner;
      TermMap renames;
      std::vector<Binder> given = enter(binders, a.exists, inner, renames);
      AStmt s = block(part, a.exists.empty() ? binders : inner);
      return wrap_givens(given, std::move(s), renames, part.loc);
    };
    AStmt abody = enter_body(inv, body);
    AStmt aincr = incr.kind == CK::Skip ? AStmt::skip(incr.loc) : enter_body(con, incr);
    AStmt l = AStmt::loop(inv, con, std::move(abody), std::move(aincr), c.loc);
    l.text = r1.text;
    l.con_text = r2.text;
    return l;
  }
};

void collect_texts(const CStmt& c, std::vector<RawAnnotation>& out) {
  if (c.kind == CK::CommentL || c.kind == CK::CommentR) {
    RawAnnotation r = classify_annotation(c.text, c.text_loc);
    if (r.kind == RK::Inv || r.kind == RK::Assert) out.push_back(r);
  }
  for (const auto& k : c.kids) collect_texts(k, out);
}

bool assert_headed(const AStmt& c) {
  if (c.kind == AK::Assert) return true;
  return c.kind == AK::Seq && c.kids[0].kind == AK::Assert;
}

void check_post(const AStmt& c, std::vector<Diagnostic>& out) {
  if (c.kind == AK::Seq) {
    const AStmt& h = c.kids[0];
    const AStmt& r = c.kids[1];
    if (h.is_complex() && r.kind != AK::Skip && !assert_headed(r)) {
      int n = count_normal_exit(h);
      if (n > 1)
        out.push_back({"MissingAssertionAfterComplexStatement", h.loc,
                       "statement has " + std::to_string(n) +
                           " normal exits and is followed by code; add an Assert after it"});
    }
  }
  for (const auto& k : c.kids) check_post(k, out);
}

}  // namespace

std::pair<std::vector<RawAnnotation>, CStmt> extract_funcspec_raw(const CStmt& body) {
  std::vector<Item> items;
  flatten(body, items);
  auto spec = take_spec(items, body.loc);
  return {spec, unflatten(items, body.loc)};
}

bool has_continue(const CStmt& c) {
  if (c.kind == CK::Continue) return true;
  if (c.kind == CK::Loop) return false;
  for (const auto& k : c.kids)
    if (has_continue(k)) return true;
  return false;
}

bool has_continue(const AStmt& c) {
  if (c.kind == AK::Continue) return true;
  if (c.kind == AK::Loop) return false;
  for (const auto& k : c.kids)
    if (has_continue(k)) return true;
  return false;
}

AStmt reassociate(const AStmt& c) {
  switch (c.kind) {
    case AK::Seq: {
      const AStmt& h = c.kids[0];
      if (h.kind == AK::Seq) return reassociate(AStmt::seq(h.kids[0], AStmt::seq(h.kids[1], c.kids[1])));
      if (h.kind == AK::Given) {
        // Given x. S ; R  ==>  Given x'. (S ; R) with x' not free in R.
        std::set<std::string> free_in_rest;
        // Collect every name the rest mentions; renaming against all is safe.
        std::function<void(const AStmt&)> scan = [&](const AStmt& s) {
          for (const Assertion* a : {&s.assertion, &s.con_inv}) {
            for (const auto& v : free_logical_vars(*a)) free_in_rest.insert(v);
            for (const auto& b : a->exists) free_in_rest.insert(b.name);
          }
          if (s.kind == AK::Given) free_in_rest.insert(s.binder.name);
          for (const auto& k : s.kids) scan(k);
        };
        scan(c.kids[1]);
        Binder b = h.binder;
        AStmt scope = h.kids[0];
        if (free_in_rest.count(b.name)) {
          std::string fresh = fresh_name(b.name, free_in_rest);
          scope = subst(scope, {{b.name, Term::var(fresh)}});
          b.name = fresh;
        }
        return AStmt::given(b, reassociate(AStmt::seq(scope, c.kids[1])), h.loc);
      }
      return AStmt::seq(reassociate(h), reassociate(c.kids[1]));
    }
    case AK::If:
    case AK::Loop:
    case AK::Given: {
      AStmt out = c;
      for (auto& k : out.kids) k = reassociate(k);
      return out;
    }
    default:
      return c;
  }
}

int count_normal_exit(const AStmt& c) {
  switch (c.kind) {
    case AK::Given:
      return count_normal_exit(c.kids[0]);
    case AK::Seq: {
      int n1 = count_normal_exit(c.kids[0]);
      if (c.kids[1].kind == AK::Skip) return n1;
      return n1 == 0 ? 0 : count_normal_exit(c.kids[1]);
    }
    case AK::If:
      return count_normal_exit(c.kids[0]) + count_normal_exit(c.kids[1]);
    case AK::Loop:
      return count_break(c.kids[0]);
    case AK::Break:
    case AK::Continue:
    case AK::Return:
      return 0;
    default:
      return 1;
  }
}

int count_break(const AStmt& c) {
  switch (c.kind) {
    case AK::Break:
      return 1;
    case AK::Given:
      return count_break(c.kids[0]);
    case AK::If:
      return count_break(c.kids[0]) + count_break(c.kids[1]);
    case AK::Seq:
      return count_break(c.kids[0]) + (count_normal_exit(c.kids[0]) == 0 ? 0 : count_break(c.kids[1]));
    default:
      return 0;
  }
}

std::vector<Diagnostic> check_postconditions(const AStmt& c) {
  std::vector<Diagnostic> out;
  check_post(c, out);
  return out;
}

BuildResult build(const Program& program) {
  BuildResult res;
  res.records = program.records;
  std::vector<Diagnostic> diags;
  for (const auto& f : program.functions) {
    try {
      BuiltFunction bf;
      bf.name = f.name;
      bf.loc = f.loc;
      bf.params = f.params;
      std::set<std::string> pv(f.params.begin(), f.params.end());
      pv.insert(f.locals.begin(), f.locals.end());
      pv.insert(kRetVar);
      bf.program_vars.assign(pv.begin(), pv.end());

      std::vector<Item> items;
      flatten(f.body, items);
      std::vector<RawAnnotation> spec = take_spec(items, f.loc);
      const RawAnnotation* with = spec.size() == 3 ? &spec[0] : nullptr;
      const RawAnnotation& req = spec[spec.size() - 2];
      const RawAnnotation& ens = spec.back();

      AnnScope scope;
      scope.program_vars = pv;
      scope.records = &program.records;

      // Sorts of With variables, inferred over every annotation of the function.
      std::vector<Binder> with_binders;
      if (with) {
        for (const auto& n : with->binders) {
          if (pv.count(n)) throw FrontendError("SpecError", with->loc, "With variable shadows program variable " + n);
          scope.open.insert(n);
        }
        std::vector<RawAnnotation> texts{req, ens};
        for (const auto& it : items)
          if (!it.is_annot) collect_texts(it.stmt, texts);
          else if (it.raw.kind == RK::Inv || it.raw.kind == RK::Assert) texts.push_back(it.raw);
        std::map<std::string, Sort> sorts;
        for (const auto& t : texts) {
          for (const auto& [n, s] : forced_sorts(t.text, scope, t.loc)) {
            auto [pos, fresh] = sorts.emplace(n, s);
            if (!fresh && pos->second != s)
              throw FrontendError("SortError", t.loc, "With variable " + n + " used as both value and sequence");
          }
        }
        for (const auto& n : with->binders) {
          auto it = sorts.find(n);
          with_binders.push_back({n, it == sorts.end() ? Sort::Val : it->second});
        }
        scope.open.clear();
      }
      scope.binders = with_binders;
      bf.spec.with = with_binders;
      bf.spec.require = parse_assertion(req.text, scope, req.loc);
      bf.spec.ensure = parse_assertion(ens.text, scope, ens.loc);

      std::set<std::string> wnames;
      for (const auto& b : with_binders) wnames.insert(b.name);
      for (const auto* pr : {&req, &ens}) {
        const Assertion& a = pr == &req ? bf.spec.require : bf.spec.ensure;
        for (const auto& v : free_logical_vars(a))
          if (!wnames.count(v)) throw FrontendError("UnboundVariable", pr->loc, "unbound logical variable " + v);
      }

      Converter conv(scope);
      bf.body = conv.items_to_astmt(items, with_binders, f.surface.loc);

      std::vector<Diagnostic> post = check_postconditions(bf.body);
      if (!post.empty()) throw FrontendError(post);
      std::string unbound;
      if (!well_typed(with_binders, bf.body, &unbound))
        throw FrontendError("UnboundVariable", f.loc, "unbound logical variable " + unbound + " in " + f.name);
      bf.plain = erase_annotations(bf.body);
      res.functions.push_back(std::move(bf));
    } catch (const FrontendError& e) {
      for (const auto& d : e.diagnostics()) diags.push_back(d);
    }
  }
  if (!diags.empty()) throw FrontendError(diags);
  return res;
}

BuildResult build_source(std::string_view source) { return build(parse_source(source)); }

}  // namespace annoc
