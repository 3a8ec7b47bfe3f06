#include <cctype>
#include <optional>

#include "annoc/annot.hpp"

namespace annoc {

const char* annotation_kind_name(RawAnnotation::Kind k) {
  switch (k) {
    case RawAnnotation::Kind::With:
      return "With";
    case RawAnnotation::Kind::Require:
      return "Require";
    case RawAnnotation::Kind::Ensure:
      return "Ensure";
    case RawAnnotation::Kind::Inv:
      return "Inv";
    case RawAnnotation::Kind::Assert:
      return "Assert";
  }
  return "?";
}

namespace {

bool id_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

Loc advance_loc(Loc base, std::string_view text, std::size_t upto) {
  for (std::size_t i = 0; i < upto && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++base.line;
      base.col = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++base.col;
    }
  }
  return base;
}

struct ATok {
  enum class Kind { Ident, Int, Punct, End } kind = Kind::End;
  std::string text;
  Loc loc;
};

std::vector<ATok> alex(std::string_view s, Loc base) {
  std::vector<ATok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Loc l = advance_loc(base, s, i);
    if (id_start(c)) {
      std::size_t j = i;
      while (j < s.size() && id_char(s[j])) ++j;
      while (j < s.size() && s[j] == '\'') ++j;
      out.push_back({ATok::Kind::Ident, std::string(s.substr(i, j - i)), l});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({ATok::Kind::Int, std::string(s.substr(i, j - i)), l});
      i = j;
      continue;
    }
    for (const char* p : {"|->", "&&", "==", "!="}) {
      std::string_view pv(p);
      if (s.substr(i, pv.size()) == pv) {
        out.push_back({ATok::Kind::Punct, std::string(pv), l});
        i += pv.size();
        goto next;
      }
    }
    if (std::string_view("(),*").find(c) != std::string_view::npos) {
      out.push_back({ATok::Kind::Punct, std::string(1, c), l});
      ++i;
      continue;
    }
    throw FrontendError("AnnParseError", l, std::string("unexpected character '") + c + "'");
  next:;
  }
  out.push_back({ATok::Kind::End, "", advance_loc(base, s, s.size())});
  return out;
}

const std::set<std::string>& reserved() {
  static const std::set<std::string> r = {"exists", "emp", "ll", "lseg", "NULL", "nil", "cons", "app", "rev"};
  return r;
}

// Union-find over sort variables.
class SortUF {
 public:
  int node(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(parent_.size());
    ids_[name] = id;
    names_.push_back(name);
    parent_.push_back(id);
    sort_.push_back(std::nullopt);
    return id;
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void force(int x, Sort s, Loc l) {
    x = find(x);
    if (sort_[x] && *sort_[x] != s) conflict(x, l);
    sort_[x] = s;
  }
  void unify(int a, int b, Loc l) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (sort_[a] && sort_[b] && *sort_[a] != *sort_[b]) conflict(a, l);
    parent_[a] = b;
    if (!sort_[b]) sort_[b] = sort_[a];
  }
  std::optional<Sort> sort_of(const std::string& name) {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return sort_[find(it->second)];
  }

 private:
  [[noreturn]] void conflict(int x, Loc l) {
    std::string who;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (find(static_cast<int>(i)) == find(x)) who += (who.empty() ? "" : ", ") + names_[i];
    throw FrontendError("SortError", l, "used as both value and sequence: " + who);
  }
  std::map<std::string, int> ids_;
  std::vector<std::string> names_;
  std::vector<int> parent_;
  std::vector<std::optional<Sort>> sort_;
};

struct SRef {
  int node = -1;
  std::optional<Sort> fixed;
};

class AsrtParser {
 public:
  AsrtParser(std::string_view text, const AnnScope& scope, Loc loc)
      : toks_(alex(text, loc)), scope_(scope) {
    for (const auto& t : toks_)
      if (t.kind == ATok::Kind::Ident) taken_.insert(t.text);
    for (const auto& b : scope.binders) {
      taken_.insert(b.name);
      ambient_.insert(b.name);
    }
    for (const auto& n : scope.open) {
      taken_.insert(n);
      ambient_.insert(n);
    }
    for (const auto& v : scope.program_vars) taken_.insert(v);
    for (const auto& b : scope.binders) uf_.force(uf_.node(b.name), b.sort, loc);
  }

  Assertion run() {
    while (is_ident("exists")) {
      next();
      if (peek().kind != ATok::Kind::Ident) fail("expected binder after 'exists'");
      while (peek().kind == ATok::Kind::Ident) {
        const ATok& b = next();
        if (reserved().count(b.text)) fail_at(b, "reserved word used as binder: " + b.text);
        for (const auto& e : user_exists_)
          if (e == b.text) fail_at(b, "duplicate binder " + b.text);
        user_exists_.push_back(b.text);
      }
      expect(",");
    }
    conj();
    if (peek().kind != ATok::Kind::End) fail("unexpected '" + peek().text + "'");
    return finish();
  }

  std::map<std::string, Sort> open_sorts() {
    std::map<std::string, Sort> out;
    for (const auto& n : scope_.open) {
      bool shadowed = false;
      for (const auto& e : user_exists_) shadowed = shadowed || e == n;
      if (shadowed) continue;
      if (auto s = uf_.sort_of(n)) out[n] = *s;
    }
    return out;
  }

 private:
  std::vector<ATok> toks_;
  std::size_t i_ = 0;
  const AnnScope& scope_;
  std::set<std::string> taken_;
  std::set<std::string> ambient_;
  std::vector<std::string> user_exists_;
  std::vector<std::pair<std::string, std::string>> implicit_;  // program var, value var
  std::vector<std::pair<PureProp, Loc>> pure_;
  std::vector<Chunk> spatial_;
  SortUF uf_;

  const ATok& peek() const { return toks_[i_]; }
  const ATok& next() {
    const ATok& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool is_punct(const char* p) const { return peek().kind == ATok::Kind::Punct && peek().text == p; }
  bool is_ident(const char* w) const { return peek().kind == ATok::Kind::Ident && peek().text == w; }
  [[noreturn]] void fail_at(const ATok& t, const std::string& m) { throw FrontendError("AnnParseError", t.loc, m); }
  [[noreturn]] void fail(const std::string& m) { fail_at(peek(), m); }
  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }

  void constrain(const SRef& r, Sort s, Loc l) {
    if (r.node >= 0) {
      uf_.force(r.node, s, l);
    } else if (r.fixed && *r.fixed != s) {
      throw FrontendError("SortError", l, std::string("expected a ") + (s == Sort::Seq ? "sequence" : "value"));
    }
  }
  void equate(const SRef& a, const SRef& b, Loc l) {
    if (a.node >= 0 && b.node >= 0) {
      uf_.unify(a.node, b.node, l);
    } else if (a.node >= 0 && b.fixed) {
      uf_.force(a.node, *b.fixed, l);
    } else if (b.node >= 0 && a.fixed) {
      uf_.force(b.node, *a.fixed, l);
    } else if (a.fixed && b.fixed && *a.fixed != *b.fixed) {
      throw FrontendError("SortError", l, "comparison between a value and a sequence");
    }
  }

  std::string resolve(const std::string& name) {
    for (const auto& e : user_exists_)
      if (e == name) return name;
    if (ambient_.count(name)) return name;
    if (scope_.program_vars.count(name)) {
      for (const auto& [p, v] : implicit_)
        if (p == name) return v;
      std::string v = fresh_name(name + "0", taken_);
      taken_.insert(v);
      implicit_.emplace_back(name, v);
      uf_.force(uf_.node(v), Sort::Val, peek().loc);
      return v;
    }
    return name;  // unbound; reported by the well-typedness check
  }

  std::pair<Term, SRef> term() {
    const ATok& t = peek();
    Loc l = t.loc;
    if (t.kind == ATok::Kind::Int) {
      next();
      return {Term::integer(std::stoll(t.text)), {-1, Sort::Val}};
    }
    if (t.kind != ATok::Kind::Ident) fail("expected a term");
    std::string w = next().text;
    if (w == "NULL") return {Term::null(), {-1, Sort::Val}};
    if (w == "nil") return {Term::nil(), {-1, Sort::Seq}};
    if (w == "cons" || w == "app") {
      expect("(");
      auto [a, ra] = term();
      expect(",");
      auto [b, rb] = term();
      expect(")");
      constrain(ra, w == "cons" ? Sort::Val : Sort::Seq, l);
      constrain(rb, Sort::Seq, l);
      return {w == "cons" ? Term::cons(a, b) : Term::app(a, b), {-1, Sort::Seq}};
    }
    if (w == "rev") {
      expect("(");
      auto [a, ra] = term();
      expect(")");
      constrain(ra, Sort::Seq, l);
      return {Term::rev(a), {-1, Sort::Seq}};
    }
    if (reserved().count(w)) fail_at(toks_[i_ - 1], "'" + w + "' is not a term");
    std::string n = resolve(w);
    return {Term::var(n), {uf_.node(n), std::nullopt}};
  }

  void conj() {
    atom();
    while (is_punct("&&") || is_punct("*")) {
      next();
      atom();
    }
  }

  void atom() {
    Loc l = peek().loc;
    if (is_punct("(")) {
      next();
      conj();
      expect(")");
      return;
    }
    if (is_ident("emp")) {
      next();
      return;
    }
    if (is_ident("ll") || is_ident("lseg")) {
      bool seg = peek().text == "lseg";
      next();
      expect("(");
      auto [a, ra] = term();
      expect(",");
      constrain(ra, Sort::Val, l);
      Term e;
      if (seg) {
        auto [e2, re] = term();
        expect(",");
        constrain(re, Sort::Val, l);
        e = e2;
      }
      auto [s, rs] = term();
      expect(")");
      constrain(rs, Sort::Seq, l);
      spatial_.push_back(seg ? Chunk::segment(a, e, s) : Chunk::list(a, s));
      return;
    }
    auto [lhs, rl] = term();
    if (is_punct("==") || is_punct("!=")) {
      bool eq = next().text == "==";
      auto [rhs, rr] = term();
      equate(rl, rr, l);
      pure_.emplace_back(eq ? PureProp::eq(lhs, rhs) : PureProp::neq(lhs, rhs), l);
      return;
    }
    if (is_punct("|->")) {
      next();
      constrain(rl, Sort::Val, l);
      expect("(");
      std::vector<Term> vals;
      for (;;) {
        auto [v, rv] = term();
        constrain(rv, Sort::Val, l);
        vals.push_back(v);
        if (!is_punct(",")) break;
        next();
      }
      expect(")");
      spatial_.push_back(make_points_to(lhs, vals, l));
      return;
    }
    fail("expected '==', '!=' or '|->'");
  }

  Chunk make_points_to(const Term& addr, const std::vector<Term>& vals, Loc l) {
    const RecordDecl* pick = nullptr;
    int matches = 0;
    if (scope_.records) {
      for (const auto& r : *scope_.records) {
        if (r.fields.size() != vals.size()) continue;
        if (!pick) pick = &r;
        ++matches;
      }
    }
    if (!pick) throw FrontendError("AnnParseError", l, "no record has " + std::to_string(vals.size()) + " fields");
    if (matches > 1) {
      if (auto ls = list_shape(*scope_.records); ls && ls->record != pick->name) {
        for (const auto& r : *scope_.records)
          if (r.name == ls->record && r.fields.size() == vals.size()) pick = &r;
      }
    }
    std::vector<std::pair<std::string, Term>> fs;
    for (std::size_t k = 0; k < vals.size(); ++k) fs.emplace_back(pick->fields[k].name, vals[k]);
    return Chunk::points_to(addr, pick->name, std::move(fs));
  }

  Assertion finish() {
    Assertion a;
    std::map<std::string, Sort> sorts;
    auto sort_or_val = [&](const std::string& n) {
      auto s = uf_.sort_of(n);
      return s ? *s : Sort::Val;
    };
    for (const auto& e : user_exists_) a.exists.push_back({e, sort_or_val(e)});
    std::vector<PureProp> pure;
    for (const auto& [p, l] : pure_) pure.push_back(p);

    // Fold ⟦x⟧-equalities into the locals map.
    std::vector<std::string> unfolded;
    for (const auto& [pv, v] : implicit_) {
      bool folded = false;
      for (std::size_t k = 0; k < pure.size() && !folded; ++k) {
        const PureProp& p = pure[k];
        if (p.op != PureProp::Op::Eq) continue;
        const Term* other = nullptr;
        if (p.lhs.is_var(v) && !occurs(v, p.rhs))
          other = &p.rhs;
        else if (p.rhs.is_var(v) && !occurs(v, p.lhs))
          other = &p.lhs;
        if (!other) continue;
        TermMap m{{v, *other}};
        pure.erase(pure.begin() + static_cast<long>(k));
        for (auto& q : pure) q = subst(q, m);
        for (auto& c : spatial_) c = subst(c, m);
        for (auto& [x, t] : a.locals) t = subst(t, m);
        a.locals[pv] = m.at(v);
        folded = true;
      }
      if (!folded) {
        a.locals[pv] = Term::var(v);
        unfolded.push_back(v);
      }
    }
    for (const auto& v : unfolded) a.exists.push_back({v, Sort::Val});
    a.pure = std::move(pure);
    a.spatial = std::move(spatial_);
    return a;
  }
};

}  // namespace

RawAnnotation classify_annotation(const std::string& payload, Loc loc) {
  Loc base{loc.line, loc.col + 3};
  std::size_t i = 0;
  while (i < payload.size() && std::isspace(static_cast<unsigned char>(payload[i]))) ++i;
  std::size_t j = i;
  while (j < payload.size() && id_char(payload[j])) ++j;
  std::string kw = payload.substr(i, j - i);
  RawAnnotation r;
  r.loc = advance_loc(base, payload, j);
  r.text = payload.substr(j);
  if (kw == "With") {
    r.kind = RawAnnotation::Kind::With;
    auto toks = alex(r.text, r.loc);
    bool want_ident = true;
    for (const auto& t : toks) {
      if (t.kind == ATok::Kind::End) break;
      if (t.kind == ATok::Kind::Ident && !reserved().count(t.text)) {
        for (const auto& b : r.binders)
          if (b == t.text) throw FrontendError("AnnParseError", t.loc, "duplicate binder " + t.text);
        r.binders.push_back(t.text);
        want_ident = false;
      } else if (t.kind == ATok::Kind::Punct && t.text == "," && !want_ident) {
        want_ident = true;
      } else {
        throw FrontendError("AnnParseError", t.loc, "malformed With clause near '" + t.text + "'");
      }
    }
  } else if (kw == "Require") {
    r.kind = RawAnnotation::Kind::Require;
  } else if (kw == "Ensure") {
    r.kind = RawAnnotation::Kind::Ensure;
  } else if (kw == "Inv") {
    r.kind = RawAnnotation::Kind::Inv;
  } else if (kw == "Assert") {
    r.kind = RawAnnotation::Kind::Assert;
  } else if (kw == "Given") {
    throw FrontendError("AnnParseError", advance_loc(base, payload, i),
                        "Given clauses are generated, not written");
  } else {
    throw FrontendError("AnnParseError", advance_loc(base, payload, i),
                        "unknown annotation keyword '" + kw + "'");
  }
  return r;
}

Assertion parse_assertion(std::string_view text, const AnnScope& scope, Loc loc) {
  return AsrtParser(text, scope, loc).run();
}

std::map<std::string, Sort> forced_sorts(std::string_view text, const AnnScope& scope, Loc loc) {
  AsrtParser p(text, scope, loc);
  p.run();
  return p.open_sorts();
}

std::optional<ListShape> list_shape(const std::vector<RecordDecl>& records) {
  for (const auto& r : records) {
    std::string val, nxt;
    for (const auto& f : r.fields) {
      if (f.is_pointer && f.target == r.name) {
        if (nxt.empty()) nxt = f.name;
      } else if (!f.is_pointer && val.empty()) {
        val = f.name;
      }
    }
    if (!val.empty() && !nxt.empty() && r.fields.size() == 2) return ListShape{r.name, val, nxt};
  }
  return std::nullopt;
}

}  // namespace annoc
