#include "annoc/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace annoc {

bool Value::operator<(const Value& o) const {
  if (is_seq != o.is_seq) return !is_seq;
  if (is_seq) return s < o.s;
  return v < o.v;
}

namespace {

std::string show_val(std::int64_t v) {
  if (v == 0) return "NULL";
  if (v > kAddrBase) return "@" + std::to_string(v - kAddrBase);
  return std::to_string(v);
}

}  // namespace

std::string to_string(const Value& v) {
  if (!v.is_seq) return show_val(v.v);
  std::string out = "[";
  for (std::size_t i = 0; i < v.s.size(); ++i) out += (i ? ", " : "") + show_val(v.s[i]);
  return out + "]";
}

std::string to_string(const ConcreteState& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [n, v] : s.valuation) {
    os << (first ? "" : ", ") << n << "=" << to_string(v);
    first = false;
  }
  os << "} store{";
  first = true;
  for (const auto& [n, v] : s.store) {
    os << (first ? "" : ", ") << n << "=" << show_val(v);
    first = false;
  }
  os << "} heap{";
  first = true;
  for (const auto& [a, c] : s.heap) {
    os << (first ? "" : ", ") << show_val(a) << "↦(";
    for (std::size_t i = 0; i < c.fields.size(); ++i) os << (i ? ", " : "") << show_val(c.fields[i].second);
    os << ")";
    first = false;
  }
  os << "}";
  return os.str();
}

namespace {

using K = Term::Kind;

Term to_term(const Value& v) {
  if (!v.is_seq) return v.v == 0 ? Term::null() : Term::integer(v.v);
  Term acc = Term::nil();
  for (auto it = v.s.rbegin(); it != v.s.rend(); ++it)
    acc = Term::cons(*it == 0 ? Term::null() : Term::integer(*it), acc);
  return acc;
}

void infer_term(const Term& t, bool seq_pos, SortEnv& env) {
  switch (t.kind) {
    case K::Var:
      env.emplace(t.name, seq_pos ? Sort::Seq : Sort::Val);
      return;
    case K::Cons:
      infer_term(t.args[0], false, env);
      infer_term(t.args[1], true, env);
      return;
    case K::App:
    case K::Rev:
      for (const auto& a : t.args) infer_term(a, true, env);
      return;
    default:
      return;
  }
}

bool seq_shaped(const Term& t) {
  return t.kind == K::Nil || t.kind == K::Cons || t.kind == K::App || t.kind == K::Rev;
}

void infer_prop(const PureProp& p, SortEnv& env) {
  bool seq = seq_shaped(p.lhs) || seq_shaped(p.rhs);
  if (!seq) {
    auto known = [&](const Term& t) {
      if (!t.is_var()) return false;
      auto it = env.find(t.name);
      return it != env.end() && it->second == Sort::Seq;
    };
    seq = known(p.lhs) || known(p.rhs);
  }
  infer_term(p.lhs, seq, env);
  infer_term(p.rhs, seq, env);
}

void infer_assertion(const Assertion& a, SortEnv& env) {
  for (const auto& [x, t] : a.locals) infer_term(t, false, env);
  for (const auto& p : a.pure) infer_prop(p, env);
  for (const auto& c : a.spatial) {
    infer_term(c.addr, false, env);
    for (const auto& f : c.fields) infer_term(f.second, false, env);
    if (c.kind != Chunk::Kind::PointsTo) infer_term(c.contents, true, env);
    if (c.kind == Chunk::Kind::ListSeg) infer_term(c.end, false, env);
  }
}

std::optional<Value> eval_in(const Term& t, const std::map<std::string, Value>& val) {
  switch (t.kind) {
    case K::Var: {
      auto it = val.find(t.name);
      if (it == val.end()) return std::nullopt;
      return it->second;
    }
    case K::Null:
      return Value::val(0);
    case K::Int:
      return Value::val(t.value);
    case K::Nil:
      return Value::seq({});
    case K::Cons: {
      auto h = eval_in(t.args[0], val);
      auto r = eval_in(t.args[1], val);
      if (!h || !r || h->is_seq || !r->is_seq) return std::nullopt;
      Value out = *r;
      out.s.insert(out.s.begin(), h->v);
      return out;
    }
    case K::App: {
      auto x = eval_in(t.args[0], val);
      auto y = eval_in(t.args[1], val);
      if (!x || !y || !x->is_seq || !y->is_seq) return std::nullopt;
      Value out = *x;
      out.s.insert(out.s.end(), y->s.begin(), y->s.end());
      return out;
    }
    case K::Rev: {
      auto x = eval_in(t.args[0], val);
      if (!x || !x->is_seq) return std::nullopt;
      std::reverse(x->s.begin(), x->s.end());
      return x;
    }
  }
  return std::nullopt;
}

struct State {
  std::map<std::string, Value> val;
  std::map<std::int64_t, Cell> heap;
  std::set<std::int64_t> consumed;
  std::vector<PureProp> pure;
  std::vector<Chunk> chunks;
  std::vector<std::string> must;
};

enum class Inv { Ok, Fail, Stuck };

class Search {
 public:
  Search(const Bounds& b, SortEnv sorts, bool fixed, bool allow_frame)
      : b_(b), sorts_(std::move(sorts)), fixed_(fixed), allow_frame_(allow_frame) {}

  // Returns false when the consumer asked to stop.
  bool run(State st, const std::function<bool(const State&)>& done) {
    done_ = &done;
    return branch(std::move(st));
  }

 private:
  const Bounds& b_;
  SortEnv sorts_;
  bool fixed_;
  bool allow_frame_;
  const std::function<bool(const State&)>* done_ = nullptr;

  // Witness search may need sequences longer than the generation bound.
  int seq_limit() const { return fixed_ ? b_.max_list + b_.addresses : b_.max_list; }
  bool is_addr(std::int64_t v) const { return v > kAddrBase && v <= kAddrBase + b_.addresses; }
  Sort sort(const std::string& x) const {
    auto it = sorts_.find(x);
    return it == sorts_.end() ? Sort::Val : it->second;
  }

  std::optional<Value> eval(const Term& t, const State& st) const { return eval_in(t, st.val); }

  Inv invert(const Term& t, const Value& v, State& st) const {
    if (auto e = eval(t, st)) return *e == v ? Inv::Ok : Inv::Fail;
    switch (t.kind) {
      case K::Var:
        if ((sort(t.name) == Sort::Seq) != v.is_seq) return Inv::Fail;
        st.val[t.name] = v;
        return Inv::Ok;
      case K::Cons: {
        if (!v.is_seq || v.s.empty()) return Inv::Fail;
        Inv a = invert(t.args[0], Value::val(v.s[0]), st);
        if (a == Inv::Fail) return a;
        Inv r = invert(t.args[1], Value::seq({v.s.begin() + 1, v.s.end()}), st);
        if (r == Inv::Fail) return r;
        return a == Inv::Stuck || r == Inv::Stuck ? Inv::Stuck : Inv::Ok;
      }
      case K::App: {
        if (!v.is_seq) return Inv::Fail;
        auto x = eval(t.args[0], st);
        auto y = eval(t.args[1], st);
        if (x) {
          if (!x->is_seq || x->s.size() > v.s.size() || !std::equal(x->s.begin(), x->s.end(), v.s.begin()))
            return Inv::Fail;
          return invert(t.args[1], Value::seq({v.s.begin() + static_cast<long>(x->s.size()), v.s.end()}), st);
        }
        if (y) {
          if (!y->is_seq || y->s.size() > v.s.size() ||
              !std::equal(y->s.begin(), y->s.end(), v.s.end() - static_cast<long>(y->s.size())))
            return Inv::Fail;
          return invert(t.args[0], Value::seq({v.s.begin(), v.s.end() - static_cast<long>(y->s.size())}), st);
        }
        return Inv::Stuck;
      }
      case K::Rev: {
        if (!v.is_seq) return Inv::Fail;
        Value r = v;
        std::reverse(r.s.begin(), r.s.end());
        return invert(t.args[0], r, st);
      }
      default:
        return Inv::Fail;
    }
  }

  bool has_unassigned(const Term& t, const State& st) const {
    std::vector<std::string> vs;
    collect_vars(t, vs);
    for (const auto& v : vs)
      if (!st.val.count(v)) return true;
    return false;
  }

  bool anonymous_int(std::int64_t v) const { return v >= 1 && v <= b_.max_int && !b_.literals.count(v); }

  // Addresses and anonymous integers already in use anywhere in the state.
  std::set<std::int64_t> used(const State& st) const {
    std::set<std::int64_t> u;
    auto add = [&](std::int64_t v) {
      if (is_addr(v) || anonymous_int(v)) u.insert(v);
    };
    for (const auto& [n, v] : st.val) {
      if (v.is_seq)
        for (auto x : v.s) add(x);
      else
        add(v.v);
    }
    for (const auto& [a, c] : st.heap) {
      add(a);
      for (const auto& f : c.fields) add(f.second);
    }
    return u;
  }

  // Integers and addresses are interchangeable unless named by a literal, so
  // one representative fresh value of each kind suffices.
  std::vector<std::int64_t> val_domain(const State& st) const {
    std::vector<std::int64_t> d{0};
    for (auto l : b_.literals)
      if (l != 0) d.push_back(l);
    auto u = used(st);
    d.insert(d.end(), u.begin(), u.end());
    for (int i = 1; i <= b_.max_int; ++i)
      if (anonymous_int(i) && !u.count(i)) {
        d.push_back(i);
        break;
      }
    for (int i = 1; i <= b_.addresses; ++i)
      if (!u.count(kAddrBase + i)) {
        d.push_back(kAddrBase + i);
        break;
      }
    return d;
  }

  bool propagate(State& st) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < st.pure.size();) {
        const PureProp p = st.pure[i];
        auto a = eval(p.lhs, st), c = eval(p.rhs, st);
        if (a && c) {
          bool eq = *a == *c;
          if (eq != (p.op == PureProp::Op::Eq)) return false;
          st.pure.erase(st.pure.begin() + static_cast<long>(i));
          changed = true;
          continue;
        }
        if (p.op == PureProp::Op::Eq && (a || c)) {
          std::size_t before = st.val.size();
          Inv r = a ? invert(p.rhs, *a, st) : invert(p.lhs, *c, st);
          if (r == Inv::Fail) return false;
          if (r == Inv::Ok) {
            st.pure.erase(st.pure.begin() + static_cast<long>(i));
            changed = true;
            continue;
          }
          if (st.val.size() != before) changed = true;
        }
        ++i;
      }
      for (std::size_t i = 0; i < st.chunks.size();) {
        const Chunk c = st.chunks[i];
        auto a = eval(c.addr, st);
        if (!a) {
          ++i;
          continue;
        }
        if (a->is_seq) return false;
        if (c.kind == Chunk::Kind::PointsTo) {
          if (!is_addr(a->v)) return false;
          if (fixed_) {
            auto it = st.heap.find(a->v);
            if (it == st.heap.end() || st.consumed.count(a->v) || it->second.record != c.record ||
                it->second.fields.size() != c.fields.size())
              return false;
            st.consumed.insert(a->v);
            for (std::size_t k = 0; k < c.fields.size(); ++k) {
              if (it->second.fields[k].first != c.fields[k].first) return false;
              st.pure.push_back(PureProp::eq(c.fields[k].second, to_term(Value::val(it->second.fields[k].second))));
            }
          } else {
            if (st.heap.count(a->v)) return false;
            Cell cell{c.record, {}};
            bool ready = true;
            for (const auto& [f, t] : c.fields) {
              auto v = eval(t, st);
              if (!v) {
                ready = false;
                break;
              }
              if (v->is_seq) return false;
              cell.fields.emplace_back(f, v->v);
            }
            if (!ready) {
              ++i;
              continue;
            }
            st.heap[a->v] = cell;
          }
          st.chunks.erase(st.chunks.begin() + static_cast<long>(i));
          changed = true;
          continue;
        }
        if (c.kind == Chunk::Kind::ListPred && a->v == 0) {
          st.pure.push_back(PureProp::eq(c.contents, Term::nil()));
          st.chunks.erase(st.chunks.begin() + static_cast<long>(i));
          changed = true;
          continue;
        }
        ++i;
      }
    }
    return true;
  }

  bool finish(State& st) {
    for (const auto& x : st.must) {
      if (st.val.count(x)) continue;
      if (sort(x) == Sort::Val) {
        for (auto v : val_domain(st)) {
          State s2 = st;
          s2.val[x] = Value::val(v);
          if (!finish(s2)) return false;
        }
      } else {
        if (!gen_seq(st, x, {}, [&](State& s2) { return finish(s2); })) return false;
      }
      return true;
    }
    if (fixed_ && !allow_frame_ && st.consumed.size() != st.heap.size()) return true;
    return (*done_)(st);
  }

  // Enumerates all sequences for x up to the list bound.
  bool gen_seq(const State& st, const std::string& x, std::vector<std::int64_t> pref,
               const std::function<bool(State&)>& k) {
    {
      State s2 = st;
      s2.val[x] = Value::seq(pref);
      if (!k(s2)) return false;
    }
    if (static_cast<int>(pref.size()) >= seq_limit()) return true;
    // Elements chosen so far count as used addresses.
    State probe = st;
    probe.val["\x01seq"] = Value::seq(pref);
    for (auto v : val_domain(probe)) {
      auto p2 = pref;
      p2.push_back(v);
      if (!gen_seq(st, x, p2, k)) return false;
    }
    return true;
  }

  // Walks or builds the cell chain of a list predicate from `cur`.
  bool chain(State st, const Chunk& c, std::int64_t cur, std::vector<std::int64_t> heads,
             const std::optional<Value>& want) {
    bool seg = c.kind == Chunk::Kind::ListSeg;
    if (seg || cur == 0) {
      State s2 = st;
      s2.pure.push_back(PureProp::eq(c.contents, to_term(Value::seq(heads))));
      if (seg) s2.pure.push_back(PureProp::eq(c.end, to_term(Value::val(cur))));
      if (!branch(std::move(s2))) return false;
    }
    if (cur == 0 || static_cast<int>(heads.size()) >= seq_limit()) return true;
    if (want && heads.size() >= want->s.size()) return true;
    if (!is_addr(cur)) return true;
    if (fixed_) {
      auto it = st.heap.find(cur);
      if (it == st.heap.end() || st.consumed.count(cur) || it->second.record != b_.list.record) return true;
      std::int64_t h = 0, n = 0;
      for (const auto& [f, v] : it->second.fields) {
        if (f == b_.list.value_field) h = v;
        if (f == b_.list.next_field) n = v;
      }
      if (want && want->s[heads.size()] != h) return true;
      st.consumed.insert(cur);
      heads.push_back(h);
      return chain(std::move(st), c, n, std::move(heads), want);
    }
    if (st.heap.count(cur)) return true;
    std::vector<std::int64_t> hs;
    if (want)
      hs.push_back(want->s[heads.size()]);
    else
      hs = val_domain(st);
    for (auto h : hs) {
      State sh = st;
      sh.heap[cur] = Cell{b_.list.record, {{b_.list.value_field, h}, {b_.list.next_field, 0}}};
      // Record the head before choosing the successor so fresh picks stay canonical.
      for (auto n : val_domain(sh)) {
        State s2 = sh;
        s2.heap[cur].fields[1].second = n;
        auto h2 = heads;
        h2.push_back(h);
        if (!chain(std::move(s2), c, n, std::move(h2), want)) return false;
      }
    }
    return true;
  }

  // Locates an app(x, y) with both sides unknown whose value is determined.
  bool find_split(const Term& t, const Value& v, const State& st, Term& at, Value& target) const {
    if (!v.is_seq || t.kind == K::Var) return false;
    switch (t.kind) {
      case K::Cons:
        if (v.s.empty()) return false;
        return find_split(t.args[1], Value::seq({v.s.begin() + 1, v.s.end()}), st, at, target);
      case K::Rev: {
        Value r = v;
        std::reverse(r.s.begin(), r.s.end());
        return find_split(t.args[0], r, st, at, target);
      }
      case K::App: {
        auto x = eval(t.args[0], st);
        auto y = eval(t.args[1], st);
        if (x && x->is_seq && x->s.size() <= v.s.size())
          return find_split(t.args[1], Value::seq({v.s.begin() + static_cast<long>(x->s.size()), v.s.end()}), st,
                            at, target);
        if (y && y->is_seq && y->s.size() <= v.s.size())
          return find_split(t.args[0], Value::seq({v.s.begin(), v.s.end() - static_cast<long>(y->s.size())}), st,
                            at, target);
        if (!x && !y) {
          at = t;
          target = v;
          return true;
        }
        return false;
      }
      default:
        return false;
    }
  }

  bool branch(State st) {
    if (!propagate(st)) return true;
    if (st.pure.empty() && st.chunks.empty()) return finish(st);

    for (std::size_t i = 0; i < st.chunks.size(); ++i) {
      const Chunk c = st.chunks[i];
      if (c.kind == Chunk::Kind::PointsTo) continue;
      auto a = eval(c.addr, st);
      if (!a) continue;
      auto want = eval(c.contents, st);
      if (want && !want->is_seq) return true;
      State s2 = st;
      s2.chunks.erase(s2.chunks.begin() + static_cast<long>(i));
      return chain(std::move(s2), c, a->v, {}, want);
    }

    for (const auto& p : st.pure) {
      if (p.op != PureProp::Op::Eq) continue;
      auto a = eval(p.lhs, st), c = eval(p.rhs, st);
      if (!a && !c) continue;
      Term at;
      Value target;
      if (!find_split(a ? p.rhs : p.lhs, a ? *a : *c, st, at, target)) continue;
      for (std::size_t k = 0; k <= target.s.size(); ++k) {
        State s2 = st;
        s2.pure.push_back(PureProp::eq(at.args[0], to_term(Value::seq({target.s.begin(), target.s.begin() + static_cast<long>(k)}))));
        s2.pure.push_back(PureProp::eq(at.args[1], to_term(Value::seq({target.s.begin() + static_cast<long>(k), target.s.end()}))));
        if (!branch(std::move(s2))) return false;
      }
      return true;
    }

    // Pick a variable: chunk addresses first, then values, then sequences.
    std::string pick;
    int best = 99;
    auto consider = [&](const std::string& x, int rank) {
      if (st.val.count(x)) return;
      if (sort(x) == Sort::Seq) rank += 10;
      if (rank < best) {
        best = rank;
        pick = x;
      }
    };
    for (const auto& c : st.chunks) {
      if (c.addr.is_var()) consider(c.addr.name, 0);
      std::vector<std::string> vs;
      collect_vars(c, vs);
      for (const auto& x : vs) consider(x, 1);
    }
    for (const auto& p : st.pure) {
      std::vector<std::string> vs;
      collect_vars(p, vs);
      for (const auto& x : vs) consider(x, 2);
    }
    if (pick.empty()) return true;  // stuck without unknowns: no model
    if (sort(pick) == Sort::Val) {
      for (auto v : val_domain(st)) {
        State s2 = st;
        s2.val[pick] = Value::val(v);
        if (!branch(std::move(s2))) return false;
      }
      return true;
    }
    return gen_seq(st, pick, {}, [&](State& s2) { return branch(s2); });
  }
};

SortEnv sorts_for(const std::vector<Binder>& sigma, const Assertion& a) {
  SortEnv env;
  for (const auto& b : sigma) env[b.name] = b.sort;
  for (const auto& b : a.exists) env[b.name] = b.sort;
  return env;
}

std::vector<std::string> free_names(const std::vector<PureProp>& gamma, const Assertion& a) {
  std::vector<std::string> vs = free_logical_vars(a);
  for (const auto& p : gamma) collect_vars(p, vs);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& v : vs)
    if (seen.insert(v).second) out.push_back(v);
  return out;
}

// Opens the exists prefix with decorated names that cannot clash.
Assertion open_exists(const Assertion& a, const std::string& prefix, const std::string& suffix, SortEnv& env,
                      std::vector<std::string>* names) {
  TermMap ren;
  for (const auto& b : a.exists) {
    std::string n = prefix + b.name + suffix;
    ren[b.name] = Term::var(n);
    env[n] = b.sort;
    if (names) names->push_back(n);
  }
  Assertion body = a;
  body.exists.clear();
  return subst(body, ren);
}

bool check_in(const ConcreteState& s, const Assertion& body, const std::vector<std::string>& witnesses,
              const SortEnv& env, const Bounds& b, bool allow_frame) {
  State st;
  st.val = s.valuation;
  st.heap = s.heap;
  for (const auto& [x, t] : body.locals) {
    auto it = s.store.find(x);
    if (it == s.store.end()) return false;
    st.pure.push_back(PureProp::eq(t, to_term(Value::val(it->second))));
  }
  for (const auto& p : body.pure) st.pure.push_back(p);
  st.chunks = body.spatial;
  st.must = witnesses;
  for (const auto& x : free_logical_vars(body))
    if (!st.val.count(x)) st.must.push_back(x);
  Search search(b, env, true, allow_frame);
  bool found = false;
  search.run(std::move(st), [&](const State&) {
    found = true;
    return false;
  });
  return found;
}

}  // namespace

void collect_literals(const Term& t, std::set<std::int64_t>& out) {
  if (t.kind == K::Int && t.value != 0) out.insert(t.value);
  for (const auto& a : t.args) collect_literals(a, out);
}

void collect_literals(const Assertion& a, std::set<std::int64_t>& out) {
  for (const auto& [x, t] : a.locals) collect_literals(t, out);
  for (const auto& p : a.pure) {
    collect_literals(p.lhs, out);
    collect_literals(p.rhs, out);
  }
  for (const auto& c : a.spatial) {
    collect_literals(c.addr, out);
    for (const auto& f : c.fields) collect_literals(f.second, out);
    collect_literals(c.contents, out);
    collect_literals(c.end, out);
  }
}

namespace {

void literals_of(const std::vector<PureProp>& ps, std::set<std::int64_t>& out) {
  for (const auto& p : ps) {
    collect_literals(p.lhs, out);
    collect_literals(p.rhs, out);
  }
}

// Enumerates models of pure ∧ chunks; locals are evaluated into the store.
void enumerate_core(const SortEnv& env, std::vector<PureProp> pure, std::vector<Chunk> chunks,
                    const std::map<std::string, Term>& locals, std::vector<std::string> must, const Bounds& b,
                    const std::function<bool(const ConcreteState&)>& yield) {
  State st;
  st.pure = std::move(pure);
  st.chunks = std::move(chunks);
  st.must = std::move(must);
  Search search(b, env, false, true);
  search.run(std::move(st), [&](const State& m) {
    ConcreteState cs;
    cs.valuation = m.val;
    cs.heap = m.heap;
    for (const auto& [x, t] : locals)
      if (auto v = eval_in(t, m.val); v && !v->is_seq) cs.store[x] = v->v;
    return yield(cs);
  });
}

}  // namespace

void enumerate_models(const std::vector<Binder>& sigma, const std::vector<PureProp>& gamma, const Assertion& a,
                      const Bounds& b, const std::function<bool(const ConcreteState&)>& yield) {
  SortEnv env = sorts_for(sigma, a);
  infer_assertion(a, env);
  for (const auto& p : gamma) infer_prop(p, env);
  Bounds bb = b;
  collect_literals(a, bb.literals);
  literals_of(gamma, bb.literals);
  Assertion body = a;
  body.exists.clear();
  std::vector<PureProp> pure = gamma;
  pure.insert(pure.end(), body.pure.begin(), body.pure.end());
  std::vector<std::string> must;
  for (const auto& bd : sigma) must.push_back(bd.name);
  for (const auto& bd : a.exists) must.push_back(bd.name);
  for (const auto& x : free_names(gamma, body)) must.push_back(x);
  enumerate_core(env, std::move(pure), body.spatial, body.locals, std::move(must), bb, yield);
}

std::vector<ConcreteState> all_models(const std::vector<Binder>& sigma, const std::vector<PureProp>& gamma,
                                      const Assertion& a, const Bounds& b) {
  std::vector<ConcreteState> out;
  enumerate_models(sigma, gamma, a, b, [&](const ConcreteState& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

bool satisfies(const ConcreteState& s, const Assertion& a, const SortEnv& sorts, const Bounds& b, bool allow_frame) {
  SortEnv env = sorts;
  std::vector<std::string> wit;
  Assertion body = open_exists(a, "?", "", env, &wit);
  infer_assertion(body, env);
  Bounds bb = b;
  collect_literals(a, bb.literals);
  return check_in(s, body, wit, env, bb, allow_frame);
}

OracleResult oracle_check(const Entailment& e, const Bounds& b, bool allow_frame) {
  OracleResult res;
  SortEnv env;
  for (const auto& bd : e.sigma) env[bd.name] = bd.sort;
  std::vector<Binder> lhs_binders;
  Assertion lhs = open_exists(e.lhs, "", "#", env, nullptr);
  for (const auto& bd : e.lhs.exists) lhs_binders.push_back({bd.name + "#", bd.sort});
  std::vector<std::string> wit;
  Assertion rhs = open_exists(e.rhs, "?", "", env, &wit);
  infer_assertion(lhs, env);
  infer_assertion(rhs, env);
  for (const auto& p : e.gamma) infer_prop(p, env);

  Bounds bb = b;
  collect_literals(lhs, bb.literals);
  collect_literals(rhs, bb.literals);
  literals_of(e.gamma, bb.literals);

  // Names unconnected to the heap and the right-hand side only need to be
  // satisfiable.
  std::map<std::string, std::string> uf;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
    auto it = uf.find(x);
    if (it == uf.end() || it->second == x) return x;
    return it->second = find(it->second);
  };
  auto unite = [&](const std::string& x, const std::string& y) { uf[find(x)] = find(y); };
  const std::string kRel = "\x01rel";
  auto vars_of = [](const auto& thing) {
    std::vector<std::string> vs;
    collect_vars(thing, vs);
    return vs;
  };
  for (const auto& c : lhs.spatial)
    for (const auto& x : vars_of(c)) unite(x, kRel);
  for (const auto& x : free_logical_vars(rhs)) unite(x, kRel);
  for (const auto& [x, t] : lhs.locals)
    for (const auto& v : vars_of(t)) unite(v, kRel);
  std::vector<PureProp> pure = e.gamma;
  pure.insert(pure.end(), lhs.pure.begin(), lhs.pure.end());
  for (const auto& p : pure) {
    auto vs = vars_of(p);
    for (std::size_t i = 1; i < vs.size(); ++i) unite(vs[i], vs[0]);
  }
  auto relevant = [&](const std::string& x) { return find(x) == find(kRel); };
  std::vector<PureProp> rel_pure, side_pure;
  std::vector<std::string> side_names;
  for (const auto& p : pure) {
    auto vs = vars_of(p);
    if (!vs.empty() && relevant(vs[0])) {
      rel_pure.push_back(p);
    } else {
      side_pure.push_back(p);
      side_names.insert(side_names.end(), vs.begin(), vs.end());
    }
  }
  bool side_ok = false;
  enumerate_core(env, side_pure, {}, {}, side_names, bb, [&](const ConcreteState&) {
    side_ok = true;
    return false;
  });
  if (!side_ok) return res;  // unsatisfiable premise

  std::vector<std::string> must;
  for (const auto& bd : e.sigma)
    if (relevant(bd.name)) must.push_back(bd.name);
  for (const auto& bd : lhs_binders)
    if (relevant(bd.name)) must.push_back(bd.name);
  for (const auto& x : free_logical_vars(lhs))
    if (relevant(x)) must.push_back(x);
  for (const auto& x : free_logical_vars(rhs))
    if (std::find(wit.begin(), wit.end(), x) == wit.end()) must.push_back(x);
  enumerate_core(env, rel_pure, lhs.spatial, lhs.locals, must, bb, [&](const ConcreteState& m) {
    ++res.models;
    for (const auto& [x, t] : lhs.locals)
      if (!m.store.count(x)) return true;  // local bound to an unusable value
    if (!check_in(m, rhs, wit, env, bb, allow_frame)) {
      res.valid = false;
      res.countermodel = m;
      return false;
    }
    return true;
  });
  return res;
}

}  // namespace annoc
