#include <algorithm>

#include "annoc/model.hpp"

namespace annoc {

const char* exec_kind_name(ExecResult::Kind k) {
  switch (k) {
    case ExecResult::Kind::Normal:
      return "normal";
    case ExecResult::Kind::Break:
      return "break";
    case ExecResult::Kind::Continue:
      return "continue";
    case ExecResult::Kind::Return:
      return "return";
    case ExecResult::Kind::MemError:
      return "memory error";
    case ExecResult::Kind::Diverged:
      return "diverged";
  }
  return "?";
}

namespace {

using R = ExecResult::Kind;

struct Fault {
  std::string message;
};

std::int64_t value_of(const ConcreteState& st, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Null:
      return 0;
    case Expr::Kind::Int:
      return e.value;
    case Expr::Kind::Var: {
      auto it = st.store.find(e.name);
      if (it == st.store.end()) throw Fault{"read of uninitialized " + e.name};
      return it->second;
    }
  }
  return 0;
}

std::int64_t& field_ref(ConcreteState& st, std::int64_t addr, const std::string& f) {
  auto it = st.heap.find(addr);
  if (it == st.heap.end())
    throw Fault{addr == 0 ? "NULL dereference" : "dangling dereference of " + std::to_string(addr)};
  for (auto& [n, v] : it->second.fields)
    if (n == f) return v;
  throw Fault{"no field " + f};
}

ExecResult::Kind step(ConcreteState& st, const Stmt& c, long& fuel) {
  switch (c.kind) {
    case Stmt::Kind::Skip:
      return R::Normal;
    case Stmt::Kind::Assign: {
      const Assign& a = c.assign;
      switch (a.form) {
        case Assign::Form::Copy:
          st.store[a.target] = value_of(st, a.value);
          break;
        case Assign::Form::Load: {
          std::int64_t v = field_ref(st, value_of(st, a.base), a.field);
          st.store[a.target] = v;
          break;
        }
        case Assign::Form::Store: {
          std::int64_t v = value_of(st, a.value);
          field_ref(st, value_of(st, a.base), a.field) = v;
          break;
        }
      }
      return R::Normal;
    }
    case Stmt::Kind::Seq: {
      R r = step(st, c.kids[0], fuel);
      if (r != R::Normal) return r;
      return step(st, c.kids[1], fuel);
    }
    case Stmt::Kind::If: {
      std::int64_t l = value_of(st, c.cond.lhs);
      bool t = false;
      switch (c.cond.kind) {
        case Cond::Kind::Truthy:
          t = l != 0;
          break;
        case Cond::Kind::Eq:
          t = l == value_of(st, c.cond.rhs);
          break;
        case Cond::Kind::Ne:
          t = l != value_of(st, c.cond.rhs);
          break;
      }
      return step(st, c.kids[t ? 0 : 1], fuel);
    }
    case Stmt::Kind::Loop:
      for (;;) {
        if (--fuel < 0) return R::Diverged;
        R r = step(st, c.kids[0], fuel);
        if (r == R::Break) return R::Normal;
        if (r != R::Normal && r != R::Continue) return r;
        r = step(st, c.kids[1], fuel);
        if (r == R::Break) return R::Normal;
        if (r != R::Normal && r != R::Continue) return r;
      }
    case Stmt::Kind::Break:
      return R::Break;
    case Stmt::Kind::Continue:
      return R::Continue;
    case Stmt::Kind::Return:
      if (c.ret) st.store[kRetVar] = value_of(st, *c.ret);
      return R::Return;
  }
  return R::Normal;
}

}  // namespace

ExecResult exec_concrete(const ConcreteState& s, const Stmt& c, long& fuel) {
  ExecResult out;
  out.state = s;
  try {
    out.kind = step(out.state, c, fuel);
  } catch (const Fault& f) {
    out.kind = R::MemError;
    out.message = f.message;
  }
  return out;
}

ConcreteState canonical(const ConcreteState& s, const std::vector<std::string>& keep, const Bounds& b) {
  ConcreteState base;
  base.store = s.store;
  base.heap = s.heap;
  for (const auto& k : keep)
    if (auto it = s.valuation.find(k); it != s.valuation.end()) base.valuation[k] = it->second;

  auto is_addr = [&](std::int64_t v) { return v > kAddrBase && v <= kAddrBase + b.addresses; };
  auto is_anon = [&](std::int64_t v) { return v >= 1 && v <= b.max_int && !b.literals.count(v); };
  std::set<std::int64_t> addrs, ints;
  auto note = [&](std::int64_t v) {
    if (is_addr(v)) addrs.insert(v);
    if (is_anon(v)) ints.insert(v);
  };
  for (const auto& [n, v] : base.valuation) {
    if (v.is_seq)
      for (auto x : v.s) note(x);
    else
      note(v.v);
  }
  for (const auto& [n, v] : base.store) note(v);
  for (const auto& [a, c] : base.heap) {
    note(a);
    for (const auto& f : c.fields) note(f.second);
  }
  std::vector<std::int64_t> av(addrs.begin(), addrs.end()), iv(ints.begin(), ints.end());
  std::vector<std::int64_t> anon_labels;
  for (int i = 1; i <= b.max_int && anon_labels.size() < iv.size(); ++i)
    if (is_anon(i)) anon_labels.push_back(i);

  auto apply = [&](const std::map<std::int64_t, std::int64_t>& m) {
    auto f = [&](std::int64_t v) {
      auto it = m.find(v);
      return it == m.end() ? v : it->second;
    };
    ConcreteState r;
    for (const auto& [n, v] : base.valuation) {
      Value w = v;
      if (w.is_seq)
        for (auto& x : w.s) x = f(x);
      else
        w.v = f(w.v);
      r.valuation[n] = w;
    }
    for (const auto& [n, v] : base.store) r.store[n] = f(v);
    for (const auto& [a, c] : base.heap) {
      Cell cc = c;
      for (auto& fl : cc.fields) fl.second = f(fl.second);
      r.heap[f(a)] = cc;
    }
    return r;
  };

  std::optional<ConcreteState> best;
  std::string best_key;
  std::vector<std::int64_t> pa = av;
  std::sort(pa.begin(), pa.end());
  do {
    std::vector<std::int64_t> pi = iv;
    std::sort(pi.begin(), pi.end());
    do {
      std::map<std::int64_t, std::int64_t> m;
      for (std::size_t i = 0; i < pa.size(); ++i) m[pa[i]] = kAddrBase + 1 + static_cast<std::int64_t>(i);
      for (std::size_t i = 0; i < pi.size(); ++i) m[pi[i]] = anon_labels[i];
      ConcreteState r = apply(m);
      std::string key = to_string(r);
      if (!best || key < best_key) {
        best = r;
        best_key = key;
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
  } while (std::next_permutation(pa.begin(), pa.end()));
  return *best;
}

}  // namespace annoc
