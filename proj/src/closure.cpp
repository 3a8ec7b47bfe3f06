#include "annoc/closure.hpp"

namespace annoc {

namespace {
Term canon_const(const Term& t) {
  if (t.kind == Term::Kind::Int && t.value == 0) return Term::null();
  return t;
}
}  // namespace

int Closure::intern(const Term& raw) {
  Term t = canon_const(raw);
  auto it = ids_.find(t);
  if (it != ids_.end()) return it->second;
  Node n{t.kind, t.name, t.value, {}};
  for (const auto& a : t.args) n.kids.push_back(intern(a));
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(n));
  parent_.push_back(id);
  ids_.emplace(t, id);
  dirty_ = true;
  return id;
}

int Closure::find(int x) {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

void Closure::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  parent_[a] = b;
  dirty_ = true;
}

void Closure::add_eq(const Term& a, const Term& b) { unite(intern(a), intern(b)); }

void Closure::add_neq(const Term& a, const Term& b) { neqs_.emplace_back(intern(a), intern(b)); }

void Closure::add(const PureProp& p) {
  if (p.op == PureProp::Op::Eq)
    add_eq(p.lhs, p.rhs);
  else
    add_neq(p.lhs, p.rhs);
}

void Closure::saturate() {
  while (dirty_) {
    dirty_ = false;
    using K = Term::Kind;
    std::map<std::pair<int, std::vector<int>>, int> sig;
    std::map<int, int> cons_of;   // class -> a cons node in it
    std::map<int, int> const_of;  // class -> a constant node in it
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
      const Node& n = nodes_[i];
      int c = find(i);
      if (n.kind == K::Cons) {
        auto [it, fresh] = cons_of.emplace(c, i);
        if (!fresh) {
          const Node& m = nodes_[it->second];
          unite(n.kids[0], m.kids[0]);
          unite(n.kids[1], m.kids[1]);
        }
      }
      if (n.kind == K::Null || n.kind == K::Int || n.kind == K::Nil) {
        auto [it, fresh] = const_of.emplace(c, i);
        if (!fresh) {
          const Node& m = nodes_[it->second];
          if (m.kind != n.kind || m.value != n.value) clash_ = true;
        }
      }
      if (!n.kids.empty()) {
        std::vector<int> ks;
        for (int k : n.kids) ks.push_back(find(k));
        auto [it, fresh] = sig.emplace(std::make_pair(static_cast<int>(n.kind), ks), i);
        if (!fresh) unite(i, it->second);
      }
    }
    for (const auto& [c, i] : cons_of) {
      auto it = const_of.find(c);
      if (it != const_of.end()) clash_ = true;  // cons equated with nil or a value constant
      (void)i;
    }
  }
}

bool Closure::equal(const Term& a, const Term& b) {
  int x = intern(a), y = intern(b);
  saturate();
  return find(x) == find(y);
}

bool Closure::inconsistent() {
  saturate();
  if (clash_) return true;
  for (const auto& [a, b] : neqs_)
    if (find(a) == find(b)) return true;
  return false;
}

}  // namespace annoc
