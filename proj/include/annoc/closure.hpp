#pragma once

// Congruence closure over terms, with cons injectivity and constant clash
// detection. NULL and 0 are one value.

#include <map>
#include <vector>

#include "annoc/ast.hpp"

namespace annoc {

class Closure {
 public:
  void add_eq(const Term& a, const Term& b);
  void add_neq(const Term& a, const Term& b);
  void add(const PureProp& p);

  bool equal(const Term& a, const Term& b);
  // Two distinct constants merged, nil = cons, or a disequality between
  // equal terms.
  bool inconsistent();

 private:
  struct Node {
    Term::Kind kind;
    std::string name;
    std::int64_t value = 0;
    std::vector<int> kids;
  };
  std::map<Term, int> ids_;
  std::vector<Node> nodes_;
  std::vector<int> parent_;
  std::vector<std::pair<int, int>> neqs_;
  bool dirty_ = false;
  bool clash_ = false;

  int intern(const Term& t);
  int find(int x);
  void unite(int a, int b);
  void saturate();
};

}  // namespace annoc
