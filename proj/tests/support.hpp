#pragma once

// Corpus access and seeded generators shared by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "annoc/annot.hpp"
#include "annoc/ast.hpp"
#include "annoc/model.hpp"
#include "annoc/vcgen.hpp"

namespace annoc::test {

std::string corpus_path(const std::string& name);
std::string read_file(const std::string& path);
BuildResult build_corpus(const std::string& name);
const BuiltFunction& function_named(const BuildResult& r, const std::string& name);

// Equal up to a bijective renaming of the exists binders; pure and spatial
// conjuncts compare as multisets.
bool alpha_equal(const Assertion& a, const Assertion& b);

Chunk pts(Term addr, Term head, Term tail);

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  int pick(int n);  // uniform in [0, n)
  bool coin(double p = 0.5);
  template <class T>
  const T& one_of(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))];
  }

  Term val_term(const std::vector<std::string>& vals, bool ints = true);
  Term seq_term(const std::vector<std::string>& vals, const std::vector<std::string>& seqs, int depth = 2);
  Chunk chunk(const std::vector<std::string>& vals, const std::vector<std::string>& seqs);
  PureProp pure(const std::vector<std::string>& vals, const std::vector<std::string>& seqs);

  // At most 3 chunks and 4 logical names (binders included). With `valid`
  // the right side is obtained from the left by sound steps (frame, folds,
  // abstraction of a name, dropping pure facts).
  Entailment entailment(bool valid);

  struct AeCase {
    std::vector<Binder> sigma;
    Assertion pre;  // exists-free, locals for x and y
    Assign assign;
  };
  AeCase ae_case();

  struct CondCase {
    std::vector<Binder> sigma;
    Assertion pre;
    Cond cond;
  };
  CondCase cond_case();

  // Annotated statement over program variables x and y whose precondition
  // is exec_pre(); every complex statement followed by more code and having
  // several normal exits gets an Assert, so vcgen accepts it.
  AStmt astmt(int depth);
  static Assertion exec_pre();
  static Assertion loop_inv();

 private:
  std::mt19937 rng_;
  AStmt astmt_in(int depth, bool in_loop);
  AStmt leaf(bool in_loop);
};

}  // namespace annoc::test
