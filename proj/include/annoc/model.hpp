#pragma once

// Bounded concrete models of assertions, the entailment oracle and a
// concrete interpreter for plain statements.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "annoc/annot.hpp"
#include "annoc/ast.hpp"
#include "annoc/vcgen.hpp"

namespace annoc {

struct Value {
  bool is_seq = false;
  std::int64_t v = 0;
  std::vector<std::int64_t> s;

  static Value val(std::int64_t x) { return {false, x, {}}; }
  static Value seq(std::vector<std::int64_t> xs) { return {true, 0, std::move(xs)}; }
  bool operator==(const Value&) const = default;
  bool operator<(const Value& o) const;
};

std::string to_string(const Value& v);

struct Cell {
  std::string record;
  std::vector<std::pair<std::string, std::int64_t>> fields;
  bool operator==(const Cell&) const = default;
};

struct ConcreteState {
  std::map<std::string, std::int64_t> store;
  std::map<std::int64_t, Cell> heap;
  std::map<std::string, Value> valuation;
  bool operator==(const ConcreteState&) const = default;
};

std::string to_string(const ConcreteState& s);

struct Bounds {
  int max_list = 3;
  int addresses = 4;  // heap addresses are kAddrBase+1 .. kAddrBase+addresses
  int max_int = 3;    // integers 0..max_int; 0 is NULL
  ListShape list{"list", "head", "tail"};
  // Integers that must not be renamed (literals of the formulas or program).
  // Literals in the formulas being enumerated are added automatically.
  std::set<std::int64_t> literals;
};

void collect_literals(const Term& t, std::set<std::int64_t>& out);
void collect_literals(const Assertion& a, std::set<std::int64_t>& out);

inline constexpr std::int64_t kAddrBase = 1000;

// Sorts of the names an assertion may mention.
using SortEnv = std::map<std::string, Sort>;

// Calls `yield` on every model of sigma-valuation ∧ gamma ∧ a; stops early
// when yield returns false. Address choices are enumerated up to renaming.
// The exists binders of `a` are part of the valuation.
void enumerate_models(const std::vector<Binder>& sigma, const std::vector<PureProp>& gamma,
                      const Assertion& a, const Bounds& b,
                      const std::function<bool(const ConcreteState&)>& yield);

std::vector<ConcreteState> all_models(const std::vector<Binder>& sigma, const std::vector<PureProp>& gamma,
                                      const Assertion& a, const Bounds& b);

// Some choice of a's exists binders makes a hold in s, whose valuation fixes
// a's free names. With allow_frame, a may describe a sub-heap.
bool satisfies(const ConcreteState& s, const Assertion& a, const SortEnv& sorts, const Bounds& b,
               bool allow_frame = true);

struct OracleResult {
  bool valid = true;
  std::optional<ConcreteState> countermodel;
  long models = 0;  // lhs models examined
};

OracleResult oracle_check(const Entailment& e, const Bounds& b = {}, bool allow_frame = true);

struct ExecResult {
  enum class Kind { Normal, Break, Continue, Return, MemError, Diverged };
  Kind kind = Kind::Normal;
  ConcreteState state;
  std::string message;
};

const char* exec_kind_name(ExecResult::Kind k);

ExecResult exec_concrete(const ConcreteState& s, const Stmt& c, long& fuel);

// Renames addresses and non-literal integers so that states equal up to such
// renaming compare equal. Only the listed valuation names are kept.
ConcreteState canonical(const ConcreteState& s, const std::vector<std::string>& keep, const Bounds& b);

}  // namespace annoc
