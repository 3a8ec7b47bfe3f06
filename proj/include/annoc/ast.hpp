#pragma once

// Shared logical and program syntax for the whole pipeline.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace annoc {

struct Loc {
  int line = 0;
  int col = 0;
  bool operator==(const Loc&) const = default;
};

enum class Sort { Val, Seq };

const char* sort_name(Sort s);

struct Binder {
  std::string name;
  Sort sort = Sort::Val;
  bool operator==(const Binder&) const = default;
};

// Logical value expression. Sequences are built from nil/cons/app/rev.
struct Term {
  enum class Kind { Var, Null, Int, Nil, Cons, App, Rev };

  Kind kind = Kind::Null;
  std::string name;        // Var
  std::int64_t value = 0;  // Int
  std::vector<Term> args;  // Cons(head, tail), App(l, r), Rev(x)

  static Term var(std::string n);
  static Term null();
  static Term integer(std::int64_t v);
  static Term nil();
  static Term cons(Term head, Term tail);
  static Term app(Term l, Term r);
  static Term rev(Term x);

  bool is_var() const { return kind == Kind::Var; }
  bool is_var(const std::string& n) const { return kind == Kind::Var && name == n; }
  // NULL and integer literals; NULL and 0 denote the same machine value.
  bool is_const() const { return kind == Kind::Null || kind == Kind::Int; }
  std::int64_t const_value() const { return kind == Kind::Int ? value : 0; }

  bool operator==(const Term& o) const;
  bool operator<(const Term& o) const;
};

struct PureProp {
  enum class Op { Eq, Neq };
  Op op = Op::Eq;
  Term lhs;
  Term rhs;

  static PureProp eq(Term a, Term b) { return {Op::Eq, std::move(a), std::move(b)}; }
  static PureProp neq(Term a, Term b) { return {Op::Neq, std::move(a), std::move(b)}; }
  // The conventional unsatisfiable conjunct 0 = 1.
  static PureProp falsum() { return eq(Term::integer(0), Term::integer(1)); }
  bool is_falsum() const;

  bool operator==(const PureProp&) const = default;
};

// Spatial atom. ListSeg(addr, end, contents) is the list segment from addr to
// end; ListPred(addr, contents) is the NULL-terminated list.
struct Chunk {
  enum class Kind { PointsTo, ListPred, ListSeg };
  Kind kind = Kind::PointsTo;
  Term addr;
  std::string record;                              // PointsTo
  std::vector<std::pair<std::string, Term>> fields;  // PointsTo, declaration order
  Term contents;                                   // ListPred, ListSeg
  Term end;                                        // ListSeg

  static Chunk points_to(Term addr, std::string record,
                         std::vector<std::pair<std::string, Term>> fields);
  static Chunk list(Term addr, Term contents);
  static Chunk segment(Term addr, Term end, Term contents);

  bool operator==(const Chunk&) const = default;
};

// Canonical symbolic heap: exists-prefix, program variable bindings, pure and
// spatial conjuncts.
struct Assertion {
  std::vector<Binder> exists;
  std::map<std::string, Term> locals;
  std::vector<PureProp> pure;
  std::vector<Chunk> spatial;

  bool empty() const {
    return exists.empty() && locals.empty() && pure.empty() && spatial.empty();
  }
  bool operator==(const Assertion&) const = default;
};

// ---------------------------------------------------------------------------
// Program syntax

struct Expr {
  enum class Kind { Var, Null, Int };
  Kind kind = Kind::Null;
  std::string name;
  std::int64_t value = 0;

  static Expr var(std::string n) { return {Kind::Var, std::move(n), 0}; }
  static Expr null() { return {Kind::Null, {}, 0}; }
  static Expr integer(std::int64_t v) { return {Kind::Int, {}, v}; }
  bool operator==(const Expr&) const = default;
};

struct Assign {
  enum class Form {
    Copy,   // target = value
    Load,   // target = base->field
    Store,  // base->field = value
  };
  Form form = Form::Copy;
  std::string target;
  Expr base;
  std::string field;
  Expr value;
  bool operator==(const Assign&) const = default;
};

struct Cond {
  enum class Kind { Truthy, Eq, Ne };
  Kind kind = Kind::Truthy;
  Expr lhs;
  Expr rhs;
  bool operator==(const Cond&) const = default;
};

// Plain mini-C statement. Children: Seq(first, second), If(then, else),
// Loop(body, incr).
struct Stmt {
  enum class Kind { Skip, Assign, Seq, If, Loop, Break, Continue, Return };
  Kind kind = Kind::Skip;
  Loc loc;
  annoc::Assign assign;
  annoc::Cond cond;
  std::optional<Expr> ret;
  std::vector<Stmt> kids;

  static Stmt skip(Loc l = {});
  static Stmt seq(Stmt a, Stmt b);
  static Stmt if_(annoc::Cond c, Stmt t, Stmt e, Loc l = {});
  static Stmt loop(Stmt body, Stmt incr, Loc l = {});
  static Stmt assign_(annoc::Assign a, Loc l = {});
  static Stmt brk(Loc l = {});
  static Stmt cont(Loc l = {});
  static Stmt return_(std::optional<Expr> e, Loc l = {});

  // Structural equality; source locations are ignored.
  bool operator==(const Stmt& o) const;
};

// Annotated (Clight-A) statement. Children: If(then, else), Loop(body, incr),
// Given(scope), Seq(head, rest).
struct AStmt {
  enum class Kind { Skip, Assert, If, Loop, Assign, Break, Continue, Return, Given, Seq };
  Kind kind = Kind::Skip;
  Loc loc;
  annoc::Assign assign;
  annoc::Cond cond;
  std::optional<Expr> ret;
  Assertion assertion;  // Assert payload; loop invariant
  Assertion con_inv;    // loop continue invariant
  std::string text;     // raw annotation text behind `assertion`
  std::string con_text;
  Binder binder;  // Given
  std::vector<AStmt> kids;

  static AStmt skip(Loc l = {});
  static AStmt assert_(Assertion a, Loc l = {});
  static AStmt seq(AStmt head, AStmt rest);
  static AStmt given(Binder b, AStmt scope, Loc l = {});
  static AStmt if_(annoc::Cond c, AStmt t, AStmt e, Loc l = {});
  static AStmt loop(Assertion inv, Assertion con_inv, AStmt body, AStmt incr, Loc l = {});
  static AStmt assign_(annoc::Assign a, Loc l = {});
  static AStmt brk(Loc l = {});
  static AStmt cont(Loc l = {});
  static AStmt return_(std::optional<Expr> e, Loc l = {});

  bool is_complex() const { return kind == Kind::If || kind == Kind::Loop; }

  // Structural equality over statements and parsed assertions; raw text and
  // locations are ignored.
  bool operator==(const AStmt& o) const;
};

struct RecordDecl {
  struct Field {
    std::string name;
    bool is_pointer = false;
    std::string target;  // pointee record when is_pointer
    bool operator==(const Field&) const = default;
  };
  std::string name;
  std::vector<Field> fields;
  bool operator==(const RecordDecl&) const = default;
};

struct FuncSpec {
  std::vector<Binder> with;
  Assertion require;
  Assertion ensure;
  bool operator==(const FuncSpec&) const = default;
};

// The distinguished program variable holding a function's return value.
inline constexpr const char* kRetVar = "ret";

// ---------------------------------------------------------------------------
// Operations

Stmt erase_annotations(const AStmt& c);

// Binders of the enclosing scope (With variables, outer Givens).
bool well_typed(const std::vector<Binder>& scope, const AStmt& c,
                std::string* unbound = nullptr);

using TermMap = std::map<std::string, Term>;

Term subst(const Term& t, const TermMap& m);
PureProp subst(const PureProp& p, const TermMap& m);
Chunk subst(const Chunk& c, const TermMap& m);
// Capture-avoiding: exists binders that clash with the mapping are renamed.
Assertion subst(const Assertion& a, const TermMap& m);
// Substitutes free logical variables throughout an annotated statement,
// renaming Given binders and assertion binders where they would capture.
AStmt subst(const AStmt& c, const TermMap& m);

// Variables in first-occurrence order (locals, pure, spatial).
void collect_vars(const Term& t, std::vector<std::string>& out);
void collect_vars(const PureProp& p, std::vector<std::string>& out);
void collect_vars(const Chunk& c, std::vector<std::string>& out);
std::vector<std::string> free_logical_vars(const Assertion& a);
bool occurs(const std::string& name, const Term& t);

// A name not in `taken`, derived from `base` by appending primes.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// Sort of a term given binder sorts; nullopt if ill-sorted.
std::optional<Sort> sort_of(const Term& t, const std::map<std::string, Sort>& env);

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t);
std::string to_string(const PureProp& p);
std::string to_string(const Chunk& c);
std::string to_string(const Assertion& a);
std::string to_string(const Expr& e);
std::string to_string(const Assign& a);
std::string to_string(const Cond& c);
std::string to_string(Sort s);

// Indented C-like rendering.
std::string pretty(const Stmt& s, int indent = 0);
std::string pretty(const AStmt& s, int indent = 0);

// S-expression rendering used by golden tests.
std::string sexpr(const Assertion& a);
std::string sexpr(const AStmt& s);
std::string sexpr(const Stmt& s);

}  // namespace annoc
