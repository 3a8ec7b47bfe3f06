#pragma once

// Clight-with-comment to Clight-A: annotation parsing, specs, invariants,
// Given generation and the postcondition check.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "annoc/ast.hpp"
#include "annoc/cparse.hpp"
#include "annoc/error.hpp"

namespace annoc {

struct RawAnnotation {
  enum class Kind { With, Require, Ensure, Inv, Assert };
  Kind kind = Kind::Assert;
  std::string text;                   // payload after the keyword
  std::vector<std::string> binders;  // With
  Loc loc;
};

const char* annotation_kind_name(RawAnnotation::Kind k);

// Throws FrontendError("AnnParseError") on an unknown keyword.
RawAnnotation classify_annotation(const std::string& payload, Loc loc);

struct AnnScope {
  std::vector<Binder> binders;             // ambient logical variables
  std::set<std::string> open;              // ambient names whose sort is still unknown
  std::set<std::string> program_vars;      // includes kRetVar
  const std::vector<RecordDecl>* records = nullptr;
};

// Throws FrontendError("AnnParseError" / "SortError").
Assertion parse_assertion(std::string_view text, const AnnScope& scope, Loc loc = {});

// Sorts the text forces on the names in scope.open.
std::map<std::string, Sort> forced_sorts(std::string_view text, const AnnScope& scope, Loc loc = {});

// Throws FrontendError("SpecError").
std::pair<std::vector<RawAnnotation>, CStmt> extract_funcspec_raw(const CStmt& body);

bool has_continue(const CStmt& c);
bool has_continue(const AStmt& c);

// Seq(Seq(a,b),c) -> Seq(a, Seq(b,c)) over an annotated statement.
AStmt reassociate(const AStmt& c);

int count_normal_exit(const AStmt& c);
int count_break(const AStmt& c);

std::vector<Diagnostic> check_postconditions(const AStmt& c);

// The record used by ll/lseg: first record with a value field and a
// pointer-to-self field.
struct ListShape {
  std::string record;
  std::string value_field;
  std::string next_field;
};
std::optional<ListShape> list_shape(const std::vector<RecordDecl>& records);

struct BuiltFunction {
  std::string name;
  Loc loc;
  std::vector<std::string> params;
  std::vector<std::string> program_vars;  // params, locals, ret
  FuncSpec spec;
  AStmt body;
  Stmt plain;
};

struct BuildResult {
  std::vector<BuiltFunction> functions;
  std::vector<RecordDecl> records;
};

// Throws FrontendError aggregating every function's diagnostics.
BuildResult build(const Program& program);

// lex + parse + desugar + build.
BuildResult build_source(std::string_view source);

}  // namespace annoc
