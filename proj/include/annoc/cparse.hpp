#pragma once

// Lexer, parser and desugaring for annotated mini-C. Annotation comments
// (`/*@ ... */`, `//@ ...`) survive every stage as comment wrappers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annoc/ast.hpp"

namespace annoc {

struct Token {
  enum class Kind { Ident, Int, Punct, Keyword, Comment, End };
  Kind kind = Kind::End;
  std::string text;  // for Comment: the payload between the marker and terminator
  int line = 0;
  int col = 0;

  Loc loc() const { return {line, col}; }
};

// Throws FrontendError("LexError") on unterminated comments and illegal characters.
std::vector<Token> lex(std::string_view source);

// Surface statement, as written. Comments are attached with CommentL/CommentR.
struct SStmt {
  enum class Kind {
    Block, Decl, Assign, If, While, DoWhile, For, Break, Continue, Return, Empty,
    CommentL, CommentR
  };
  Kind kind = Kind::Empty;
  Loc loc;
  annoc::Assign assign;
  annoc::Cond cond;
  std::optional<Expr> ret;
  std::vector<std::pair<std::string, std::optional<Expr>>> decls;
  std::optional<annoc::Assign> for_init;
  std::optional<annoc::Cond> for_cond;
  std::optional<annoc::Assign> for_step;
  std::string text;  // comment payload
  Loc text_loc;
  // Block: items. If: then [, else]. Loops: body. CommentL/CommentR: [stmt].
  std::vector<SStmt> kids;
};

// Clight with comments.
struct CStmt {
  enum class Kind { Skip, Assign, Seq, If, Loop, Break, Continue, Return, CommentL, CommentR };
  Kind kind = Kind::Skip;
  Loc loc;
  annoc::Assign assign;
  annoc::Cond cond;
  std::optional<Expr> ret;
  std::string text;  // comment payload
  Loc text_loc;
  bool for_init = false;  // assignment hoisted out of a for-header
  // Invariant payloads consumed by the annotation builder (loops only).
  std::vector<std::pair<std::string, Loc>> invariants;
  // Seq(a, b), If(then, else), Loop(body, incr), CommentL/CommentR: [stmt].
  std::vector<CStmt> kids;

  static CStmt skip(Loc l = {});
  static CStmt seq(CStmt a, CStmt b);
  static CStmt comment_l(std::string text, Loc tl, CStmt s);
  static CStmt comment_r(CStmt s, std::string text, Loc tl);

  // Structural equality; locations ignored.
  bool operator==(const CStmt& o) const;
};

struct FunctionDef {
  std::string name;
  Loc loc;
  std::vector<std::string> params;
  std::vector<std::string> locals;  // declared local variables, in order
  SStmt surface;                    // compound statement as parsed
  CStmt body;                       // filled by desugar
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<FunctionDef> functions;

  const RecordDecl* find_record(const std::string& name) const;
};

// Throws FrontendError("ParseError" / "UnsupportedFeature").
Program parse_program(const std::vector<Token>& tokens);

// Lowers while/for/do-while to the general loop; hoists declarations.
Program desugar(Program p);

Stmt strip_comments(const CStmt& c);

// Convenience: lex + parse + desugar.
Program parse_source(std::string_view source);

}  // namespace annoc
