#include <set>

#include "annoc/cparse.hpp"
#include "annoc/error.hpp"

namespace annoc {

namespace {

using TK = Token::Kind;
using SK = SStmt::Kind;

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : t_(toks) {
    if (t_.empty() || t_.back().kind != TK::End) throw FrontendError("ParseError", {}, "token stream lacks end marker");
  }

  Program program() {
    Program p;
    std::set<std::string> names;
    while (peek().kind != TK::End) {
      if (peek().kind == TK::Comment) fail_at(peek(), "annotation outside a function body");
      if (is_kw("struct") && peek(1).kind == TK::Ident && is_punct("{", 2)) {
        Loc l = peek().loc();
        RecordDecl r = record();
        if (!names.insert("struct " + r.name).second)
          throw FrontendError("ParseError", l, "duplicate record " + r.name);
        p.records.push_back(std::move(r));
        continue;
      }
      FunctionDef f = function();
      if (!names.insert(f.name).second) throw FrontendError("ParseError", f.loc, "duplicate function " + f.name);
      p.functions.push_back(std::move(f));
    }
    return p;
  }

 private:
  const std::vector<Token>& t_;
  std::size_t i_ = 0;
  std::vector<std::string>* locals_ = nullptr;

  const Token& peek(std::size_t k = 0) const {
    std::size_t j = i_ + k;
    return j < t_.size() ? t_[j] : t_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (i_ + 1 < t_.size()) ++i_;
    return t;
  }
  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == TK::Punct && peek(k).text == p;
  }
  bool is_kw(const char* w, std::size_t k = 0) const {
    return peek(k).kind == TK::Keyword && peek(k).text == w;
  }

  [[noreturn]] void fail_at(const Token& t, const std::string& msg) {
    throw FrontendError("ParseError", t.loc(), msg);
  }
  [[noreturn]] void expected(std::initializer_list<const char*> what) {
    std::string s = "expected ";
    bool first = true;
    for (const char* w : what) {
      if (!first) s += ", ";
      s += w;
      first = false;
    }
    const Token& t = peek();
    s += t.kind == TK::End ? " but found end of input" : " but found '" + t.text + "'";
    fail_at(t, s);
  }
  [[noreturn]] void unsupported(const Token& t, const std::string& feature) {
    throw FrontendError("UnsupportedFeature", t.loc(), feature);
  }

  void expect_punct(const char* p) {
    if (!is_punct(p)) expected({p});
    next();
  }
  std::string ident() {
    if (peek().kind != TK::Ident) expected({"identifier"});
    return next().text;
  }

  bool at_type() const {
    static const std::set<std::string> base = {"struct", "int",    "long", "char",  "void",
                                               "unsigned", "signed", "short", "const"};
    return peek().kind == TK::Keyword && base.count(peek().text);
  }

  // Returns the record name for `struct X`, empty otherwise.
  std::string type_spec() {
    if (!at_type()) expected({"type"});
    while (is_kw("const")) next();
    if (is_kw("struct")) {
      next();
      return ident();
    }
    bool any = false;
    while (is_kw("int") || is_kw("long") || is_kw("char") || is_kw("void") || is_kw("unsigned") ||
           is_kw("signed") || is_kw("short") || is_kw("const")) {
      next();
      any = true;
    }
    if (!any) expected({"type"});
    return "";
  }

  int stars() {
    int n = 0;
    while (is_punct("*")) {
      next();
      ++n;
    }
    return n;
  }

  RecordDecl record() {
    next();  // struct
    RecordDecl r;
    r.name = ident();
    expect_punct("{");
    while (!is_punct("}")) {
      if (peek().kind == TK::Comment) fail_at(peek(), "annotation inside a record declaration");
      std::string target = type_spec();
      for (;;) {
        int s = stars();
        RecordDecl::Field f;
        f.name = ident();
        if (is_punct("[")) unsupported(peek(), "array");
        f.is_pointer = s > 0 && !target.empty();
        if (f.is_pointer) f.target = target;
        for (const auto& g : r.fields)
          if (g.name == f.name) fail_at(peek(), "duplicate field " + f.name);
        r.fields.push_back(f);
        if (!is_punct(",")) break;
        next();
      }
      expect_punct(";");
    }
    next();
    expect_punct(";");
    return r;
  }

  FunctionDef function() {
    FunctionDef f;
    type_spec();
    stars();
    f.loc = peek().loc();
    f.name = ident();
    expect_punct("(");
    if (is_kw("void") && is_punct(")", 1)) next();
    while (!is_punct(")")) {
      type_spec();
      stars();
      f.params.push_back(ident());
      if (is_punct("[")) unsupported(peek(), "array");
      if (!is_punct(",")) break;
      next();
    }
    expect_punct(")");
    if (!is_punct("{")) expected({"{"});
    locals_ = &f.locals;
    f.surface = compound();
    locals_ = nullptr;
    return f;
  }

  std::string take_comment(Loc& where) {
    const Token& t = next();
    where = t.loc();
    return t.text;
  }

  SStmt compound() {
    SStmt b;
    b.kind = SK::Block;
    b.loc = peek().loc();
    expect_punct("{");
    std::vector<std::pair<std::string, Loc>> leading;
    while (peek().kind == TK::Comment) {
      Loc l;
      std::string s = take_comment(l);
      leading.emplace_back(std::move(s), l);
    }
    while (!is_punct("}")) {
      if (peek().kind == TK::End) expected({"}"});
      SStmt item = block_item();
      while (peek().kind == TK::Comment) {
        SStmt w;
        w.kind = SK::CommentR;
        w.loc = item.loc;
        w.text_loc = peek().loc();
        w.text = next().text;
        w.kids.push_back(std::move(item));
        item = std::move(w);
      }
      b.kids.push_back(std::move(item));
    }
    next();
    if (!leading.empty()) {
      SStmt carrier;
      if (b.kids.empty()) {
        carrier.kind = SK::Empty;
        carrier.loc = leading.back().second;
      } else {
        carrier = std::move(b.kids.front());
      }
      for (auto it = leading.rbegin(); it != leading.rend(); ++it) {
        SStmt w;
        w.kind = SK::CommentL;
        w.loc = it->second;
        w.text = it->first;
        w.text_loc = it->second;
        w.kids.push_back(std::move(carrier));
        carrier = std::move(w);
      }
      if (b.kids.empty())
        b.kids.push_back(std::move(carrier));
      else
        b.kids.front() = std::move(carrier);
    }
    return b;
  }

  SStmt block_item() {
    if (at_type()) return declaration();
    return statement();
  }

  SStmt declaration() {
    SStmt d;
    d.kind = SK::Decl;
    d.loc = peek().loc();
    type_spec();
    for (;;) {
      stars();
      std::string n = ident();
      if (is_punct("[")) unsupported(peek(), "array");
      std::optional<Expr> init;
      if (is_punct("=")) {
        next();
        init = rvalue_atom();
      }
      if (locals_) locals_->push_back(n);
      d.decls.emplace_back(std::move(n), std::move(init));
      if (!is_punct(",")) break;
      next();
    }
    expect_punct(";");
    return d;
  }

  void reject_operator_after_operand() {
    const Token& t = peek();
    if (t.kind != TK::Punct) return;
    static const std::set<std::string> arith = {"+", "-", "*", "/", "%", "<<", ">>", "&", "|", "^",
                                                "<", ">", "<=", ">="};
    if (arith.count(t.text)) unsupported(t, "arithmetic or relational operator '" + t.text + "'");
    if (t.text == "(") unsupported(t, "function call");
    if (t.text == "[") unsupported(t, "array");
    if (t.text == "++" || t.text == "--" || t.text == "+=" || t.text == "-=" || t.text == "*=" ||
        t.text == "/=")
      unsupported(t, "compound assignment '" + t.text + "'");
    if (t.text == "&&" || t.text == "||") unsupported(t, "compound condition '" + t.text + "'");
  }

  Expr atom() {
    const Token& t = peek();
    if (t.kind == TK::Ident) {
      next();
      return Expr::var(t.text);
    }
    if (t.kind == TK::Int) {
      next();
      try {
        return Expr::integer(std::stoll(t.text));
      } catch (const std::exception&) {
        fail_at(t, "integer literal out of range");
      }
    }
    if (t.kind == TK::Keyword && t.text == "NULL") {
      next();
      return Expr::null();
    }
    if (t.kind == TK::Keyword && t.text == "sizeof") unsupported(t, "sizeof");
    if (t.kind == TK::Punct && t.text == "(" && peek(1).kind == TK::Keyword) unsupported(t, "cast");
    if (t.kind == TK::Punct && (t.text == "&" || t.text == "*")) unsupported(t, "address or dereference operator");
    if (t.kind == TK::Punct && t.text == "-") unsupported(t, "arithmetic or relational operator '-'");
    expected({"identifier", "integer", "NULL"});
  }

  Expr rvalue_atom() {
    Expr e = atom();
    if (is_punct("->")) unsupported(peek(), "field read in an initializer or expression");
    reject_operator_after_operand();
    return e;
  }

  Cond condition() {
    Cond c;
    if (is_punct("!")) {
      next();
      c.kind = Cond::Kind::Eq;
      c.lhs = atom();
      c.rhs = Expr::null();
    } else {
      c.lhs = atom();
      if (is_punct("->")) unsupported(peek(), "field read in a condition");
      if (is_punct("==") || is_punct("!=")) {
        c.kind = next().text == "==" ? Cond::Kind::Eq : Cond::Kind::Ne;
        c.rhs = atom();
        if (is_punct("->")) unsupported(peek(), "field read in a condition");
      }
    }
    reject_operator_after_operand();
    if (is_punct("=")) fail_at(peek(), "assignment in a condition");
    return c;
  }

  // lvalue '=' rvalue
  annoc::Assign assignment() {
    annoc::Assign a;
    const Token& start = peek();
    if (start.kind != TK::Ident) {
      if (start.kind == TK::Punct && start.text == "*") unsupported(start, "address or dereference operator");
      expected({"statement"});
    }
    std::string lhs = next().text;
    if (is_punct("(")) unsupported(peek(), "function call");
    if (is_punct("[")) unsupported(peek(), "array");
    if (is_punct(".")) unsupported(peek(), "struct value field access");
    if (is_punct("->")) {
      next();
      a.form = annoc::Assign::Form::Store;
      a.base = Expr::var(lhs);
      a.field = ident();
      if (is_punct("->")) unsupported(peek(), "nested field access");
      if (!is_punct("=")) {
        reject_operator_after_operand();
        expected({"="});
      }
      next();
      a.value = atom();
      if (is_punct("->")) unsupported(peek(), "field read on both sides of a store");
      reject_operator_after_operand();
      return a;
    }
    if (!is_punct("=")) {
      reject_operator_after_operand();
      expected({"="});
    }
    next();
    a.target = lhs;
    Expr r = atom();
    if (is_punct("->")) {
      next();
      if (r.kind != Expr::Kind::Var) fail_at(peek(), "field read from a non-variable");
      a.form = annoc::Assign::Form::Load;
      a.base = r;
      a.field = ident();
      if (is_punct("->")) unsupported(peek(), "nested field access");
    } else {
      a.form = annoc::Assign::Form::Copy;
      a.value = r;
    }
    reject_operator_after_operand();
    return a;
  }

  SStmt statement() {
    const Token& t = peek();
    SStmt s;
    s.loc = t.loc();
    if (t.kind == TK::Comment) fail_at(t, "annotation outside a compound statement");
    if (is_punct("{")) return compound();
    if (is_punct(";")) {
      next();
      s.kind = SK::Empty;
      return s;
    }
    if (t.kind == TK::Keyword) {
      const std::string& w = t.text;
      if (w == "switch" || w == "goto" || w == "case" || w == "default" || w == "typedef")
        unsupported(t, w);
      if (w == "if") {
        next();
        s.kind = SK::If;
        expect_punct("(");
        s.cond = condition();
        expect_punct(")");
        s.kids.push_back(statement());
        if (is_kw("else")) {
          next();
          s.kids.push_back(statement());
        }
        return s;
      }
      if (w == "while") {
        next();
        s.kind = SK::While;
        expect_punct("(");
        s.cond = condition();
        expect_punct(")");
        s.kids.push_back(statement());
        return s;
      }
      if (w == "do") {
        next();
        s.kind = SK::DoWhile;
        s.kids.push_back(statement());
        if (!is_kw("while")) expected({"while"});
        next();
        expect_punct("(");
        s.cond = condition();
        expect_punct(")");
        expect_punct(";");
        return s;
      }
      if (w == "for") {
        next();
        s.kind = SK::For;
        expect_punct("(");
        if (at_type()) {
          SStmt d = declaration();  // consumes ';'
          if (d.decls.size() != 1 || !d.decls[0].second)
            fail_at(t, "for-initializer must declare one initialized variable");
          s.for_init = annoc::Assign{annoc::Assign::Form::Copy, d.decls[0].first, {}, {}, *d.decls[0].second};
        } else {
          if (!is_punct(";")) s.for_init = assignment();
          expect_punct(";");
        }
        if (!is_punct(";")) s.for_cond = condition();
        expect_punct(";");
        if (!is_punct(")")) s.for_step = assignment();
        expect_punct(")");
        s.kids.push_back(statement());
        return s;
      }
      if (w == "break" || w == "continue") {
        next();
        s.kind = w == "break" ? SK::Break : SK::Continue;
        expect_punct(";");
        return s;
      }
      if (w == "return") {
        next();
        s.kind = SK::Return;
        if (!is_punct(";")) s.ret = rvalue_atom();
        expect_punct(";");
        return s;
      }
      if (w == "else") fail_at(t, "'else' without 'if'");
    }
    s.kind = SK::Assign;
    s.assign = assignment();
    expect_punct(";");
    return s;
  }
};

}  // namespace

Program parse_program(const std::vector<Token>& tokens) { return Parser(tokens).program(); }

const RecordDecl* Program::find_record(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

Program parse_source(std::string_view source) { return desugar(parse_program(lex(source))); }

}  // namespace annoc
