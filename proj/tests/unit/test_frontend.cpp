#include <doctest.h>

#include <algorithm>
#include <functional>

#include "annoc/annot.hpp"
#include "annoc/cparse.hpp"
#include "support.hpp"

using namespace annoc;
using namespace annoc::test;

namespace {

std::string error_kind(const std::string& src) {
  try {
    build_source(src);
  } catch (const FrontendError& e) {
    return e.kind();
  }
  return "";
}

const char* kListDecl = "struct list {unsigned head; struct list *tail;};\n";

Stmt plain_body(const std::string& body) {
  Program p = parse_source(std::string(kListDecl) + "void f(struct list *v, struct list *u) {" + body + "}");
  return strip_comments(p.functions.at(0).body);
}

Stmt assign_stmt(const std::string& target, Expr e) {
  Assign a;
  a.target = target;
  a.value = std::move(e);
  return Stmt::assign_(a);
}

}  // namespace

TEST_CASE("lexer: assignment tokens") {
  auto t = lex("w = NULL;");
  REQUIRE(t.size() == 5);
  CHECK(t[0].kind == Token::Kind::Ident);
  CHECK(t[0].text == "w");
  CHECK(t[1].kind == Token::Kind::Punct);
  CHECK(t[2].kind == Token::Kind::Keyword);
  CHECK(t[2].text == "NULL");
  CHECK(t[3].text == ";");
  CHECK(t[4].kind == Token::Kind::End);
}

TEST_CASE("lexer: annotation comment keeps its payload") {
  auto t = lex("/*@ Assert emp */");
  REQUIRE(t.size() == 2);
  CHECK(t[0].kind == Token::Kind::Comment);
  CHECK(t[0].text == " Assert emp ");
}

TEST_CASE("lexer: locations and plain comments") {
  auto t = lex("a\n  /* plain */ b // tail\n");
  REQUIRE(t.size() == 3);
  CHECK(t[1].text == "b");
  CHECK(t[1].line == 2);
  CHECK(t[1].col == 15);
}

TEST_CASE("lexer: errors") {
  CHECK_THROWS_AS(lex("/*@ never closed"), FrontendError);
  CHECK_THROWS_AS(lex("a $ b"), FrontendError);
}

TEST_CASE("lexer: the figure program carries seven annotation comments") {
  int n = 0;
  for (const auto& t : lex(read_file(corpus_path("reverse_fig1.c")))) n += t.kind == Token::Kind::Comment;
  CHECK(n == 7);
}

TEST_CASE("parser: empty block is Skip") { CHECK(plain_body("") == Stmt::skip()); }

TEST_CASE("parser: attaches comments left and right") {
  Program p = parse_source(std::string(kListDecl) + "void f(struct list *v) { /*@ Inv I */ while (v) { } }");
  const CStmt& b = p.functions[0].body;
  REQUIRE(b.kind == CStmt::Kind::CommentL);
  CHECK(b.text == " Inv I ");
  CHECK(b.kids.at(0).kind == CStmt::Kind::Loop);

  Program q = parse_source(std::string(kListDecl) + "void f(struct list *x, struct list *y) { x = y; /*@ Assert P */ }");
  const CStmt& c = q.functions[0].body;
  CHECK(c.kind == CStmt::Kind::CommentR);
  CHECK(c.text == " Assert P ");
  CHECK(c.kids.at(0).kind == CStmt::Kind::Assign);
}

TEST_CASE("parser: unsupported features are rejected with location") {
  for (const char* body : {"v = v + 1;", "f();", "switch (v) { }", "goto out;", "if (v && u) { }"}) {
    try {
      plain_body(body);
      FAIL("accepted: " << body);
    } catch (const FrontendError& e) {
      CHECK((e.kind() == "UnsupportedFeature" || e.kind() == "ParseError"));
      CHECK(e.loc().line == 2);
    }
  }
}

TEST_CASE("desugar: while loop") {
  Stmt b = plain_body("while (v) { v = u; }");
  Cond truthy{Cond::Kind::Truthy, Expr::var("v"), {}};
  Stmt want = Stmt::loop(Stmt::seq(Stmt::if_(truthy, Stmt::skip(), Stmt::brk()), assign_stmt("v", Expr::var("u"))),
                         Stmt::skip());
  CHECK(b == want);
}

TEST_CASE("desugar: for with empty init and condition") {
  Stmt b = plain_body("for (;; v = u) { u = NULL; }");
  CHECK(b == Stmt::loop(assign_stmt("u", Expr::null()), assign_stmt("v", Expr::var("u"))));
}

TEST_CASE("desugar: for initializer is hoisted before the loop") {
  Stmt b = plain_body("for (v = NULL; v; v = u) { }");
  REQUIRE(b.kind == Stmt::Kind::Seq);
  CHECK(b.kids[0] == assign_stmt("v", Expr::null()));
  CHECK(b.kids[1].kind == Stmt::Kind::Loop);
}

TEST_CASE("desugar: comments vanish under strip") {
  CHECK(strip_comments(CStmt::comment_l("t", {}, CStmt::skip())) == Stmt::skip());
  CStmt br;
  br.kind = CStmt::Kind::Break;
  CHECK(strip_comments(CStmt::comment_r(br, "t", {})) == Stmt::brk());
}

TEST_CASE("desugar: figure body matches the loop form") {
  auto r = build_corpus("reverse.c");
  const Stmt& plain = function_named(r, "reverse").plain;
  // w = NULL; v = p; loop { if (v) skip else break; t = v->tail; v->tail = w; w = v; v = t } ; return w
  REQUIRE(plain.kind == Stmt::Kind::Seq);
  CHECK(plain.kids[0] == assign_stmt("w", Expr::null()));
  const Stmt& loop = plain.kids[1].kids[1].kids[0];
  REQUIRE(loop.kind == Stmt::Kind::Loop);
  CHECK(loop.kids[1] == Stmt::skip());
  CHECK(loop.kids[0].kids[0].kind == Stmt::Kind::If);
  CHECK(plain.kids[1].kids[1].kids[1] == Stmt::return_(Expr::var("w")));
}

TEST_CASE("erase: annotations contribute no statements") {
  CHECK(erase_annotations(AStmt::skip()) == Stmt::skip());
  AStmt g = AStmt::given({"l", Sort::Seq}, AStmt::seq(AStmt::assert_(Assertion{}), AStmt::return_(Expr::var("w"))));
  CHECK(erase_annotations(g) == Stmt::return_(Expr::var("w")));
  auto r = build_corpus("reverse.c");
  const auto& f = function_named(r, "reverse");
  CHECK(erase_annotations(f.body) == f.plain);
}

TEST_CASE("well_typed: binder scope") {
  Assertion a;
  a.pure.push_back(PureProp::eq(Term::var("a"), Term::null()));
  CHECK_FALSE(well_typed({}, AStmt::assert_(a)));
  CHECK(well_typed({{"a", Sort::Val}}, AStmt::assert_(a)));
  auto r = build_corpus("reverse.c");
  const auto& f = function_named(r, "reverse");
  CHECK(well_typed(f.spec.with, f.body));
}

TEST_CASE("subst: plain, capture-avoiding, nested") {
  Chunk c = subst(Chunk::list(Term::var("a"), Term::var("l1")), {{"a", Term::null()}});
  CHECK(c == Chunk::list(Term::null(), Term::var("l1")));

  Assertion e;
  e.exists = {{"c", Sort::Val}};
  e.spatial = {pts(Term::var("b"), Term::var("x"), Term::var("c"))};
  Assertion r = subst(e, {{"b", Term::var("c")}});
  REQUIRE(r.exists.size() == 1);
  CHECK(r.exists[0].name != "c");
  CHECK(r.spatial[0] == pts(Term::var("c"), Term::var("x"), Term::var(r.exists[0].name)));

  PureProp p = PureProp::eq(Term::var("l"), Term::app(Term::rev(Term::var("l1")), Term::var("l2")));
  PureProp q = subst(p, {{"l2", Term::cons(Term::var("x"), Term::var("l2'"))}});
  CHECK(q == PureProp::eq(Term::var("l"), Term::app(Term::rev(Term::var("l1")),
                                                   Term::cons(Term::var("x"), Term::var("l2'")))));
}

TEST_CASE("free variables") {
  Assertion a;
  a.pure = {PureProp::eq(Term::var("a"), Term::null())};
  CHECK(free_logical_vars(a) == std::vector<std::string>{"a"});
  Assertion b;
  b.exists = {{"a", Sort::Val}};
  b.pure = {PureProp::eq(Term::var("a"), Term::var("b"))};
  CHECK(free_logical_vars(b) == std::vector<std::string>{"b"});
  auto r = build_corpus("reverse.c");
  const AStmt* body = &function_named(r, "reverse").body;
  while (body->kind == AStmt::Kind::Seq && body->kids[0].kind != AStmt::Kind::Loop) body = &body->kids[1];
  CHECK(free_logical_vars(body->kids[0].assertion) == std::vector<std::string>{"l"});
}

TEST_CASE("annotation parsing") {
  AnnScope scope;
  scope.binders = {{"l", Sort::Seq}};
  scope.program_vars = {"p", "w", "v", kRetVar};
  Assertion a = parse_assertion("ll(p, l)", scope);
  REQUIRE(a.locals.count("p"));
  REQUIRE(a.locals["p"].is_var());
  std::string v0 = a.locals["p"].name;
  REQUIRE(a.spatial.size() == 1);
  CHECK(a.spatial[0] == Chunk::list(Term::var(v0), Term::var("l")));
  CHECK(std::any_of(a.exists.begin(), a.exists.end(), [&](const Binder& b) { return b.name == v0; }));

  CHECK(parse_assertion("emp", scope).empty());

  Assertion inv = parse_assertion(
      "exists a b l1 l2, w == a && v == b && l == app(rev(l1), l2) && ll(a, l1) * ll(b, l2)", scope);
  Assertion want;
  want.exists = {{"a", Sort::Val}, {"b", Sort::Val}, {"l1", Sort::Seq}, {"l2", Sort::Seq}};
  want.locals = {{"w", Term::var("a")}, {"v", Term::var("b")}};
  want.pure = {PureProp::eq(Term::var("l"), Term::app(Term::rev(Term::var("l1")), Term::var("l2")))};
  want.spatial = {Chunk::list(Term::var("a"), Term::var("l1")), Chunk::list(Term::var("b"), Term::var("l2"))};
  CHECK(inv == want);

  CHECK_THROWS_AS(parse_assertion("ll(a, l", scope), FrontendError);
  CHECK_THROWS_AS(classify_annotation(" Frobnicate x", {}), FrontendError);
}

TEST_CASE("spec extraction") {
  auto r = build_corpus("reverse.c");
  const FuncSpec& s = function_named(r, "reverse").spec;
  CHECK(s.with == std::vector<Binder>{{"l", Sort::Seq}});
  REQUIRE(s.require.spatial.size() == 1);
  CHECK(s.require.spatial[0].kind == Chunk::Kind::ListPred);
  REQUIRE(s.ensure.locals.count(kRetVar));
  CHECK(s.ensure.spatial[0].contents == Term::rev(Term::var("l")));

  auto e = build_source(std::string(kListDecl) + "void f() {\n//@ Require emp\n//@ Ensure emp\n}");
  CHECK(e.functions[0].spec.with.empty());
  CHECK(error_kind(std::string(kListDecl) + "void f() {\n//@ Assert emp\n}") == "SpecError");
  CHECK(error_kind(read_file(corpus_path("bad.c"))) == "SpecError");
}

TEST_CASE("invariants: duplication, pairs and the excluded case") {
  auto r = build_corpus("reverse.c");
  const AStmt* body = &function_named(r, "reverse").body;
  while (body->kind == AStmt::Kind::Seq && body->kids[0].kind != AStmt::Kind::Loop) body = &body->kids[1];
  const AStmt& loop = body->kids[0];
  CHECK(loop.assertion == loop.con_inv);

  std::string two = std::string(kListDecl) +
                    "void f(struct list *v) {\n//@ Require emp\n//@ Ensure emp\n"
                    "//@ Inv exists a, v == a\n//@ Inv exists b, v == b && b == NULL\n"
                    "for (; v; v = NULL) { }\n}";
  auto t = build_source(two);
  const AStmt* l2 = &t.functions[0].body;
  while (l2->kind != AStmt::Kind::Loop) l2 = &l2->kids[l2->kind == AStmt::Kind::Seq ? 0 : 0];
  CHECK(l2->assertion.exists.at(0).name == "a");
  CHECK(l2->con_inv.exists.at(0).name == "b");

  std::string bad = std::string(kListDecl) +
                    "void f(struct list *v) {\n//@ Require emp\n//@ Ensure emp\n"
                    "//@ Inv exists a, v == a\nfor (; v; v = NULL) { if (v) continue; }\n}";
  CHECK(error_kind(bad) == "SingleInvariantUnsupported");
}

TEST_CASE("has_continue skips inner loops") {
  CHECK(has_continue(AStmt::cont()));
  CHECK_FALSE(has_continue(AStmt::loop({}, {}, AStmt::cont(), AStmt::skip())));
  CHECK(has_continue(AStmt::if_({}, AStmt::cont(), AStmt::skip())));
}

TEST_CASE("reassociate to the right") {
  AStmt a = AStmt::brk(), b = AStmt::cont(), c = AStmt::return_(std::nullopt);
  CHECK(reassociate(AStmt::seq(AStmt::seq(a, b), c)) == AStmt::seq(a, AStmt::seq(b, c)));
  CHECK(reassociate(AStmt::seq(a, AStmt::seq(b, c))) == AStmt::seq(a, AStmt::seq(b, c)));
  std::vector<AStmt> xs{AStmt::brk(), AStmt::cont(), AStmt::skip(), AStmt::return_(std::nullopt)};
  AStmt left = AStmt::seq(AStmt::seq(AStmt::seq(xs[0], xs[1]), xs[2]), xs[3]);
  AStmt right = xs[3];
  for (int i = 2; i >= 0; --i) right = AStmt::seq(xs[static_cast<std::size_t>(i)], right);
  CHECK(reassociate(left) == right);
}

TEST_CASE("exit counting") {
  CHECK(count_normal_exit(AStmt::brk()) == 0);
  AStmt guard = AStmt::if_({Cond::Kind::Truthy, Expr::var("v"), {}}, AStmt::skip(), AStmt::brk());
  CHECK(count_normal_exit(guard) == 1);
  CHECK(count_break(guard) == 1);
  CHECK(count_normal_exit(AStmt::loop({}, {}, guard, AStmt::skip())) == 1);
  CHECK(count_normal_exit(AStmt::seq(AStmt::return_(std::nullopt), AStmt::assign_({}))) == 0);
  CHECK(count_break(AStmt::brk()) == 1);
  CHECK(count_break(AStmt::seq(AStmt::brk(), AStmt::brk())) == 1);
  CHECK(count_break(AStmt::loop({}, {}, AStmt::brk(), AStmt::skip())) == 0);
}

TEST_CASE("Given generation after Assert") {
  auto r = build_corpus("reverse.c");
  const AStmt* c = &function_named(r, "reverse").body;
  while (c->kind == AStmt::Kind::Seq && c->kids[0].kind != AStmt::Kind::Loop) c = &c->kids[1];
  const AStmt* b = &c->kids[0].kids[0];
  for (const char* n : {"a", "b", "l1", "l2"}) {
    REQUIRE(b->kind == AStmt::Kind::Given);
    CHECK(b->binder.name == n);
    b = &b->kids[0];
  }
  const AStmt& after = b->kids[1];
  REQUIRE(after.kids[0].kind == AStmt::Kind::Assert);
  const AStmt* g = &after.kids[1];
  for (const char* n : {"c", "x", "l2'"}) {
    REQUIRE(g->kind == AStmt::Kind::Given);
    CHECK(g->binder.name == n);
    g = &g->kids[0];
  }
  CHECK(g->kind == AStmt::Kind::Seq);
}

TEST_CASE("postcondition check") {
  auto r = build_corpus("reverse.c");
  CHECK(check_postconditions(function_named(r, "reverse").body).empty());
  std::string two_exits = std::string(kListDecl) +
                          "void f(struct list *v) {\n//@ Require emp\n//@ Ensure emp\n"
                          "if (v) { v = NULL; } else { v = NULL; }\nv = NULL;\n}";
  CHECK(error_kind(two_exits) == "MissingAssertionAfterComplexStatement");
  std::string at_end = std::string(kListDecl) +
                       "void f(struct list *v) {\n//@ Require emp\n//@ Ensure emp\n"
                       "if (v) { v = NULL; } else { v = NULL; }\n}";
  CHECK(error_kind(at_end).empty());
}

TEST_CASE("builder: straight-line function has no asserts; append gets an unfolding Given") {
  auto r = build_source(std::string(kListDecl) +
                        "struct list *f(struct list *p) {\n//@ Require emp\n//@ Ensure emp\np = NULL; return p;\n}");
  std::function<int(const AStmt&)> asserts = [&](const AStmt& c) {
    int n = c.kind == AStmt::Kind::Assert;
    for (const auto& k : c.kids) n += asserts(k);
    return n;
  };
  CHECK(asserts(r.functions[0].body) == 0);

  auto ap = build_corpus("append.c");
  std::function<bool(const AStmt&, const std::string&)> has_given = [&](const AStmt& c, const std::string& n) {
    if (c.kind == AStmt::Kind::Given && c.binder.name == n) return true;
    for (const auto& k : c.kids)
      if (has_given(k, n)) return true;
    return false;
  };
  CHECK(has_given(function_named(ap, "append").body, "a"));
}
