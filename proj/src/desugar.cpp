#include <variant>

#include "annoc/cparse.hpp"
#include "annoc/error.hpp"

namespace annoc {

CStmt CStmt::skip(Loc l) {
  CStmt s;
  s.loc = l;
  return s;
}

CStmt CStmt::seq(CStmt a, CStmt b) {
  CStmt s;
  s.kind = Kind::Seq;
  s.loc = a.loc;
  s.kids.push_back(std::move(a));
  s.kids.push_back(std::move(b));
  return s;
}

CStmt CStmt::comment_l(std::string text, Loc tl, CStmt inner) {
  CStmt s;
  s.kind = Kind::CommentL;
  s.loc = tl;
  s.text = std::move(text);
  s.text_loc = tl;
  s.kids.push_back(std::move(inner));
  return s;
}

CStmt CStmt::comment_r(CStmt inner, std::string text, Loc tl) {
  CStmt s;
  s.kind = Kind::CommentR;
  s.loc = inner.loc;
  s.text = std::move(text);
  s.text_loc = tl;
  s.kids.push_back(std::move(inner));
  return s;
}

bool CStmt::operator==(const CStmt& o) const {
  return kind == o.kind && assign == o.assign && cond == o.cond && ret == o.ret && text == o.text &&
         kids == o.kids;
}

namespace {

using SK = SStmt::Kind;
using CK = CStmt::Kind;

struct Comment {
  std::string text;
  Loc loc;
};
using Element = std::variant<CStmt, Comment>;

CStmt lower(const SStmt& s);
CStmt lower_for_core(const SStmt& s);

CStmt mk(CK k, Loc l) {
  CStmt c;
  c.kind = k;
  c.loc = l;
  return c;
}

CStmt mk_assign(const Assign& a, Loc l, bool for_init = false) {
  CStmt c = mk(CK::Assign, l);
  c.assign = a;
  c.for_init = for_init;
  return c;
}

CStmt mk_if(const Cond& cond, CStmt t, CStmt e, Loc l) {
  CStmt c = mk(CK::If, l);
  c.cond = cond;
  c.kids.push_back(std::move(t));
  c.kids.push_back(std::move(e));
  return c;
}

CStmt mk_loop(CStmt body, CStmt incr, Loc l) {
  CStmt c = mk(CK::Loop, l);
  c.kids.push_back(std::move(body));
  c.kids.push_back(std::move(incr));
  return c;
}

CStmt guard(const Cond& c, Loc l) { return mk_if(c, CStmt::skip(l), mk(CK::Break, l), l); }

// Continue statements that target the enclosing loop (not nested loops).
bool has_own_continue(const SStmt& s) {
  switch (s.kind) {
    case SK::Continue:
      return true;
    case SK::While:
    case SK::DoWhile:
    case SK::For:
      return false;
    default:
      for (const auto& k : s.kids)
        if (has_own_continue(k)) return true;
      return false;
  }
}

void push_lowered(const SStmt& core, std::vector<Element>& out) {
  switch (core.kind) {
    case SK::Empty:
      return;
    case SK::Decl:
      for (const auto& [name, init] : core.decls)
        if (init) out.emplace_back(mk_assign(Assign{Assign::Form::Copy, name, {}, {}, *init}, core.loc));
      return;
    case SK::For:
      if (core.for_init) out.emplace_back(mk_assign(*core.for_init, core.loc, true));
      out.emplace_back(lower_for_core(core));
      return;
    default:
      out.emplace_back(lower(core));
  }
}

void push_item(const SStmt& item, std::vector<Element>& out) {
  if (item.kind == SK::CommentL) {
    out.emplace_back(Comment{item.text, item.text_loc});
    push_item(item.kids[0], out);
    return;
  }
  if (item.kind == SK::CommentR) {
    push_item(item.kids[0], out);
    out.emplace_back(Comment{item.text, item.text_loc});
    return;
  }
  push_lowered(item, out);
}

CStmt rebuild(std::vector<Element> els, Loc block_loc) {
  std::vector<CStmt> stmts;
  std::vector<Comment> leading;
  for (auto& e : els) {
    if (auto* c = std::get_if<Comment>(&e)) {
      if (stmts.empty())
        leading.push_back(std::move(*c));
      else
        stmts.back() = CStmt::comment_r(std::move(stmts.back()), std::move(c->text), c->loc);
    } else {
      stmts.push_back(std::move(std::get<CStmt>(e)));
    }
  }
  if (stmts.empty()) stmts.push_back(CStmt::skip(block_loc));
  for (auto it = leading.rbegin(); it != leading.rend(); ++it)
    stmts.front() = CStmt::comment_l(std::move(it->text), it->loc, std::move(stmts.front()));
  CStmt acc = std::move(stmts.back());
  for (std::size_t i = stmts.size() - 1; i-- > 0;) acc = CStmt::seq(std::move(stmts[i]), std::move(acc));
  return acc;
}

CStmt lower(const SStmt& s) {
  switch (s.kind) {
    case SK::Block: {
      std::vector<Element> els;
      for (const auto& item : s.kids) push_item(item, els);
      return rebuild(std::move(els), s.loc);
    }
    case SK::Decl:
    case SK::CommentL:
    case SK::CommentR:
    case SK::Empty:
    case SK::For: {
      std::vector<Element> els;
      push_item(s, els);
      return rebuild(std::move(els), s.loc);
    }
    case SK::Assign:
      return mk_assign(s.assign, s.loc);
    case SK::If:
      return mk_if(s.cond, lower(s.kids[0]), s.kids.size() > 1 ? lower(s.kids[1]) : CStmt::skip(s.loc), s.loc);
    case SK::While:
      return mk_loop(CStmt::seq(guard(s.cond, s.loc), lower(s.kids[0])), CStmt::skip(s.loc), s.loc);
    case SK::DoWhile: {
      CStmt body = lower(s.kids[0]);
      // With a `continue` in the body the test must live in the increment
      // slot, or `continue` would skip it.
      if (has_own_continue(s.kids[0])) return mk_loop(std::move(body), guard(s.cond, s.loc), s.loc);
      return mk_loop(CStmt::seq(std::move(body), guard(s.cond, s.loc)), CStmt::skip(s.loc), s.loc);
    }
    case SK::Break:
      return mk(CK::Break, s.loc);
    case SK::Continue:
      return mk(CK::Continue, s.loc);
    case SK::Return: {
      CStmt c = mk(CK::Return, s.loc);
      c.ret = s.ret;
      return c;
    }
  }
  return CStmt::skip(s.loc);
}

// A for-statement with its initializer already hoisted.
CStmt lower_for_core(const SStmt& s) {
  CStmt body = lower(s.kids[0]);
  CStmt incr = s.for_step ? mk_assign(*s.for_step, s.loc) : CStmt::skip(s.loc);
  if (s.for_cond) body = CStmt::seq(guard(*s.for_cond, s.loc), std::move(body));
  return mk_loop(std::move(body), std::move(incr), s.loc);
}

}  // namespace

Program desugar(Program p) {
  for (auto& f : p.functions) f.body = lower(f.surface);
  return p;
}

Stmt strip_comments(const CStmt& c) {
  switch (c.kind) {
    case CK::Skip:
      return Stmt::skip(c.loc);
    case CK::Assign:
      return Stmt::assign_(c.assign, c.loc);
    case CK::Seq:
      return Stmt::seq(strip_comments(c.kids[0]), strip_comments(c.kids[1]));
    case CK::If:
      return Stmt::if_(c.cond, strip_comments(c.kids[0]), strip_comments(c.kids[1]), c.loc);
    case CK::Loop:
      return Stmt::loop(strip_comments(c.kids[0]), strip_comments(c.kids[1]), c.loc);
    case CK::Break:
      return Stmt::brk(c.loc);
    case CK::Continue:
      return Stmt::cont(c.loc);
    case CK::Return:
      return Stmt::return_(c.ret, c.loc);
    case CK::CommentL:
    case CK::CommentR:
      return strip_comments(c.kids[0]);
  }
  return Stmt::skip(c.loc);
}

}  // namespace annoc
