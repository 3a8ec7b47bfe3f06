#include <sstream>

#include "annoc/ast.hpp"

namespace annoc {

std::string to_string(Sort s) { return sort_name(s); }

std::string to_string(const Term& t) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::Var:
      return t.name;
    case K::Null:
      return "NULL";
    case K::Int:
      return std::to_string(t.value);
    case K::Nil:
      return "nil";
    case K::Cons:
      return "cons(" + to_string(t.args[0]) + ", " + to_string(t.args[1]) + ")";
    case K::App:
      return "app(" + to_string(t.args[0]) + ", " + to_string(t.args[1]) + ")";
    case K::Rev:
      return "rev(" + to_string(t.args[0]) + ")";
  }
  return "?";
}

std::string to_string(const PureProp& p) {
  return to_string(p.lhs) + (p.op == PureProp::Op::Eq ? " = " : " ≠ ") + to_string(p.rhs);
}

std::string to_string(const Chunk& c) {
  switch (c.kind) {
    case Chunk::Kind::PointsTo: {
      std::string s = to_string(c.addr) + " ↦ (";
      for (std::size_t i = 0; i < c.fields.size(); ++i) {
        if (i) s += ", ";
        s += to_string(c.fields[i].second);
      }
      return s + ")";
    }
    case Chunk::Kind::ListPred:
      return "ll(" + to_string(c.addr) + ", " + to_string(c.contents) + ")";
    case Chunk::Kind::ListSeg:
      return "lseg(" + to_string(c.addr) + ", " + to_string(c.end) + ", " +
             to_string(c.contents) + ")";
  }
  return "?";
}

std::string to_string(const Assertion& a) {
  std::string prefix;
  if (!a.exists.empty()) {
    prefix = "∃";
    for (std::size_t i = 0; i < a.exists.size(); ++i) {
      if (i) prefix += " ";
      prefix += a.exists[i].name;
    }
    prefix += ". ";
  }
  std::vector<std::string> conj;
  for (const auto& p : a.pure) conj.push_back(to_string(p));
  for (const auto& [x, t] : a.locals) conj.push_back("⟦" + x + "⟧ = " + to_string(t));
  std::string heap;
  for (std::size_t i = 0; i < a.spatial.size(); ++i) {
    if (i) heap += " * ";
    heap += to_string(a.spatial[i]);
  }
  if (!heap.empty() || conj.empty()) conj.push_back(heap.empty() ? "emp" : heap);
  std::string body;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    if (i) body += " ∧ ";
    body += conj[i];
  }
  return prefix + body;
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Null:
      return "NULL";
    case Expr::Kind::Int:
      return std::to_string(e.value);
  }
  return "?";
}

std::string to_string(const Assign& a) {
  switch (a.form) {
    case Assign::Form::Copy:
      return a.target + " = " + to_string(a.value);
    case Assign::Form::Load:
      return a.target + " = " + to_string(a.base) + "->" + a.field;
    case Assign::Form::Store:
      return to_string(a.base) + "->" + a.field + " = " + to_string(a.value);
  }
  return "?";
}

std::string to_string(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::Truthy:
      return to_string(c.lhs);
    case Cond::Kind::Eq:
      return to_string(c.lhs) + " == " + to_string(c.rhs);
    case Cond::Kind::Ne:
      return to_string(c.lhs) + " != " + to_string(c.rhs);
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

std::string pad(int n) { return std::string(static_cast<std::size_t>(n) * 2, ' '); }

void pretty_into(std::ostringstream& os, const Stmt& s, int ind) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Skip:
      os << pad(ind) << "skip;\n";
      break;
    case K::Assign:
      os << pad(ind) << to_string(s.assign) << ";\n";
      break;
    case K::Seq:
      pretty_into(os, s.kids[0], ind);
      pretty_into(os, s.kids[1], ind);
      break;
    case K::If:
      os << pad(ind) << "if (" << to_string(s.cond) << ") {\n";
      pretty_into(os, s.kids[0], ind + 1);
      os << pad(ind) << "} else {\n";
      pretty_into(os, s.kids[1], ind + 1);
      os << pad(ind) << "}\n";
      break;
    case K::Loop:
      os << pad(ind) << "loop {\n";
      pretty_into(os, s.kids[0], ind + 1);
      os << pad(ind) << "} next {\n";
      pretty_into(os, s.kids[1], ind + 1);
      os << pad(ind) << "}\n";
      break;
    case K::Break:
      os << pad(ind) << "break;\n";
      break;
    case K::Continue:
      os << pad(ind) << "continue;\n";
      break;
    case K::Return:
      os << pad(ind) << "return" << (s.ret ? " " + to_string(*s.ret) : "") << ";\n";
      break;
  }
}

void pretty_into(std::ostringstream& os, const AStmt& s, int ind) {
  using K = AStmt::Kind;
  switch (s.kind) {
    case K::Skip:
      os << pad(ind) << "skip;\n";
      break;
    case K::Assert:
      os << pad(ind) << "//@ Assert " << to_string(s.assertion) << "\n";
      break;
    case K::Given:
      os << pad(ind) << "//@ Given " << s.binder.name << ":" << sort_name(s.binder.sort) << "\n";
      pretty_into(os, s.kids[0], ind);
      break;
    case K::Assign:
      os << pad(ind) << to_string(s.assign) << ";\n";
      break;
    case K::Seq:
      pretty_into(os, s.kids[0], ind);
      pretty_into(os, s.kids[1], ind);
      break;
    case K::If:
      os << pad(ind) << "if (" << to_string(s.cond) << ") {\n";
      pretty_into(os, s.kids[0], ind + 1);
      os << pad(ind) << "} else {\n";
      pretty_into(os, s.kids[1], ind + 1);
      os << pad(ind) << "}\n";
      break;
    case K::Loop:
      os << pad(ind) << "//@ Inv " << to_string(s.assertion) << "\n";
      os << pad(ind) << "//@ Inv " << to_string(s.con_inv) << "\n";
      os << pad(ind) << "loop {\n";
      pretty_into(os, s.kids[0], ind + 1);
      os << pad(ind) << "} next {\n";
      pretty_into(os, s.kids[1], ind + 1);
      os << pad(ind) << "}\n";
      break;
    case K::Break:
      os << pad(ind) << "break;\n";
      break;
    case K::Continue:
      os << pad(ind) << "continue;\n";
      break;
    case K::Return:
      os << pad(ind) << "return" << (s.ret ? " " + to_string(*s.ret) : "") << ";\n";
      break;
  }
}

std::string sx(const Term& t) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::Var:
      return t.name;
    case K::Null:
      return "NULL";
    case K::Int:
      return std::to_string(t.value);
    case K::Nil:
      return "nil";
    case K::Cons:
      return "(cons " + sx(t.args[0]) + " " + sx(t.args[1]) + ")";
    case K::App:
      return "(app " + sx(t.args[0]) + " " + sx(t.args[1]) + ")";
    case K::Rev:
      return "(rev " + sx(t.args[0]) + ")";
  }
  return "?";
}

std::string sx(const Chunk& c) {
  switch (c.kind) {
    case Chunk::Kind::PointsTo: {
      std::string s = "(pt " + sx(c.addr) + " " + c.record;
      for (const auto& [f, v] : c.fields) s += " (" + f + " " + sx(v) + ")";
      return s + ")";
    }
    case Chunk::Kind::ListPred:
      return "(ll " + sx(c.addr) + " " + sx(c.contents) + ")";
    case Chunk::Kind::ListSeg:
      return "(lseg " + sx(c.addr) + " " + sx(c.end) + " " + sx(c.contents) + ")";
  }
  return "?";
}

std::string sx(const Expr& e) { return to_string(e); }

std::string sx(const Assign& a) {
  switch (a.form) {
    case Assign::Form::Copy:
      return "(set " + a.target + " " + sx(a.value) + ")";
    case Assign::Form::Load:
      return "(load " + a.target + " " + sx(a.base) + " " + a.field + ")";
    case Assign::Form::Store:
      return "(store " + sx(a.base) + " " + a.field + " " + sx(a.value) + ")";
  }
  return "?";
}

std::string sx(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::Truthy:
      return "(truthy " + sx(c.lhs) + ")";
    case Cond::Kind::Eq:
      return "(== " + sx(c.lhs) + " " + sx(c.rhs) + ")";
    case Cond::Kind::Ne:
      return "(!= " + sx(c.lhs) + " " + sx(c.rhs) + ")";
  }
  return "?";
}

}  // namespace

std::string pretty(const Stmt& s, int indent) {
  std::ostringstream os;
  pretty_into(os, s, indent);
  return os.str();
}

std::string pretty(const AStmt& s, int indent) {
  std::ostringstream os;
  pretty_into(os, s, indent);
  return os.str();
}

std::string sexpr(const Assertion& a) {
  std::string s = "(asrt (exists";
  for (const auto& b : a.exists) s += " (" + b.name + " " + sort_name(b.sort) + ")";
  s += ") (locals";
  for (const auto& [x, t] : a.locals) s += " (" + x + " " + sx(t) + ")";
  s += ") (pure";
  for (const auto& p : a.pure)
    s += std::string(" (") + (p.op == PureProp::Op::Eq ? "=" : "!=") + " " + sx(p.lhs) + " " +
         sx(p.rhs) + ")";
  s += ") (spatial";
  for (const auto& c : a.spatial) s += " " + sx(c);
  return s + "))";
}

std::string sexpr(const AStmt& s) {
  using K = AStmt::Kind;
  switch (s.kind) {
    case K::Skip:
      return "(skip)";
    case K::Assert:
      return "(assert " + sexpr(s.assertion) + ")";
    case K::Given:
      return "(given " + s.binder.name + " " + sort_name(s.binder.sort) + " " + sexpr(s.kids[0]) +
             ")";
    case K::Assign:
      return sx(s.assign);
    case K::Seq:
      return "(seq " + sexpr(s.kids[0]) + " " + sexpr(s.kids[1]) + ")";
    case K::If:
      return "(if " + sx(s.cond) + " " + sexpr(s.kids[0]) + " " + sexpr(s.kids[1]) + ")";
    case K::Loop:
      return "(loop " + sexpr(s.assertion) + " " + sexpr(s.con_inv) + " " + sexpr(s.kids[0]) +
             " " + sexpr(s.kids[1]) + ")";
    case K::Break:
      return "(break)";
    case K::Continue:
      return "(continue)";
    case K::Return:
      return s.ret ? "(return " + sx(*s.ret) + ")" : "(return)";
  }
  return "?";
}

std::string sexpr(const Stmt& s) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Skip:
      return "(skip)";
    case K::Assign:
      return sx(s.assign);
    case K::Seq:
      return "(seq " + sexpr(s.kids[0]) + " " + sexpr(s.kids[1]) + ")";
    case K::If:
      return "(if " + sx(s.cond) + " " + sexpr(s.kids[0]) + " " + sexpr(s.kids[1]) + ")";
    case K::Loop:
      return "(loop " + sexpr(s.kids[0]) + " " + sexpr(s.kids[1]) + ")";
    case K::Break:
      return "(break)";
    case K::Continue:
      return "(continue)";
    case K::Return:
      return s.ret ? "(return " + sx(*s.ret) + ")" : "(return)";
  }
  return "?";
}

}  // namespace annoc
