#include <cctype>
#include <set>

#include "annoc/cparse.hpp"
#include "annoc/error.hpp"

namespace annoc {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "struct", "if",   "else",    "while", "for",    "do",     "break",   "continue",
      "return", "NULL", "int",     "long",  "char",   "void",   "unsigned", "switch",
      "goto",   "case", "default", "sizeof", "typedef", "signed", "short",   "const"};
  return k;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;  // count code points, not bytes
      }
    }
  };
  auto starts = [&](std::string_view p) { return src.substr(i, p.size()) == p; };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (starts("/*")) {
      bool annot = starts("/*@");
      std::size_t end = src.find("*/", i + 2);
      if (end == std::string_view::npos) throw FrontendError("LexError", {tl, tc}, "unterminated comment");
      if (annot) out.push_back({Token::Kind::Comment, std::string(src.substr(i + 3, end - i - 3)), tl, tc});
      advance(end + 2 - i);
      continue;
    }
    if (starts("//")) {
      bool annot = starts("//@");
      std::size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = src.size();
      if (annot) out.push_back({Token::Kind::Comment, std::string(src.substr(i + 3, end - i - 3)), tl, tc});
      advance(end - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string w(src.substr(i, j - i));
      Token::Kind k = keywords().count(w) ? Token::Kind::Keyword : Token::Kind::Ident;
      out.push_back({k, w, tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && ident_start(src[j]))
        throw FrontendError("LexError", {tl, tc}, "malformed number");
      out.push_back({Token::Kind::Int, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    static const char* two[] = {"->", "==", "!=", "&&", "||", "++", "--", "+=", "-=",
                                "<=", ">=", "<<", ">>", "*=", "/="};
    bool matched = false;
    for (const char* p : two) {
      if (starts(p)) {
        out.push_back({Token::Kind::Punct, p, tl, tc});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string singles = "{}();,*=<>!+-&[]/.%:?~^|";
    if (singles.find(c) != std::string::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), tl, tc});
      advance(1);
      continue;
    }
    throw FrontendError("LexError", {tl, tc}, std::string("illegal character '") + c + "'");
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

}  // namespace annoc
