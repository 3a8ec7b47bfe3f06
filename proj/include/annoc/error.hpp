#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "annoc/ast.hpp"

namespace annoc {

struct Diagnostic {
  std::string kind;  // e.g. "ParseError", "MissingInvariant"
  Loc loc;
  std::string message;

  std::string str() const;
};

class Error : public std::runtime_error {
 public:
  explicit Error(std::vector<Diagnostic> diags);
  Error(std::string kind, Loc loc, std::string message);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  const std::string& kind() const { return diags_.front().kind; }
  Loc loc() const { return diags_.front().loc; }

 private:
  std::vector<Diagnostic> diags_;
};

// Lexing, parsing, annotation and spec problems.
class FrontendError : public Error {
 public:
  using Error::Error;
};

// Strategy failures and symbolic execution failures.
class VerifyError : public Error {
 public:
  using Error::Error;
};

}  // namespace annoc
