#include "annoc/error.hpp"

namespace annoc {

std::string Diagnostic::str() const {
  return std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + kind + ": " + message;
}

namespace {

std::string join(const std::vector<Diagnostic>& ds) {
  std::string s;
  for (const auto& d : ds) {
    if (!s.empty()) s += "\n";
    s += d.str();
  }
  return s;
}

}  // namespace

Error::Error(std::vector<Diagnostic> diags) : std::runtime_error(join(diags)), diags_(std::move(diags)) {
  if (diags_.empty()) diags_.push_back({"Error", {}, "unknown error"});
}

Error::Error(std::string kind, Loc loc, std::string message)
    : Error(std::vector<Diagnostic>{{std::move(kind), loc, std::move(message)}}) {}

}  // namespace annoc
