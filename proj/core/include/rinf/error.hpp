#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rinf {

enum class ErrorKind {
  Structural,     // signature/depth/arity mismatch
  OutOfDepth,     // level beyond the represented depth
  Domain,         // argument outside the operation's domain
  Parse,          // malformed text input
  Unresolved,     // unknown symbol or spec
  Resource,       // cap or budget exhausted
  NotFound,       // bounded search found nothing
  Precondition,   // documented precondition violated
  Normalization,  // conjugation leaves the quotient
  NotWellDefined, // generator images do not define a homomorphism
  Unsupported,    // e.g. binary-only operation on a non-binary tree
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
public:
  ParseError(const std::string &what, int line, int column)
      : Error(ErrorKind::Parse, format(what, line, column)), line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  static std::string format(const std::string &what, int line, int column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
};

} // namespace rinf
