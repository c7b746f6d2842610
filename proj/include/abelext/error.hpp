#pragma once

#include <stdexcept>
#include <string>

namespace abelext {

enum class ErrorKind {
  Syntax,
  Arity,
  UnknownSymbol,
  Duplicate,
  Shape,
  Invariant,
  SignatureMismatch,
  NotHomomorphism,
  NotCongruence,
  CapExceeded,
  NotAbelianKernel,
  NotFactorSet,
  Mismatch,
  NotModuleShape,
  Inconclusive,
  Io,
  Internal,
};

auto kind_name(ErrorKind k) -> const char *;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &msg, int line = 0, int column = 0);
  [[nodiscard]] auto kind() const -> ErrorKind { return kind_; }
  [[nodiscard]] auto line() const -> int { return line_; }
  [[nodiscard]] auto column() const -> int { return column_; }

private:
  ErrorKind kind_;
  int line_, column_;
};

} // namespace abelext
