#include "abelext/error.hpp"

namespace abelext {

auto kind_name(ErrorKind k) -> const char * {
  switch (k) {
  case ErrorKind::Syntax: return "syntax";
  case ErrorKind::Arity: return "arity_mismatch";
  case ErrorKind::UnknownSymbol: return "unknown_symbol";
  case ErrorKind::Duplicate: return "duplicate_name";
  case ErrorKind::Shape: return "shape_mismatch";
  case ErrorKind::Invariant: return "invariant_violation";
  case ErrorKind::SignatureMismatch: return "signature_mismatch";
  case ErrorKind::NotHomomorphism: return "not_homomorphism";
  case ErrorKind::NotCongruence: return "not_congruence";
  case ErrorKind::CapExceeded: return "cap_exceeded";
  case ErrorKind::NotAbelianKernel: return "not_abelian_kernel";
  case ErrorKind::NotFactorSet: return "not_factor_set";
  case ErrorKind::Mismatch: return "mismatched_ambient";
  case ErrorKind::NotModuleShape: return "not_module_shape";
  case ErrorKind::Inconclusive: return "inconclusive";
  case ErrorKind::Io: return "io";
  case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

static auto decorate(const std::string &msg, int line, int column) -> std::string {
  if (line <= 0) return msg;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
}

Error::Error(ErrorKind kind, const std::string &msg, int line, int column)
    : std::runtime_error(decorate(msg, line, column)), kind_(kind), line_(line), column_(column) {}

} // namespace abelext
