#pragma once

#include "abelext/error.hpp"
#include "abelext/workspace.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace support {

inline auto fixture() -> const abelext::Workspace & {
  static const abelext::Workspace w = abelext::load_workspace(ABELEXT_FIXTURE);
  return w;
}

// True when fn() throws an engine error of the given kind.
template <class F>
auto throws_kind(F &&fn, abelext::ErrorKind kind) -> bool {
  try {
    fn();
  } catch (const abelext::Error &e) {
    return e.kind() == kind;
  }
  return false;
}

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with a shell argument string; stderr is discarded.
inline auto cli(const std::string &args) -> Run {
  std::string cmd = std::string("'") + ABELEXT_CLI + "' " + args + " 2>/dev/null";
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline auto fixture_arg() -> std::string { return std::string("'") + ABELEXT_FIXTURE + "'"; }

// Z/n as an algebra of the abelian-group variety with the constant module Z/m (trivial action).
inline auto cyclic_module_doc(int n, int m) -> std::string {
  auto group = [&](void) -> std::string { return m == 1 ? "[]" : "[" + std::to_string(m) + "]"; };
  std::string s = "variety AB {\n  ops { add/2, neg/1, zero/0 }\n  identities {\n"
                  "    add(add(x0, x1), x2) = add(x0, add(x1, x2));\n    add(zero(), x0) = x0;\n"
                  "    add(x0, neg(x0)) = zero();\n    add(x0, x1) = add(x1, x0);\n  }\n"
                  "  difference add(add(x0, neg(x1)), x2)\n}\n\n";
  s += "algebra Zn : AB {\n  size " + std::to_string(n) + "\n  add [";
  for (int a = 0; a < n; ++a) {
    s += a ? ", [" : "[";
    for (int b = 0; b < n; ++b) s += (b ? ", " : "") + std::to_string((a + b) % n);
    s += "]";
  }
  s += "]\n  neg [";
  for (int a = 0; a < n; ++a) s += (a ? ", " : "") + std::to_string((n - a) % n);
  s += "]\n  zero 0\n}\n\nabov Cm over Zn : AB {\n";
  for (int a = 0; a < n; ++a) s += "  group at " + std::to_string(a) + " = " + group() + "\n";
  std::string add = m == 1 ? "[]" : "[[1, 1]]", neg = m == 1 ? "[]" : "[[" + std::to_string(m - 1) + "]]";
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += "  opmap add at (" + std::to_string(a) + ", " + std::to_string(b) + ") = " + add + "\n";
  for (int a = 0; a < n; ++a) s += "  opmap neg at (" + std::to_string(a) + ") = " + neg + "\n";
  s += "  opmap zero at () = []\n}\n";
  return s;
}

} // namespace support
