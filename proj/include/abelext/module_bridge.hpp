#pragma once

#include "abelext/extension.hpp"

#include <vector>

namespace abelext {

// Symbol roles of an R-module signature: one binary, one nullary, the rest unary.
struct ModuleSignature {
  int add = -1, zero = -1;
  std::vector<int> unary;
};

// Throws NotModuleShape unless the signature has module shape.
auto module_signature(const Signature &sig) -> ModuleSignature;
// Concrete check: abelian group under add/zero and every unary symbol an endomorphism.
void check_module_algebra(const FiniteAlgebra &A, const ModuleSignature &ms);

// 0 -> _0M -> E -> A -> 0
struct ModuleSequence {
  FiniteAlgebra E;
  FinAbGroup kernel;     // _0M
  std::vector<int> iota; // encoded element of _0M -> E
  std::vector<int> pi;
};

auto module_forward(const Extension &X) -> ModuleSequence;
// _e chi(m) = e + iota(m); M supplies the coefficient overalgebra.
auto module_backward(const ModuleSequence &S, const AbOveralgebra &M, const std::string &name = "E") -> Extension;
// gamma: E -> E2 with gamma iota = iota2 and pi2 gamma = pi
auto is_module_equivalence(const ModuleSequence &S1, const ModuleSequence &S2, const std::vector<int> &gamma) -> bool;

} // namespace abelext
