#include "abelext/module_bridge.hpp"

#include "abelext/error.hpp"

namespace abelext {

auto module_signature(const Signature &sig) -> ModuleSignature {
  ModuleSignature ms;
  for (int op = 0; op < sig.size(); ++op) {
    switch (sig.arity(op)) {
    case 0:
      if (ms.zero >= 0) throw Error(ErrorKind::NotModuleShape, "more than one nullary symbol");
      ms.zero = op;
      break;
    case 1:
      ms.unary.push_back(op);
      break;
    case 2:
      if (ms.add >= 0) throw Error(ErrorKind::NotModuleShape, "more than one binary symbol");
      ms.add = op;
      break;
    default:
      throw Error(ErrorKind::NotModuleShape, "symbol " + sig.name(op) + " has arity above 2");
    }
  }
  if (ms.add < 0 || ms.zero < 0) throw Error(ErrorKind::NotModuleShape, "module signatures need a binary and a nullary symbol");
  return ms;
}

void check_module_algebra(const FiniteAlgebra &A, const ModuleSignature &ms) {
  int z = A.tables[ms.zero][0];
  auto add = [&](int x, int y) { return A.apply(ms.add, {x, y}); };
  for (int x = 0; x < A.size; ++x) {
    if (add(x, z) != x || add(z, x) != x) throw Error(ErrorKind::NotModuleShape, A.name + ": zero is not neutral");
    bool inverse = false;
    for (int y = 0; y < A.size; ++y) {
      if (add(x, y) != add(y, x)) throw Error(ErrorKind::NotModuleShape, A.name + ": addition is not commutative");
      inverse = inverse || add(x, y) == z;
      for (int w = 0; w < A.size; ++w)
        if (add(add(x, y), w) != add(x, add(y, w))) throw Error(ErrorKind::NotModuleShape, A.name + ": addition is not associative");
      for (int u : ms.unary)
        if (A.apply(u, {add(x, y)}) != add(A.apply(u, {x}), A.apply(u, {y})))
          throw Error(ErrorKind::NotModuleShape, A.name + ": unary symbol is not additive");
    }
    if (!inverse) throw Error(ErrorKind::NotModuleShape, A.name + ": missing additive inverse");
  }
}

auto module_forward(const Extension &X) -> ModuleSequence {
  auto ms = module_signature(X.E.sig);
  check_module_algebra(X.E, ms);
  check_module_algebra(X.A(), ms);
  ModuleSequence S;
  S.E = X.E;
  S.pi = X.pi;
  int zero = X.E.tables[ms.zero][0];
  S.kernel = X.M.groups[X.pi[zero]];
  S.iota = X.chi[zero];
  return S;
}

auto module_backward(const ModuleSequence &S, const AbOveralgebra &M, const std::string &name) -> Extension {
  auto ms = module_signature(S.E.sig);
  check_module_algebra(S.E, ms);
  for (const auto &g : M.groups)
    if (!(g == S.kernel)) throw Error(ErrorKind::NotModuleShape, "coefficient fibers differ from the kernel group");
  Extension X;
  X.name = name;
  X.E = S.E;
  X.M = M;
  X.pi = S.pi;
  X.chi.resize(S.E.size);
  for (int e = 0; e < S.E.size; ++e)
    for (int m : S.iota) X.chi[e].push_back(S.E.apply(ms.add, {e, m}));
  return X;
}

auto is_module_equivalence(const ModuleSequence &S1, const ModuleSequence &S2, const std::vector<int> &gamma) -> bool {
  if (!is_homomorphism(gamma, S1.E, S2.E) || S1.iota.size() != S2.iota.size()) return false;
  for (std::size_t m = 0; m < S1.iota.size(); ++m)
    if (gamma[S1.iota[m]] != S2.iota[m]) return false;
  for (int e = 0; e < S1.E.size; ++e)
    if (S2.pi[gamma[e]] != S1.pi[e]) return false;
  return true;
}

} // namespace abelext
