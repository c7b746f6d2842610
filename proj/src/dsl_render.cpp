#include "abelext/error.hpp"
#include "abelext/workspace.hpp"

#include <functional>

namespace abelext {

namespace {

template <class T>
auto int_list(const std::vector<T> &v) -> std::string {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

auto matrix_text(const Matrix &m) -> std::string {
  if (m.empty() || m[0].empty()) return "[]";
  std::string s = "[";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += int_list(m[i]);
  }
  return s + "]";
}

auto tuple_text(const std::vector<int> &args) -> std::string {
  std::string s = "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(args[i]);
  }
  return s + ")";
}

// Nested table text for an arity-k operation.
void table_text(const std::vector<int> &tab, int size, int k, std::size_t &pos, std::string &out) {
  if (k == 0) {
    out += std::to_string(tab[pos++]);
    return;
  }
  out += '[';
  for (int i = 0; i < size; ++i) {
    if (i) out += ", ";
    table_text(tab, size, k - 1, pos, out);
  }
  out += ']';
}

void require_name(const std::string &name) {
  if (name.empty()) throw Error(ErrorKind::Invariant, "entities must be named at render time");
}

} // namespace

auto render_variety(const VarietyPresentation &v) -> std::string {
  require_name(v.name);
  std::string s = "variety " + v.name + " {\n  ops { ";
  for (int i = 0; i < v.signature.size(); ++i) {
    if (i) s += ", ";
    s += v.signature.name(i) + "/" + std::to_string(v.signature.arity(i));
  }
  s += " }\n";
  if (!v.identities.empty()) {
    s += "  identities {\n";
    for (const auto &id : v.identities)
      s += "    " + term_to_string(id.lhs, v.signature) + " = " + term_to_string(id.rhs, v.signature) + ";\n";
    s += "  }\n";
  }
  if (v.difference_term) s += "  difference " + term_to_string(*v.difference_term, v.signature) + "\n";
  return s + "}\n";
}

auto render_algebra(const FiniteAlgebra &a) -> std::string {
  require_name(a.name);
  std::string s = "algebra " + a.name + " : " + a.variety + " {\n  size " + std::to_string(a.size) + "\n";
  for (int op = 0; op < a.sig.size(); ++op) {
    s += "  " + a.sig.name(op) + " ";
    std::size_t pos = 0;
    table_text(a.tables[op], a.size, a.sig.arity(op), pos, s);
    s += "\n";
  }
  return s + "}\n";
}

auto render_abov(const AbOveralgebra &m) -> std::string {
  require_name(m.name);
  const auto &A = m.base;
  std::string s = "abov " + m.name + " over " + A.name + " : " + m.variety + " {\n";
  for (int a = 0; a < A.size; ++a) s += "  group at " + std::to_string(a) + " = " + int_list(m.groups[a].moduli) + "\n";
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    for (std::size_t idx = 0; idx < m.opmaps[op].size(); ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      s += "  opmap " + A.sig.name(op) + " at " + tuple_text({args.begin(), args.begin() + k}) + " = " +
           matrix_text(m.opmaps[op][idx]) + "\n";
    }
  }
  return s + "}\n";
}

auto render_pov(const PointedOveralgebra &p) -> std::string {
  require_name(p.name);
  const auto &A = p.base;
  std::string s = "pov " + p.name + " over " + A.name + " : " + p.variety + " {\n";
  for (int a = 0; a < A.size; ++a)
    s += "  fiber at " + std::to_string(a) + " = " + std::to_string(p.fiber[a]) + " point " + std::to_string(p.point[a]) + "\n";
  std::vector<int> args(std::max(1, A.sig.max_arity()));
  for (int op = 0; op < A.sig.size(); ++op) {
    int k = A.sig.arity(op);
    for (std::size_t idx = 0; idx < p.tables[op].size(); ++idx) {
      decode_tuple(idx, A.size, k, args.data());
      s += "  opmap " + A.sig.name(op) + " at " + tuple_text({args.begin(), args.begin() + k}) + " = " +
           int_list(p.tables[op][idx]) + "\n";
    }
  }
  return s + "}\n";
}

auto render_hom(const Homomorphism &h) -> std::string {
  require_name(h.name);
  return "hom " + h.name + " : " + h.dom + " -> " + h.cod + " " + int_list(h.map) + "\n";
}

auto render_abhom(const AbHom &g) -> std::string {
  require_name(g.name);
  std::string s = "abhom " + g.name + " : " + g.dom + " -> " + g.cod + " {\n";
  for (size_t a = 0; a < g.maps.size(); ++a) s += "  at " + std::to_string(a) + " = " + matrix_text(g.maps[a]) + "\n";
  return s + "}\n";
}

auto render_extension(const Extension &x) -> std::string {
  require_name(x.name);
  std::string s = "extension " + x.name + " : " + x.E.name + " -> " + x.M.base.name + " by " + x.M.name + " {\n";
  s += "  pi " + int_list(x.pi) + "\n";
  for (size_t e = 0; e < x.chi.size(); ++e) s += "  chi at " + std::to_string(e) + " = " + int_list(x.chi[e]) + "\n";
  return s + "}\n";
}

auto render_spec(const Workspace &w) -> std::string {
  // references must resolve to identical entities, otherwise the text would not parse back to w
  auto need_algebra = [&](const FiniteAlgebra &a, const std::string &who) {
    require_name(a.name);
    auto it = w.algebras.find(a.name);
    if (it == w.algebras.end() || !(it->second == a))
      throw Error(ErrorKind::Invariant, who + " refers to algebra '" + a.name + "' which is not in the workspace");
  };
  auto need_variety = [&](const std::string &v, const std::string &who) {
    if (!w.varieties.count(v)) throw Error(ErrorKind::Invariant, who + " refers to unknown variety '" + v + "'");
  };
  std::string s;
  for (const auto &[n, v] : w.varieties) {
    if (n != v.name) throw Error(ErrorKind::Invariant, "workspace key differs from entity name");
    s += render_variety(v) + "\n";
  }
  for (const auto &[n, a] : w.algebras) {
    need_variety(a.variety, n);
    s += render_algebra(a) + "\n";
  }
  for (const auto &[n, m] : w.abovs) {
    need_algebra(m.base, n);
    need_variety(m.variety, n);
    s += render_abov(m) + "\n";
  }
  for (const auto &[n, p] : w.povs) {
    need_algebra(p.base, n);
    need_variety(p.variety, n);
    s += render_pov(p) + "\n";
  }
  for (const auto &[n, h] : w.homs) {
    if (!w.algebras.count(h.dom) || !w.algebras.count(h.cod)) throw Error(ErrorKind::Invariant, n + " refers to unknown algebras");
    s += render_hom(h) + "\n";
  }
  for (const auto &[n, g] : w.abhoms) {
    if (!w.abovs.count(g.dom) || !w.abovs.count(g.cod)) throw Error(ErrorKind::Invariant, n + " refers to unknown overalgebras");
    s += render_abhom(g) + "\n";
  }
  for (const auto &[n, x] : w.extensions) {
    need_algebra(x.E, n);
    need_algebra(x.M.base, n);
    auto it = w.abovs.find(x.M.name);
    if (it == w.abovs.end() || !(it->second == x.M))
      throw Error(ErrorKind::Invariant, n + " refers to overalgebra '" + x.M.name + "' which is not in the workspace");
    s += render_extension(x) + "\n";
  }
  if (!s.empty()) s.pop_back();
  return s;
}

} // namespace abelext
