#include "abelext/workspace.hpp"

#include "abelext/error.hpp"

#include <fstream>
#include <sstream>

namespace abelext {

namespace {

template <class Map>
auto find_in(const Map &m, const std::string &name, const char *kind) -> const typename Map::mapped_type & {
  auto it = m.find(name);
  if (it == m.end()) throw Error(ErrorKind::UnknownSymbol, std::string("no ") + kind + " named '" + name + "'");
  return it->second;
}

} // namespace

auto Workspace::kind_of(std::string_view name) const -> std::optional<std::string> {
  std::string n(name);
  if (varieties.count(n)) return "variety";
  if (algebras.count(n)) return "algebra";
  if (abovs.count(n)) return "abov";
  if (povs.count(n)) return "pov";
  if (homs.count(n)) return "hom";
  if (abhoms.count(n)) return "abhom";
  if (extensions.count(n)) return "extension";
  return std::nullopt;
}

auto Workspace::variety(const std::string &name) const -> const VarietyPresentation & {
  return find_in(varieties, name, "variety");
}
auto Workspace::algebra(const std::string &name) const -> const FiniteAlgebra & { return find_in(algebras, name, "algebra"); }
auto Workspace::abov(const std::string &name) const -> const AbOveralgebra & {
  return find_in(abovs, name, "abelian group overalgebra");
}
auto Workspace::pov(const std::string &name) const -> const PointedOveralgebra & {
  return find_in(povs, name, "pointed overalgebra");
}
auto Workspace::hom(const std::string &name) const -> const Homomorphism & { return find_in(homs, name, "homomorphism"); }
auto Workspace::abhom(const std::string &name) const -> const AbHom & { return find_in(abhoms, name, "module map"); }
auto Workspace::extension(const std::string &name) const -> const Extension & {
  return find_in(extensions, name, "extension");
}

namespace {

template <class Map, class T>
void insert_unique(const Workspace &w, Map &m, T value) {
  if (value.name.empty()) throw Error(ErrorKind::Invariant, "entities must be named");
  if (w.kind_of(value.name)) throw Error(ErrorKind::Duplicate, "duplicate name '" + value.name + "'");
  auto name = value.name;
  m.emplace(std::move(name), std::move(value));
}

} // namespace

void Workspace::add(VarietyPresentation v) { insert_unique(*this, varieties, std::move(v)); }
void Workspace::add(FiniteAlgebra a) { insert_unique(*this, algebras, std::move(a)); }
void Workspace::add(AbOveralgebra m) { insert_unique(*this, abovs, std::move(m)); }
void Workspace::add(PointedOveralgebra p) { insert_unique(*this, povs, std::move(p)); }
void Workspace::add(Homomorphism h) { insert_unique(*this, homs, std::move(h)); }
void Workspace::add(AbHom g) { insert_unique(*this, abhoms, std::move(g)); }
void Workspace::add(Extension x) { insert_unique(*this, extensions, std::move(x)); }

auto load_workspace(const std::string &path) -> Workspace {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open workspace '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

} // namespace abelext
