#pragma once

#include "abelext/algebra.hpp"
#include "abelext/extension.hpp"
#include "abelext/overalgebra.hpp"
#include "abelext/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace abelext {

// Named entities of a document. Entities hold copies of what they reference,
// so lookups never dangle.
struct Workspace {
  std::map<std::string, VarietyPresentation> varieties;
  std::map<std::string, FiniteAlgebra> algebras;
  std::map<std::string, AbOveralgebra> abovs;
  std::map<std::string, PointedOveralgebra> povs;
  std::map<std::string, Homomorphism> homs;
  std::map<std::string, AbHom> abhoms;
  std::map<std::string, Extension> extensions;

  // "variety", "algebra", ... or nullopt
  [[nodiscard]] auto kind_of(std::string_view name) const -> std::optional<std::string>;

  [[nodiscard]] auto variety(const std::string &name) const -> const VarietyPresentation &;
  [[nodiscard]] auto algebra(const std::string &name) const -> const FiniteAlgebra &;
  [[nodiscard]] auto abov(const std::string &name) const -> const AbOveralgebra &;
  [[nodiscard]] auto pov(const std::string &name) const -> const PointedOveralgebra &;
  [[nodiscard]] auto hom(const std::string &name) const -> const Homomorphism &;
  [[nodiscard]] auto abhom(const std::string &name) const -> const AbHom &;
  [[nodiscard]] auto extension(const std::string &name) const -> const Extension &;

  // Insertion with the unique-name rule; throws Duplicate.
  void add(VarietyPresentation v);
  void add(FiniteAlgebra a);
  void add(AbOveralgebra m);
  void add(PointedOveralgebra p);
  void add(Homomorphism h);
  void add(AbHom g);
  void add(Extension x);

  friend auto operator==(const Workspace &, const Workspace &) -> bool = default;
};

auto parse_spec(std::string_view text) -> Workspace;
auto render_spec(const Workspace &w) -> std::string;
auto load_workspace(const std::string &path) -> Workspace;

// Canonical text of single entities, shared by render_spec and the CLI.
auto render_variety(const VarietyPresentation &v) -> std::string;
auto render_algebra(const FiniteAlgebra &a) -> std::string;
auto render_abov(const AbOveralgebra &m) -> std::string;
auto render_pov(const PointedOveralgebra &p) -> std::string;
auto render_hom(const Homomorphism &h) -> std::string;
auto render_abhom(const AbHom &g) -> std::string;
auto render_extension(const Extension &x) -> std::string;

} // namespace abelext
