#include "abelext/error.hpp"
#include "abelext/workspace.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace abelext {

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  i64 value = 0;
  int line = 1, col = 1;
};

auto tokenize(std::string_view s) -> std::vector<Token> {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c) || (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(s.substr(i, j - i));
      if (j - i > 18) throw Error(ErrorKind::Syntax, "integer literal too long", line, col);
      t.value = std::stoll(t.text);
      advance(j - i);
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      t.kind = Tok::Punct;
      t.text = "->";
      advance(2);
    } else if (std::string_view("{}[](),;:=/").find(static_cast<char>(c)) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      throw Error(ErrorKind::Syntax, std::string("unexpected character '") + static_cast<char>(c) + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Integer or bracketed list, as read from the document.
struct Nested {
  bool leaf = true;
  i64 value = 0;
  std::vector<Nested> items;
  int line = 0, col = 0;
};

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  auto run() -> Workspace {
    while (peek().kind != Tok::End) {
      const Token &kw = peek();
      if (kw.kind != Tok::Ident) fail(ErrorKind::Syntax, "expected a section keyword", kw);
      section_tok_ = kw;
      try {
        if (kw.text == "variety") variety();
        else if (kw.text == "algebra") algebra();
        else if (kw.text == "abov") abov();
        else if (kw.text == "pov") pov();
        else if (kw.text == "hom") hom();
        else if (kw.text == "abhom") abhom();
        else if (kw.text == "extension") extension();
        else fail(ErrorKind::Syntax, "unknown section '" + kw.text + "'", kw);
      } catch (const Error &e) {
        if (e.line() > 0) throw;
        // validation errors carry no position; attach the section's
        throw Error(e.kind(), e.what(), section_tok_.line, section_tok_.col);
      }
    }
    return std::move(w_);
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Workspace w_;
  Token section_tok_;

  [[noreturn]] static void fail(ErrorKind k, const std::string &msg, const Token &t) {
    throw Error(k, msg, t.line, t.col);
  }
  auto peek(size_t ahead = 0) const -> const Token & { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  auto next() -> const Token & {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  auto is_punct(const char *p) const -> bool { return peek().kind == Tok::Punct && peek().text == p; }
  auto is_word(const char *w) const -> bool { return peek().kind == Tok::Ident && peek().text == w; }
  void expect(const char *p) {
    if (!is_punct(p)) fail(ErrorKind::Syntax, std::string("expected '") + p + "'", peek());
    next();
  }
  void keyword(const char *w) {
    if (!is_word(w)) fail(ErrorKind::Syntax, std::string("expected '") + w + "'", peek());
    next();
  }
  auto ident() -> std::string {
    if (peek().kind != Tok::Ident) fail(ErrorKind::Syntax, "expected a name", peek());
    return next().text;
  }
  auto integer() -> i64 {
    if (peek().kind != Tok::Int) fail(ErrorKind::Syntax, "expected an integer", peek());
    return next().value;
  }
  auto natural(i64 limit = i64{1} << 30) -> int {
    const Token &t = peek();
    i64 v = integer();
    if (v < 0 || v > limit) fail(ErrorKind::Invariant, "integer out of range", t);
    return static_cast<int>(v);
  }
  void skip_semis() {
    while (is_punct(";")) next();
  }

  auto nested() -> Nested {
    Nested n;
    n.line = peek().line;
    n.col = peek().col;
    if (peek().kind == Tok::Int) {
      n.value = next().value;
      return n;
    }
    expect("[");
    n.leaf = false;
    if (!is_punct("]")) {
      n.items.push_back(nested());
      while (is_punct(",")) {
        next();
        n.items.push_back(nested());
      }
    }
    expect("]");
    return n;
  }

  static void shape_fail(const Nested &n, const std::string &msg) { throw Error(ErrorKind::Shape, msg, n.line, n.col); }

  static auto flat_ints(const Nested &n) -> std::vector<i64> {
    if (n.leaf) shape_fail(n, "expected a list");
    std::vector<i64> out;
    for (const auto &x : n.items) {
      if (!x.leaf) shape_fail(x, "expected an integer");
      out.push_back(x.value);
    }
    return out;
  }

  // Table of an arity-k operation: k nested levels of length n, or a single integer when k = 0.
  static void flatten_table(const Nested &n, int k, int size, std::vector<int> &out) {
    if (k == 0) {
      if (!n.leaf) shape_fail(n, "table shape mismatch: expected a single entry");
      if (n.value < 0 || n.value >= size) shape_fail(n, "table entry out of range");
      out.push_back(static_cast<int>(n.value));
      return;
    }
    if (n.leaf || static_cast<int>(n.items.size()) != size) shape_fail(n, "table shape mismatch");
    for (const auto &x : n.items) flatten_table(x, k - 1, size, out);
  }

  static auto to_matrix(const Nested &n, int rows, int cols) -> Matrix {
    if (n.leaf) shape_fail(n, "expected a matrix");
    if (n.items.empty()) {
      if (rows != 0 && cols != 0) shape_fail(n, "matrix shape mismatch");
      return zero_matrix(rows, cols);
    }
    if (static_cast<int>(n.items.size()) != rows) shape_fail(n, "matrix shape mismatch: wrong number of rows");
    Matrix m;
    for (const auto &r : n.items) {
      auto row = flat_ints(r);
      if (static_cast<int>(row.size()) != cols) shape_fail(r, "matrix shape mismatch: wrong row length");
      m.push_back(row);
    }
    return m;
  }

  auto term(const Signature &sig) -> Term {
    const Token &t = peek();
    std::string name = ident();
    if (is_variable_name(name)) {
      if (name.size() > 7) fail(ErrorKind::Invariant, "variable index too large", t);
      return Term::variable(std::stoi(name.substr(1)));
    }
    int op = sig.find(name);
    if (op < 0) fail(ErrorKind::UnknownSymbol, "unknown symbol '" + name + "'", t);
    expect("(");
    std::vector<Term> args;
    if (!is_punct(")")) {
      args.push_back(term(sig));
      while (is_punct(",")) {
        next();
        args.push_back(term(sig));
      }
    }
    expect(")");
    if (static_cast<int>(args.size()) != sig.arity(op))
      fail(ErrorKind::Arity, "symbol '" + name + "' takes " + std::to_string(sig.arity(op)) + " arguments", t);
    return Term::apply(op, std::move(args));
  }

  auto new_name() -> std::string {
    const Token &t = peek();
    std::string n = ident();
    if (w_.kind_of(n)) fail(ErrorKind::Duplicate, "duplicate name '" + n + "'", t);
    return n;
  }

  template <class F>
  auto resolve(F lookup) -> decltype(lookup(std::string())) {
    const Token &t = peek();
    std::string n = ident();
    try {
      return lookup(n);
    } catch (const Error &e) {
      fail(e.kind(), e.what(), t);
    }
  }

  void variety() {
    keyword("variety");
    VarietyPresentation v;
    v.name = new_name();
    expect("{");
    keyword("ops");
    expect("{");
    std::set<std::string> seen;
    while (!is_punct("}")) {
      const Token &t = peek();
      std::string n = ident();
      if (is_variable_name(n)) fail(ErrorKind::Invariant, "'" + n + "' is reserved for variables", t);
      if (!seen.insert(n).second) fail(ErrorKind::Duplicate, "duplicate symbol '" + n + "'", t);
      expect("/");
      int ar = natural(16);
      v.signature.symbols.push_back({n, ar});
      if (is_punct(",")) next();
      else break;
    }
    expect("}");
    skip_semis();
    if (is_word("identities")) {
      next();
      expect("{");
      skip_semis();
      while (!is_punct("}")) {
        Term l = term(v.signature);
        expect("=");
        Term r = term(v.signature);
        v.identities.push_back(make_identity(std::move(l), std::move(r)));
        skip_semis();
      }
      expect("}");
      skip_semis();
    }
    if (is_word("difference")) {
      const Token &t = next();
      Term d = term(v.signature);
      if (term_span(d) > 3) fail(ErrorKind::Invariant, "the difference term must be ternary", t);
      v.difference_term = std::move(d);
      skip_semis();
    }
    expect("}");
    w_.add(std::move(v));
  }

  void algebra() {
    keyword("algebra");
    FiniteAlgebra a;
    a.name = new_name();
    expect(":");
    const auto &V = resolve([&](const std::string &n) -> const VarietyPresentation & { return w_.variety(n); });
    a.variety = V.name;
    a.sig = V.signature;
    expect("{");
    skip_semis();
    keyword("size");
    a.size = natural(1 << 16);
    a.tables.assign(a.sig.size(), {});
    std::vector<bool> have(a.sig.size(), false);
    skip_semis();
    while (!is_punct("}")) {
      const Token &t = peek();
      std::string n = ident();
      int op = a.sig.find(n);
      if (op < 0) fail(ErrorKind::UnknownSymbol, "unknown symbol '" + n + "'", t);
      if (have[op]) fail(ErrorKind::Duplicate, "table for '" + n + "' given twice", t);
      have[op] = true;
      if (is_punct("=")) next();
      Nested tab = nested();
      int k = a.sig.arity(op);
      if (k > 0 && ipow(a.size, k) > (std::size_t{1} << 24)) fail(ErrorKind::CapExceeded, "table too large", t);
      flatten_table(tab, k, a.size, a.tables[op]);
      skip_semis();
    }
    for (int op = 0; op < a.sig.size(); ++op)
      if (!have[op]) fail(ErrorKind::Shape, "missing table for '" + a.sig.name(op) + "'", peek());
    expect("}");
    validate_algebra(a);
    w_.add(std::move(a));
  }

  auto base_and_variety(std::string &variety) -> FiniteAlgebra {
    keyword("over");
    FiniteAlgebra base = resolve([&](const std::string &n) -> const FiniteAlgebra & { return w_.algebra(n); });
    expect(":");
    const Token &vt = peek();
    const auto &V = resolve([&](const std::string &n) -> const VarietyPresentation & { return w_.variety(n); });
    if (!(V.signature == base.sig)) fail(ErrorKind::SignatureMismatch, "base algebra has a different signature", vt);
    variety = V.name;
    return base;
  }

  auto tuple_index(const FiniteAlgebra &A, int op, const Token &at) -> std::size_t {
    expect("(");
    std::vector<int> args;
    if (!is_punct(")")) {
      args.push_back(natural());
      while (is_punct(",")) {
        next();
        args.push_back(natural());
      }
    }
    expect(")");
    if (static_cast<int>(args.size()) != A.sig.arity(op)) fail(ErrorKind::Arity, "argument tuple has the wrong length", at);
    for (int x : args)
      if (x >= A.size) fail(ErrorKind::Invariant, "argument outside the carrier", at);
    return encode_tuple(args.data(), A.size, A.sig.arity(op));
  }

  void abov() {
    keyword("abov");
    AbOveralgebra m;
    m.name = new_name();
    m.base = base_and_variety(m.variety);
    const auto &A = m.base;
    expect("{");
    std::vector<std::optional<FinAbGroup>> groups(A.size);
    std::optional<FinAbGroup> group_default;
    std::vector<std::map<std::size_t, Nested>> maps(A.sig.size());
    std::vector<std::optional<Nested>> map_default(A.sig.size());
    skip_semis();
    while (!is_punct("}")) {
      const Token &t = peek();
      std::string word = ident();
      if (word == "group") {
        std::optional<int> at;
        if (is_word("at")) {
          next();
          const Token &et = peek();
          at = natural();
          if (*at >= A.size) fail(ErrorKind::Invariant, "element outside the carrier", et);
        }
        expect("=");
        Nested n = nested();
        FinAbGroup g{flat_ints(n)};
        for (i64 x : g.moduli)
          if (x < 2) shape_fail(n, "group moduli must be at least 2");
        auto &slot = at ? groups[*at] : group_default;
        if (slot) fail(ErrorKind::Duplicate, "group given twice", t);
        slot = g;
      } else if (word == "opmap") {
        const Token &ot = peek();
        std::string n = ident();
        int op = A.sig.find(n);
        if (op < 0) fail(ErrorKind::UnknownSymbol, "unknown symbol '" + n + "'", ot);
        if (is_word("at")) {
          next();
          auto idx = tuple_index(A, op, ot);
          expect("=");
          if (!maps[op].emplace(idx, nested()).second) fail(ErrorKind::Duplicate, "opmap given twice", ot);
        } else {
          expect("=");
          if (map_default[op]) fail(ErrorKind::Duplicate, "default opmap given twice", ot);
          map_default[op] = nested();
        }
      } else {
        fail(ErrorKind::Syntax, "expected 'group' or 'opmap'", t);
      }
      skip_semis();
    }
    const Token &close = peek();
    expect("}");
    for (int a = 0; a < A.size; ++a) {
      if (!groups[a] && !group_default) fail(ErrorKind::Shape, "missing group at " + std::to_string(a), close);
      m.groups.push_back(groups[a] ? *groups[a] : *group_default);
    }
    m.opmaps.resize(A.sig.size());
    std::vector<int> args(std::max(1, A.sig.max_arity()));
    for (int op = 0; op < A.sig.size(); ++op) {
      int k = A.sig.arity(op);
      std::size_t count = ipow(A.size, k);
      for (std::size_t idx = 0; idx < count; ++idx) {
        decode_tuple(idx, A.size, k, args.data());
        auto it = maps[op].find(idx);
        const Nested *src = it != maps[op].end() ? &it->second : (map_default[op] ? &*map_default[op] : nullptr);
        if (!src) fail(ErrorKind::Shape, "missing opmap for '" + A.sig.name(op) + "'", close);
        int rows = m.groups[A.apply(op, args.data())].rank();
        int cols = 0;
        for (int i = 0; i < k; ++i) cols += m.groups[args[i]].rank();
        m.opmaps[op].push_back(to_matrix(*src, rows, cols));
      }
    }
    validate_abov(m);
    w_.add(std::move(m));
  }

  void pov() {
    keyword("pov");
    PointedOveralgebra p;
    p.name = new_name();
    p.base = base_and_variety(p.variety);
    const auto &A = p.base;
    expect("{");
    std::vector<std::optional<std::pair<int, int>>> fibers(A.size);
    std::optional<std::pair<int, int>> fiber_default;
    std::vector<std::map<std::size_t, Nested>> tabs(A.sig.size());
    skip_semis();
    while (!is_punct("}")) {
      const Token &t = peek();
      std::string word = ident();
      if (word == "fiber") {
        std::optional<int> at;
        if (is_word("at")) {
          next();
          const Token &et = peek();
          at = natural();
          if (*at >= A.size) fail(ErrorKind::Invariant, "element outside the carrier", et);
        }
        expect("=");
        int k = natural(1 << 16);
        keyword("point");
        int pt = natural(1 << 16);
        auto &slot = at ? fibers[*at] : fiber_default;
        if (slot) fail(ErrorKind::Duplicate, "fiber given twice", t);
        slot = std::make_pair(k, pt);
      } else if (word == "opmap") {
        const Token &ot = peek();
        std::string n = ident();
        int op = A.sig.find(n);
        if (op < 0) fail(ErrorKind::UnknownSymbol, "unknown symbol '" + n + "'", ot);
        keyword("at");
        auto idx = tuple_index(A, op, ot);
        expect("=");
        if (!tabs[op].emplace(idx, nested()).second) fail(ErrorKind::Duplicate, "opmap given twice", ot);
      } else {
        fail(ErrorKind::Syntax, "expected 'fiber' or 'opmap'", t);
      }
      skip_semis();
    }
    const Token &close = peek();
    expect("}");
    for (int a = 0; a < A.size; ++a) {
      auto f = fibers[a] ? fibers[a] : fiber_default;
      if (!f) fail(ErrorKind::Shape, "missing fiber at " + std::to_string(a), close);
      p.fiber.push_back(f->first);
      p.point.push_back(f->second);
    }
    p.tables.resize(A.sig.size());
    std::vector<int> args(std::max(1, A.sig.max_arity()));
    for (int op = 0; op < A.sig.size(); ++op) {
      int k = A.sig.arity(op);
      std::size_t count = ipow(A.size, k);
      for (std::size_t idx = 0; idx < count; ++idx) {
        decode_tuple(idx, A.size, k, args.data());
        auto it = tabs[op].find(idx);
        if (it == tabs[op].end()) fail(ErrorKind::Shape, "missing opmap for '" + A.sig.name(op) + "'", close);
        std::size_t cells = 1;
        for (int i = 0; i < k; ++i) cells *= static_cast<std::size_t>(p.fiber[args[i]]);
        auto vals = flat_ints(it->second);
        if (vals.size() != cells) shape_fail(it->second, "table shape mismatch");
        int target = p.fiber[A.apply(op, args.data())];
        std::vector<int> row;
        for (i64 v : vals) {
          if (v < 0 || v >= target) shape_fail(it->second, "table entry out of range");
          row.push_back(static_cast<int>(v));
        }
        p.tables[op].push_back(std::move(row));
      }
    }
    validate_pov(p);
    w_.add(std::move(p));
  }

  void hom() {
    keyword("hom");
    Homomorphism h;
    h.name = new_name();
    expect(":");
    const auto A = resolve([&](const std::string &n) -> const FiniteAlgebra & { return w_.algebra(n); });
    expect("->");
    const Token &bt = peek();
    const auto B = resolve([&](const std::string &n) -> const FiniteAlgebra & { return w_.algebra(n); });
    if (!(A.sig == B.sig)) fail(ErrorKind::SignatureMismatch, "algebras have different signatures", bt);
    h.dom = A.name;
    h.cod = B.name;
    Nested n = nested();
    for (i64 v : flat_ints(n)) {
      if (v < 0 || v >= B.size) shape_fail(n, "map entry out of range");
      h.map.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(h.map.size()) != A.size) shape_fail(n, "map shape mismatch");
    if (!is_homomorphism(h.map, A, B)) throw Error(ErrorKind::NotHomomorphism, "'" + h.name + "' is not a homomorphism", n.line, n.col);
    skip_semis();
    w_.add(std::move(h));
  }

  void abhom() {
    keyword("abhom");
    AbHom g;
    g.name = new_name();
    expect(":");
    const auto M = resolve([&](const std::string &n) -> const AbOveralgebra & { return w_.abov(n); });
    expect("->");
    const auto N = resolve([&](const std::string &n) -> const AbOveralgebra & { return w_.abov(n); });
    g.dom = M.name;
    g.cod = N.name;
    if (M.base.size != N.base.size) fail(ErrorKind::SignatureMismatch, "overalgebras over different bases", peek());
    expect("{");
    std::vector<std::optional<Nested>> at(M.base.size);
    std::optional<Nested> all;
    skip_semis();
    while (!is_punct("}")) {
      const Token &t = peek();
      std::string word = ident();
      if (word == "at") {
        const Token &et = peek();
        int a = natural();
        if (a >= M.base.size) fail(ErrorKind::Invariant, "element outside the carrier", et);
        expect("=");
        if (at[a]) fail(ErrorKind::Duplicate, "matrix given twice", t);
        at[a] = nested();
      } else if (word == "all") {
        expect("=");
        if (all) fail(ErrorKind::Duplicate, "default matrix given twice", t);
        all = nested();
      } else {
        fail(ErrorKind::Syntax, "expected 'at' or 'all'", t);
      }
      skip_semis();
    }
    const Token &close = peek();
    expect("}");
    for (int a = 0; a < M.base.size; ++a) {
      const Nested *src = at[a] ? &*at[a] : (all ? &*all : nullptr);
      if (!src) fail(ErrorKind::Shape, "missing matrix at " + std::to_string(a), close);
      g.maps.push_back(to_matrix(*src, N.groups[a].rank(), M.groups[a].rank()));
    }
    validate_abhom(g, M, N);
    w_.add(std::move(g));
  }

  void extension() {
    keyword("extension");
    Extension x;
    x.name = new_name();
    expect(":");
    x.E = resolve([&](const std::string &n) -> const FiniteAlgebra & { return w_.algebra(n); });
    expect("->");
    const Token &at_tok = peek();
    const auto A = resolve([&](const std::string &n) -> const FiniteAlgebra & { return w_.algebra(n); });
    keyword("by");
    x.M = resolve([&](const std::string &n) -> const AbOveralgebra & { return w_.abov(n); });
    if (!(x.M.base == A)) fail(ErrorKind::Mismatch, "coefficients are not over '" + A.name + "'", at_tok);
    if (!(x.E.sig == A.sig)) fail(ErrorKind::SignatureMismatch, "algebras have different signatures", at_tok);
    expect("{");
    skip_semis();
    keyword("pi");
    Nested pn = nested();
    for (i64 v : flat_ints(pn)) {
      if (v < 0 || v >= A.size) shape_fail(pn, "projection entry out of range");
      x.pi.push_back(static_cast<int>(v));
    }
    if (static_cast<int>(x.pi.size()) != x.E.size) shape_fail(pn, "projection shape mismatch");
    std::vector<std::optional<std::vector<int>>> chi(x.E.size);
    skip_semis();
    while (!is_punct("}")) {
      const Token &t = peek();
      keyword("chi");
      keyword("at");
      const Token &et = peek();
      int e = natural();
      if (e >= x.E.size) fail(ErrorKind::Invariant, "element outside the carrier", et);
      expect("=");
      Nested n = nested();
      std::vector<int> row;
      for (i64 v : flat_ints(n)) {
        if (v < 0 || v >= x.E.size) shape_fail(n, "chi entry out of range");
        row.push_back(static_cast<int>(v));
      }
      if (chi[e]) fail(ErrorKind::Duplicate, "chi given twice", t);
      chi[e] = std::move(row);
      skip_semis();
    }
    const Token &close = peek();
    expect("}");
    for (int e = 0; e < x.E.size; ++e) {
      if (!chi[e]) fail(ErrorKind::Shape, "missing chi at " + std::to_string(e), close);
      x.chi.push_back(*chi[e]);
    }
    check_extension_structure(x);
    w_.add(std::move(x));
  }
};

} // namespace

auto parse_spec(std::string_view text) -> Workspace { return Parser(text).run(); }

} // namespace abelext
