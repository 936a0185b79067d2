#include "dcat/dsl.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace dcat::dsl {

std::string to_string(const Location& at) {
  return std::to_string(at.line) + ":" + std::to_string(at.column);
}

ParseError::ParseError(Location at, const std::string& message)
    : Error(to_string(at) + ": " + message), at_(at), detail_(message) {}

WorkspaceValidationError::WorkspaceValidationError(Location at, const std::string& message)
    : ValidationError(to_string(at) + ": " + message), at_(at) {}

namespace {

enum class Tok { ident, lbrace, rbrace, colon, semi, comma, arrow, proarrow, darrow, dot, eq, end };

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::colon: return "':'";
    case Tok::semi: return "';'";
    case Tok::comma: return "','";
    case Tok::arrow: return "'->'";
    case Tok::proarrow: return "'-/->'";
    case Tok::darrow: return "'=>'";
    case Tok::dot: return "'.'";
    case Tok::eq: return "'='";
    case Tok::end: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string text;
  bool quoted = false;
  Location at;
};

bool bare_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '\'' || c == '*';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  Location at;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++at.line;
        at.column = 1;
      } else {
        ++at.column;
      }
    }
  };
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const Location here = at;
    if (bare_char(c)) {
      std::size_t k = i;
      while (k < s.size() && bare_char(s[k])) ++k;
      out.push_back({Tok::ident, std::string(s.substr(i, k - i)), false, here});
      advance(k - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      advance(1);
      for (;;) {
        if (i >= s.size() || s[i] == '\n') throw SyntaxError(here, "unterminated quoted identifier");
        if (s[i] == '"') {
          advance(1);
          break;
        }
        if (s[i] == '\\') {
          if (i + 1 >= s.size() || (s[i + 1] != '"' && s[i + 1] != '\\')) {
            throw SyntaxError(at, "invalid escape in quoted identifier");
          }
          text.push_back(s[i + 1]);
          advance(2);
          continue;
        }
        text.push_back(s[i]);
        advance(1);
      }
      out.push_back({Tok::ident, std::move(text), true, here});
      continue;
    }
    struct Punct {
      std::string_view text;
      Tok kind;
    };
    static constexpr Punct puncts[] = {{"-/->", Tok::proarrow}, {"->", Tok::arrow},
                                       {"=>", Tok::darrow},     {"{", Tok::lbrace},
                                       {"}", Tok::rbrace},      {":", Tok::colon},
                                       {";", Tok::semi},        {",", Tok::comma},
                                       {".", Tok::dot},         {"=", Tok::eq}};
    bool matched = false;
    for (const auto& p : puncts) {
      if (starts(p.text)) {
        out.push_back({p.kind, std::string(p.text), false, here});
        advance(p.text.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      const auto byte = static_cast<unsigned char>(c);
      std::string shown = byte >= 0x20 && byte < 0x7f ? std::string("'") + c + "'"
                                                      : "byte " + std::to_string(byte);
      throw SyntaxError(here, "unexpected character " + shown);
    }
  }
  out.push_back({Tok::end, "", false, at});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Workspace run() {
    while (peek().kind != Tok::end) {
      const auto& t = peek();
      if (is_keyword(t, "category")) category();
      else if (is_keyword(t, "functor")) functor();
      else if (is_keyword(t, "profunctor")) profunctor();
      else if (is_keyword(t, "cell")) cell();
      else fail(t, "'category', 'functor', 'profunctor' or 'cell'");
    }
    return std::move(w_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  static bool is_keyword(const Token& t, std::string_view k) {
    return t.kind == Tok::ident && !t.quoted && t.text == k;
  }

  [[noreturn]] static void fail(const Token& t, const std::string& expected) {
    const std::string found = t.kind == Tok::end ? "end of input"
                              : t.kind == Tok::ident ? "identifier " + quote_if_needed(t.text)
                                                     : "'" + t.text + "'";
    throw SyntaxError(t.at, "expected " + expected + ", found " + found);
  }

  const Token& expect(Tok k) {
    if (peek().kind != k) fail(peek(), describe(k));
    return next();
  }
  const Token& ident() { return expect(Tok::ident); }
  void keyword(std::string_view k) {
    if (!is_keyword(peek(), k)) fail(peek(), "'" + std::string(k) + "'");
    next();
  }

  const CategoryEntry& category_ref(const Token& t) {
    const auto* c = w_.find_category(t.text);
    if (!c) throw ResolutionError(t.at, "unknown category " + quote_if_needed(t.text));
    return *c;
  }

  template <class Entries>
  void fresh(const Entries& list, const Token& t, const char* kind) {
    for (const auto& e : list) {
      if (e.name == t.text) {
        throw ResolutionError(t.at, "duplicate " + std::string(kind) + " " +
                                        quote_if_needed(t.text));
      }
    }
  }

  static ObjectId object_of(const FinCategory& c, const Token& t) {
    auto x = c.find_object(t.text);
    if (!x) {
      throw ResolutionError(t.at, "unknown object " + quote_if_needed(t.text) + " of " +
                                      quote_if_needed(c.name()));
    }
    return *x;
  }
  static ArrowId arrow_of(const FinCategory& c, const Token& t) {
    auto f = c.find_arrow(t.text);
    if (!f) {
      throw ResolutionError(t.at, "unknown arrow " + quote_if_needed(t.text) + " of " +
                                      quote_if_needed(c.name()));
    }
    return *f;
  }

  void category() {
    const Location at = next().at;
    const auto& name = ident();
    fresh(w_.categories, name, "category");
    expect(Tok::lbrace);
    CategoryBuilder b(name.text);
    std::vector<std::string> objects;
    std::set<std::string> arrow_names;
    std::map<std::string, ObjectId> object_index;
    struct Compose {
      Token g, f, h;
    };
    std::vector<Token> arrow_tokens;
    std::vector<Compose> composes;
    while (peek().kind != Tok::rbrace) {
      const auto& t = peek();
      if (is_keyword(t, "objects")) {
        next();
        expect(Tok::colon);
        for (;;) {
          const auto& o = ident();
          if (object_index.count(o.text)) {
            throw ResolutionError(o.at, "duplicate object " + quote_if_needed(o.text));
          }
          if (!arrow_names.insert("1_" + o.text).second) {
            throw ResolutionError(o.at, "identity 1_" + o.text + " clashes with an arrow name");
          }
          object_index.emplace(o.text, static_cast<ObjectId>(objects.size()));
          objects.push_back(o.text);
          b.object(o.text);
          if (peek().kind != Tok::comma) break;
          next();
        }
        expect(Tok::semi);
      } else if (is_keyword(t, "arrow")) {
        next();
        const auto& f = ident();
        expect(Tok::colon);
        const auto& s = ident();
        expect(Tok::arrow);
        const auto& d = ident();
        expect(Tok::semi);
        for (const auto* o : {&s, &d}) {
          if (!object_index.count(o->text)) {
            throw ResolutionError(o->at, "unknown object " + quote_if_needed(o->text));
          }
        }
        if (!arrow_names.insert(f.text).second) {
          throw ResolutionError(f.at, "duplicate arrow " + quote_if_needed(f.text));
        }
        b.arrow(f.text, s.text, d.text);
        arrow_tokens.push_back(f);
      } else if (is_keyword(t, "compose")) {
        next();
        const auto& g = ident();
        expect(Tok::dot);
        const auto& f = ident();
        expect(Tok::eq);
        const auto& h = ident();
        expect(Tok::semi);
        composes.push_back({g, f, h});
      } else {
        fail(t, "'objects', 'arrow', 'compose' or '}'");
      }
    }
    expect(Tok::rbrace);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& c : composes) {
      for (const auto* a : {&c.g, &c.f, &c.h}) {
        if (!arrow_names.count(a->text)) {
          throw ResolutionError(a->at, "unknown arrow " + quote_if_needed(a->text));
        }
      }
      if (!seen.emplace(c.g.text, c.f.text).second) {
        throw ResolutionError(c.g.at, "duplicate compose " + quote_if_needed(c.g.text) + " . " +
                                          quote_if_needed(c.f.text));
      }
      b.compose(c.g.text, c.f.text, c.h.text);
    }
    CatPtr value;
    try {
      value = b.build();
    } catch (const ValidationError& e) {
      throw WorkspaceValidationError(at, e.what());
    }
    w_.categories.push_back({name.text, std::move(value), at});
  }

  void functor() {
    const Location at = next().at;
    const auto& name = ident();
    fresh(w_.functors, name, "functor");
    expect(Tok::colon);
    const auto& src = category_ref(ident());
    expect(Tok::arrow);
    const auto& tgt = category_ref(ident());
    expect(Tok::lbrace);
    const auto& a = *src.value;
    const auto& c = *tgt.value;
    Functor f{src.value, tgt.value, std::vector<ObjectId>(a.num_objects(), kNone),
              std::vector<ArrowId>(a.num_arrows(), kNone), name.text};
    while (peek().kind != Tok::rbrace) {
      const auto& t = peek();
      if (is_keyword(t, "obj")) {
        next();
        const auto& x = ident();
        expect(Tok::darrow);
        const auto& y = ident();
        expect(Tok::semi);
        const auto ox = object_of(a, x);
        if (f.on_objects[ox] != kNone) {
          throw ResolutionError(x.at, "object " + quote_if_needed(x.text) + " mapped twice");
        }
        f.on_objects[ox] = object_of(c, y);
      } else if (is_keyword(t, "arr")) {
        next();
        const auto& u = ident();
        expect(Tok::darrow);
        const auto& v = ident();
        expect(Tok::semi);
        const auto au = arrow_of(a, u);
        if (a.is_identity(au)) {
          throw ResolutionError(u.at, "identity arrows are mapped implicitly");
        }
        if (f.on_arrows[au] != kNone) {
          throw ResolutionError(u.at, "arrow " + quote_if_needed(u.text) + " mapped twice");
        }
        f.on_arrows[au] = arrow_of(c, v);
      } else {
        fail(t, "'obj', 'arr' or '}'");
      }
    }
    expect(Tok::rbrace);
    for (std::size_t x = 0; x < a.num_objects(); ++x) {
      if (f.on_objects[x] == kNone) {
        throw WorkspaceValidationError(at, "functor " + name.text + ": object " +
                                               a.object_name(static_cast<ObjectId>(x)) +
                                               " is not mapped");
      }
      f.on_arrows[a.identity(static_cast<ObjectId>(x))] = c.identity(f.on_objects[x]);
    }
    for (std::size_t u = 0; u < a.num_arrows(); ++u) {
      if (f.on_arrows[u] == kNone) {
        throw WorkspaceValidationError(at, "functor " + name.text + ": arrow " +
                                               a.arrow(static_cast<ArrowId>(u)).name +
                                               " is not mapped");
      }
    }
    const auto rep = validate_functor(f);
    if (!rep.ok()) {
      throw WorkspaceValidationError(at, "functor " + name.text + ": " + rep.violations.front());
    }
    w_.functors.push_back({name.text, src.name, tgt.name, std::move(f), at});
  }

  void profunctor() {
    const Location at = next().at;
    const auto& name = ident();
    fresh(w_.profunctors, name, "profunctor");
    expect(Tok::colon);
    const auto& src = category_ref(ident());
    expect(Tok::proarrow);
    const auto& tgt = category_ref(ident());
    expect(Tok::lbrace);
    const auto& a = *src.value;
    const auto& b = *tgt.value;
    ProfunctorBuilder builder(name.text, src.value, tgt.value);
    std::map<std::string, std::pair<ObjectId, ObjectId>> elements;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    while (peek().kind != Tok::rbrace) {
      const auto& t = peek();
      if (is_keyword(t, "elt")) {
        next();
        const auto& j = ident();
        expect(Tok::colon);
        const auto& x = ident();
        expect(Tok::proarrow);
        const auto& y = ident();
        expect(Tok::semi);
        const auto ox = object_of(a, x);
        const auto oy = object_of(b, y);
        if (!elements.emplace(j.text, std::pair{ox, oy}).second) {
          throw ResolutionError(j.at, "duplicate element " + quote_if_needed(j.text));
        }
        builder.element(j.text, x.text, y.text);
      } else if (is_keyword(t, "act")) {
        next();
        const auto& v = ident();
        expect(Tok::dot);
        const auto& j = ident();
        expect(Tok::dot);
        const auto& u = ident();
        expect(Tok::eq);
        const auto& j2 = ident();
        expect(Tok::semi);
        const auto av = arrow_of(b, v);
        const auto au = arrow_of(a, u);
        auto ej = elements.find(j.text);
        if (ej == elements.end()) {
          throw ResolutionError(j.at, "unknown element " + quote_if_needed(j.text));
        }
        if (!elements.count(j2.text)) {
          throw ResolutionError(j2.at, "unknown element " + quote_if_needed(j2.text));
        }
        if (a.target(au) != ej->second.first || b.source(av) != ej->second.second) {
          throw WorkspaceValidationError(v.at, "profunctor " + name.text + ": act " + v.text +
                                                   " . " + j.text + " . " + u.text +
                                                   " is ill-shaped");
        }
        if (a.is_identity(au) && b.is_identity(av)) {
          throw ResolutionError(v.at, "identity actions are implicit");
        }
        if (!seen.emplace(v.text, j.text, u.text).second) {
          throw ResolutionError(v.at, "duplicate act " + v.text + " . " + j.text + " . " + u.text);
        }
        builder.act(v.text, j.text, u.text, j2.text);
      } else {
        fail(t, "'elt', 'act' or '}'");
      }
    }
    expect(Tok::rbrace);
    ProfPtr value;
    try {
      value = builder.build();
    } catch (const ValidationError& e) {
      throw WorkspaceValidationError(at, e.what());
    }
    w_.profunctors.push_back({name.text, src.name, tgt.name, std::move(value), at});
  }

  void cell() {
    const Location at = next().at;
    const auto& name = ident();
    fresh(w_.cells, name, "cell");
    expect(Tok::colon);
    const auto& jt = ident();
    expect(Tok::darrow);
    const auto& kt = ident();
    keyword("left");
    const auto& ft = ident();
    keyword("right");
    const auto& gt = ident();
    expect(Tok::lbrace);
    const auto* j = w_.find_profunctor(jt.text);
    if (!j) throw ResolutionError(jt.at, "unknown profunctor " + quote_if_needed(jt.text));
    const auto* k = w_.find_profunctor(kt.text);
    if (!k) throw ResolutionError(kt.at, "unknown profunctor " + quote_if_needed(kt.text));
    const auto* f = w_.find_functor(ft.text);
    if (!f) throw ResolutionError(ft.at, "unknown functor " + quote_if_needed(ft.text));
    const auto* g = w_.find_functor(gt.text);
    if (!g) throw ResolutionError(gt.at, "unknown functor " + quote_if_needed(gt.text));
    if (f->source != j->source || f->target != k->source || g->source != j->target ||
        g->target != k->target) {
      throw WorkspaceValidationError(at, "cell " + name.text + ": boundary " + f->name + ", " +
                                             g->name + " does not match " + j->name + " => " +
                                             k->name);
    }
    Cell c{j->value, k->value, f->value, g->value,
           std::vector<ElemId>(j->value->num_elements(), kNone), name.text};
    while (peek().kind != Tok::rbrace) {
      const auto& t = peek();
      if (!is_keyword(t, "map")) fail(t, "'map' or '}'");
      next();
      const auto& x = ident();
      expect(Tok::darrow);
      const auto& y = ident();
      expect(Tok::semi);
      auto ex = j->value->find_element(x.text);
      if (!ex) throw ResolutionError(x.at, "unknown element " + quote_if_needed(x.text));
      auto ey = k->value->find_element(y.text);
      if (!ey) throw ResolutionError(y.at, "unknown element " + quote_if_needed(y.text));
      if (c.map[*ex] != kNone) {
        throw ResolutionError(x.at, "element " + quote_if_needed(x.text) + " mapped twice");
      }
      c.map[*ex] = *ey;
    }
    expect(Tok::rbrace);
    for (std::size_t e = 0; e < c.map.size(); ++e) {
      if (c.map[e] == kNone) {
        throw WorkspaceValidationError(at, "cell " + name.text + ": element " +
                                               j->value->element(static_cast<ElemId>(e)).name +
                                               " is not mapped");
      }
    }
    const auto rep = validate_cell(c);
    if (!rep.ok()) {
      throw WorkspaceValidationError(at, "cell " + name.text + ": " + rep.violations.front());
    }
    w_.cells.push_back({name.text, jt.text, kt.text, ft.text, gt.text, std::move(c), at});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Workspace w_;
};

template <class Entries>
auto find_in(const Entries& list, std::string_view name) -> decltype(&list.front()) {
  for (const auto& e : list) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace

const CategoryEntry* Workspace::find_category(std::string_view name) const {
  return find_in(categories, name);
}
const FunctorEntry* Workspace::find_functor(std::string_view name) const {
  return find_in(functors, name);
}
const ProfunctorEntry* Workspace::find_profunctor(std::string_view name) const {
  return find_in(profunctors, name);
}
const CellEntry* Workspace::find_cell(std::string_view name) const {
  return find_in(cells, name);
}

bool operator==(const Workspace& x, const Workspace& y) {
  auto cats = [](const CategoryEntry& a, const CategoryEntry& b) {
    return a.name == b.name && a.value->name() == b.value->name() && *a.value == *b.value;
  };
  auto funs = [](const FunctorEntry& a, const FunctorEntry& b) {
    return a.name == b.name && a.source == b.source && a.target == b.target && a.value == b.value;
  };
  auto profs = [](const ProfunctorEntry& a, const ProfunctorEntry& b) {
    return a.name == b.name && a.source == b.source && a.target == b.target &&
           a.value->name() == b.value->name() && *a.value == *b.value;
  };
  auto cells = [](const CellEntry& a, const CellEntry& b) {
    return a.name == b.name && a.source == b.source && a.target == b.target &&
           a.left == b.left && a.right == b.right && a.value == b.value;
  };
  return std::equal(x.categories.begin(), x.categories.end(), y.categories.begin(),
                    y.categories.end(), cats) &&
         std::equal(x.functors.begin(), x.functors.end(), y.functors.begin(), y.functors.end(),
                    funs) &&
         std::equal(x.profunctors.begin(), x.profunctors.end(), y.profunctors.begin(),
                    y.profunctors.end(), profs) &&
         std::equal(x.cells.begin(), x.cells.end(), y.cells.begin(), y.cells.end(), cells);
}

Workspace parse(std::string_view text) { return Parser(text).run(); }

Workspace parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool is_bare_identifier(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), bare_char);
}

std::string quote_if_needed(std::string_view name) {
  if (is_bare_identifier(name)) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string serialize(const Workspace& w) {
  std::ostringstream out;
  bool first = true;
  auto gap = [&] {
    if (!first) out << "\n";
    first = false;
  };
  const auto q = [](std::string_view s) { return quote_if_needed(s); };
  for (const auto& e : w.categories) {
    gap();
    const auto& c = *e.value;
    out << "category " << q(e.name) << " {\n";
    if (c.num_objects() > 0) {
      out << "  objects: ";
      for (std::size_t x = 0; x < c.num_objects(); ++x) {
        out << (x ? ", " : "") << q(c.object_name(static_cast<ObjectId>(x)));
      }
      out << ";\n";
    }
    for (std::size_t f = 0; f < c.num_arrows(); ++f) {
      const auto& a = c.arrow(static_cast<ArrowId>(f));
      if (c.is_identity(static_cast<ArrowId>(f))) continue;
      out << "  arrow " << q(a.name) << ": " << q(c.object_name(a.source)) << " -> "
          << q(c.object_name(a.target)) << ";\n";
    }
    for (std::size_t g = 0; g < c.num_arrows(); ++g) {
      const auto gi = static_cast<ArrowId>(g);
      if (c.is_identity(gi)) continue;
      for (auto fi : c.arrows_into(c.source(gi))) {
        if (c.is_identity(fi)) continue;
        out << "  compose " << q(c.arrow(gi).name) << " . " << q(c.arrow(fi).name) << " = "
            << q(c.arrow(c.compose(gi, fi)).name) << ";\n";
      }
    }
    out << "}\n";
  }
  for (const auto& e : w.functors) {
    gap();
    const auto& f = e.value;
    const auto& a = *f.source;
    const auto& c = *f.target;
    out << "functor " << q(e.name) << " : " << q(e.source) << " -> " << q(e.target) << " {\n";
    for (std::size_t x = 0; x < a.num_objects(); ++x) {
      const auto xi = static_cast<ObjectId>(x);
      out << "  obj " << q(a.object_name(xi)) << " => " << q(c.object_name(f.obj(xi))) << ";\n";
    }
    for (std::size_t u = 0; u < a.num_arrows(); ++u) {
      const auto ui = static_cast<ArrowId>(u);
      if (a.is_identity(ui)) continue;
      out << "  arr " << q(a.arrow(ui).name) << " => " << q(c.arrow(f.arr(ui)).name) << ";\n";
    }
    out << "}\n";
  }
  for (const auto& e : w.profunctors) {
    gap();
    const auto& p = *e.value;
    const auto& a = *p.source();
    const auto& b = *p.target();
    out << "profunctor " << q(e.name) << " : " << q(e.source) << " -/-> " << q(e.target)
        << " {\n";
    for (const auto& el : p.elements()) {
      out << "  elt " << q(el.name) << " : " << q(a.object_name(el.a)) << " -/-> "
          << q(b.object_name(el.b)) << ";\n";
    }
    for (std::size_t j = 0; j < p.num_elements(); ++j) {
      const auto ji = static_cast<ElemId>(j);
      const auto& el = p.element(ji);
      for (auto u : a.arrows_into(el.a)) {
        for (auto v : b.arrows_from(el.b)) {
          if (a.is_identity(u) && b.is_identity(v)) continue;
          out << "  act " << q(b.arrow(v).name) << " . " << q(el.name) << " . "
              << q(a.arrow(u).name) << " = " << q(p.element(p.act(u, ji, v)).name) << ";\n";
        }
      }
    }
    out << "}\n";
  }
  for (const auto& e : w.cells) {
    gap();
    const auto& c = e.value;
    out << "cell " << q(e.name) << " : " << q(e.source) << " => " << q(e.target) << " left "
        << q(e.left) << " right " << q(e.right) << " {\n";
    for (std::size_t j = 0; j < c.map.size(); ++j) {
      out << "  map " << q(c.source->element(static_cast<ElemId>(j)).name) << " => "
          << q(c.target->element(c.map[j]).name) << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace dcat::dsl
