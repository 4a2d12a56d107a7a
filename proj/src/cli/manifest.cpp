#include "liereduce/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "liereduce/mongeampere.hpp"
#include "liereduce/parse.hpp"

namespace liereduce::cli {

ManifestError::ManifestError(std::size_t line, std::size_t column, const std::string& what)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}

std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::affine:
      return "affine";
    case MapKind::hodograph:
      return "hodograph";
    case MapKind::point:
      return "point";
  }
  return "?";
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"classify",  "check-symmetry", "check-structure",
                                              "transform", "reduce-ma",      "reproduce"};
  return names;
}

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"example-1", "curvature", "ma-22", "ma-23",
                                              "ma-32",     "ma-33",     "hodograph"};
  return names;
}

JetContext Manifest::context() const {
  FunctionTable ft;
  for (const auto& f : functions) ft.declare(f.name, f.args);
  return JetContext(indep, dep, params, ft);
}

PdeSystem Manifest::system() const {
  std::vector<Expr> eqs;
  for (const auto& e : equations) eqs.push_back(e.residual);
  return PdeSystem(context(), std::move(eqs));
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& v, const std::string& name) {
  for (const auto& d : v)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace

const FieldDecl* Manifest::find_field(const std::string& name) const { return find_named(fields, name); }
const InvariantsDecl* Manifest::find_invariants(const std::string& name) const {
  return find_named(invariants, name);
}
const MapDecl* Manifest::find_map(const std::string& name) const { return find_named(maps, name); }
const MaDecl* Manifest::find_ma(const std::string& name) const { return find_named(ma_specs, name); }

JetContext ma_decl_context(const Manifest& m, std::size_t ma_m, std::size_t ma_n) {
  JetContext ctx = ma_context(ma_m, ma_n);
  for (Symbol p : m.params) ctx.add_param(p);
  for (const auto& f : m.functions) {
    bool in_u = std::all_of(f.args.begin(), f.args.end(), [&](Symbol a) { return ctx.dep_index(a).has_value(); });
    if (in_u && !ctx.functions().declared(f.name)) ctx.add_function(f.name, f.args);
  }
  return ctx;
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Which symbols an expression may mention.
enum class Scope { equation, coordinates, target, ma };

class ManifestParser {
 public:
  explicit ManifestParser(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i)
      if (text_[i] == '\n') line_starts_.push_back(i + 1);
  }

  Manifest parse() {
    for (;;) {
      skip();
      if (pos_ >= text_.size()) break;
      statement();
    }
    return std::move(m_);
  }

 private:
  // ------------------------------------------------------------ positions

  SourcePos position(std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return {line, offset - line_starts_[line - 1] + 1};
  }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& what) const {
    SourcePos p = position(offset);
    throw ManifestError(p.line, p.column, what);
  }
  [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

  std::string found() const {
    if (pos_ >= text_.size()) return "end of input";
    return "'" + std::string(1, text_[pos_]) + "'";
  }

  // ------------------------------------------------------------ lexing

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "', found " + found());
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "', found " + found());
  }

  std::string identifier(const char* what = "identifier") {
    skip();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail(std::string("expected ") + what + ", found " + found());
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Command words and recipe ids: identifier characters plus '-'.
  std::string word() {
    skip();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected name, found " + found());
    std::size_t start = pos_;
    while (pos_ < text_.size() && (is_ident_char(text_[pos_]) || text_[pos_] == '-')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer, found " + found());
    std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 3) fail_at(start, "integer too large");
    return std::stoul(digits);
  }

  /// Text of an expression up to a top-level terminator, with comments
  /// blanked (offsets are preserved), and its start offset.
  std::pair<std::string, std::size_t> expression_text(std::string_view terminators) {
    skip();
    std::size_t start = pos_;
    std::string text;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          text.push_back(' ');
          ++pos_;
        }
        continue;
      }
      if (depth == 0 && terminators.find(c) != std::string_view::npos) break;
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') {
        if (depth == 0) break;
        --depth;
      }
      text.push_back(c);
      ++pos_;
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (text.empty()) fail("expected expression, found " + found());
    return {std::move(text), start};
  }

  // ------------------------------------------------------------ symbols

  void check_new_name(Symbol s, std::size_t at) {
    if (s.name() == "d") fail_at(at, "'d' is reserved for derivatives");
    static const std::set<std::string> keywords{"indep", "dep",  "param", "fn",  "eq",
                                                "field", "invariants", "map", "ma", "run"};
    if (keywords.contains(s.name())) fail_at(at, "'" + s.name() + "' is a reserved word (missing ';'?)");
    if (declared_.contains(s.name())) fail_at(at, "duplicate declaration of '" + s.name() + "'");
    declared_.insert(s.name());
  }

  void check_new_object(const std::string& name, std::size_t at) {
    if (objects_.contains(name)) fail_at(at, "duplicate name '" + name + "'");
    objects_.insert(name);
  }

  static bool contains(const std::vector<Symbol>& v, Symbol s) { return std::find(v.begin(), v.end(), s) != v.end(); }

  bool is_function(Symbol s) const {
    return std::any_of(m_.functions.begin(), m_.functions.end(), [&](const FunctionDecl& f) { return f.name == s; });
  }

  Symbol resolve(const std::string& name, Scope scope) const {
    Symbol s = Symbol::intern(name);
    if (name.rfind("d(", 0) == 0) {
      if (scope != Scope::equation) throw Error("derivative '" + name + "' not allowed here");
      auto comma = name.find(',');
      std::string u = name.substr(2, comma - 2);
      std::string rest = name.substr(comma + 1, name.size() - comma - 2);
      if (rest.find(',') != std::string::npos) throw Error("only first derivatives are allowed: '" + name + "'");
      Symbol us = Symbol::intern(u), xs = Symbol::intern(rest);
      if (!contains(m_.dep, us)) throw Error("undeclared dependent variable '" + u + "'");
      if (!contains(m_.indep, xs)) throw Error("undeclared independent variable '" + rest + "'");
      return s;
    }
    if (contains(m_.params, s)) return s;
    switch (scope) {
      case Scope::equation:
      case Scope::coordinates:
        if (contains(m_.indep, s) || contains(m_.dep, s) || is_function(s)) return s;
        break;
      case Scope::target:
        if (contains(target_names_, s)) return s;
        break;
      case Scope::ma:
        if (ma_ctx_ && (ma_ctx_->dep_index(s) || ma_ctx_->functions().declared(s))) return s;
        break;
    }
    throw Error("undeclared symbol '" + name + "'");
  }

  Expr expression(std::string_view terminators, Scope scope) {
    auto [text, start] = expression_text(terminators);
    FunctionTable ft;
    if (scope == Scope::ma) {
      ft = ma_ctx_->functions();
    } else {
      for (const auto& f : m_.functions) ft.declare(f.name, f.args);
    }
    try {
      return parse_expr(
          text, [&](const std::string& name) { return resolve(name, scope); }, &ft);
    } catch (const ExprParseError& e) {
      fail_at(start + std::min(e.offset(), text.size()), e.reason());
    } catch (const Error& e) {
      fail_at(start, e.what());
    }
  }

  /// expr (',' expr)* up to `close` (not consumed).
  std::vector<Expr> expression_list(char close, Scope scope, std::string_view terminators = ",;") {
    std::vector<Expr> out;
    if (peek(close)) return out;
    std::string term(terminators);
    term.push_back(close);
    do {
      out.push_back(expression(term, scope));
    } while (accept(','));
    return out;
  }

  // ------------------------------------------------------------ statements

  void statement() {
    std::size_t start = pos_;
    std::string kw = identifier("statement keyword");
    if (kw == "indep" || kw == "dep" || kw == "param") {
      symbol_list(kw == "indep" ? m_.indep : kw == "dep" ? m_.dep : m_.params, kw);
    } else if (kw == "fn") {
      function_decl();
    } else if (kw == "eq") {
      equation(start);
    } else if (kw == "field") {
      field(start);
    } else if (kw == "invariants") {
      invariants(start);
    } else if (kw == "map") {
      map(start);
    } else if (kw == "ma") {
      ma(start);
    } else if (kw == "run") {
      run(start);
    } else {
      fail_at(start, "unknown statement '" + kw +
                         "' (expected one of indep, dep, param, fn, eq, field, invariants, map, ma, run)");
    }
    expect(';');
  }

  void check_no_objects(const std::string& kw) {
    if (!m_.equations.empty() || !m_.fields.empty() || !m_.invariants.empty() || !m_.maps.empty())
      fail("'" + kw + "' declarations must precede equations, fields, invariants and maps");
  }

  void symbol_list(std::vector<Symbol>& into, const std::string& kw) {
    if (kw != "param") check_no_objects(kw);
    do {
      skip();
      std::size_t at = pos_;
      Symbol s = Symbol::intern(identifier());
      check_new_name(s, at);
      into.push_back(s);
      skip();
    } while (pos_ < text_.size() && is_ident_start(text_[pos_]));
  }

  void function_decl() {
    check_no_objects("fn");
    skip();
    std::size_t at = pos_;
    Symbol f = Symbol::intern(identifier("function name"));
    check_new_name(f, at);
    expect('(');
    std::vector<Symbol> args;
    if (!peek(')')) {
      do {
        skip();
        std::size_t a = pos_;
        Symbol s = Symbol::intern(identifier("argument"));
        if (!contains(m_.dep, s)) fail_at(a, "function argument '" + s.name() + "' is not a dependent variable");
        if (contains(args, s)) fail_at(a, "repeated argument '" + s.name() + "'");
        args.push_back(s);
      } while (accept(','));
    }
    expect(')');
    if (args.empty()) fail_at(at, "arity mismatch: function '" + f.name() + "' needs at least one argument");
    m_.functions.push_back({f, std::move(args)});
  }

  /// Optional "name :" prefix.
  std::optional<std::string> label() {
    skip();
    std::size_t save = pos_;
    if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      std::string name = identifier();
      if (accept(':')) return name;
    }
    pos_ = save;
    return std::nullopt;
  }

  void equation(std::size_t start) {
    auto name = label();
    skip();
    std::size_t at = pos_;
    Expr lhs = expression("=;", Scope::equation);
    expect('=');
    Expr rhs = expression(";", Scope::equation);
    Expr residual = lhs - rhs;
    if (residual.is_zero()) fail_at(at, "equation is identically zero");
    try {
      (void)decompose_equation(m_.context(), residual);
    } catch (const Error& e) {
      fail_at(at, e.what());
    }
    std::string n = name ? *name : "e" + std::to_string(m_.equations.size() + 1);
    check_new_object(n, start);
    m_.equations.push_back({n, residual, position(start)});
  }

  void field(std::size_t start) {
    std::string name = identifier("field name");
    check_new_object(name, start);
    expect('=');
    expect('[');
    JetContext ctx;
    try {
      ctx = m_.context();
    } catch (const Error& e) {
      fail_at(start, e.what());
    }
    VectorField X = VectorField::zero(ctx);
    std::set<std::string> seen;
    if (!peek(']')) {
      do {
        skip();
        std::size_t at = pos_;
        Symbol v = Symbol::intern(identifier("coordinate"));
        if (seen.contains(v.name())) fail_at(at, "repeated component '" + v.name() + "'");
        seen.insert(v.name());
        expect(':');
        Expr c = expression(",]", Scope::coordinates);
        if (auto i = ctx.indep_index(v)) {
          X.xi[*i] = c;
        } else if (auto a = ctx.dep_index(v)) {
          X.eta[*a] = c;
        } else {
          fail_at(at, "'" + v.name() + "' is not a coordinate");
        }
      } while (accept(','));
    }
    expect(']');
    m_.fields.push_back({name, X, position(start)});
  }

  void invariants(std::size_t start) {
    std::string name = identifier("invariants name");
    check_new_object(name, start);
    expect('=');
    expect('[');
    auto exprs = expression_list(']', Scope::coordinates);
    expect(']');
    m_.invariants.push_back({name, std::move(exprs), position(start)});
  }

  std::vector<Symbol> target_symbols() {
    std::vector<Symbol> out;
    if (peek(';') || peek(')')) return out;
    do {
      skip();
      std::size_t at = pos_;
      Symbol s = Symbol::intern(identifier("target variable"));
      if (contains(out, s) || contains(target_names_, s)) fail_at(at, "repeated target variable '" + s.name() + "'");
      if (contains(m_.params, s) || is_function(s)) fail_at(at, "target variable '" + s.name() + "' clashes");
      out.push_back(s);
      target_names_.push_back(s);
    } while (accept(','));
    return out;
  }

  static std::vector<Symbol> default_targets(const std::string& prefix, std::size_t k) {
    std::vector<Symbol> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back(Symbol::intern(prefix + std::to_string(i)));
    return out;
  }

  void arity(std::size_t at, const std::string& what, std::size_t got, std::size_t want) {
    if (got != want)
      fail_at(at, "arity mismatch: " + what + " needs " + std::to_string(want) + " entries, got " +
                      std::to_string(got));
  }

  void map(std::size_t start) {
    std::string name = identifier("map name");
    check_new_object(name, start);
    expect('=');
    skip();
    std::size_t kind_at = pos_;
    std::string kind = identifier("map kind");
    const std::size_t n = m_.indep.size(), mm = m_.dep.size();
    MapDecl d;
    d.name = name;
    d.pos = position(start);
    if (kind == "affine") {
      d.kind = MapKind::affine;
      expect('(');
      skip();
      std::size_t at = pos_;
      d.forward = expression_list(')', Scope::coordinates);
      expect(')');
      arity(at, "affine map", d.forward.size(), n);
    } else if (kind == "hodograph") {
      d.kind = MapKind::hodograph;
      if (n != 2 || mm != 2) fail_at(kind_at, "arity mismatch: hodograph needs two independent and two dependent variables");
    } else if (kind == "point") {
      d.kind = MapKind::point;
      expect('(');
      skip();
      std::size_t at = pos_;
      d.forward = expression_list(';', Scope::coordinates);
      arity(at, "point map Z", d.forward.size(), n);
      expect(';');
      skip();
      at = pos_;
      auto W = expression_list(')', Scope::coordinates);
      arity(at, "point map W", W.size(), mm);
      d.forward.insert(d.forward.end(), W.begin(), W.end());
      expect(')');
    } else {
      fail_at(kind_at, "unknown map kind '" + kind + "' (expected affine, hodograph or point)");
    }
    target_names_.clear();
    if (accept("->")) {
      expect('(');
      skip();
      std::size_t at = pos_;
      d.z = target_symbols();
      arity(at, "target independent variables", d.z.size(), n);
      expect(';');
      skip();
      at = pos_;
      d.w = target_symbols();
      arity(at, "target dependent variables", d.w.size(), mm);
      expect(')');
    } else {
      d.z = default_targets("z", n);
      d.w = default_targets("w", mm);
      target_names_ = d.z;
      target_names_.insert(target_names_.end(), d.w.begin(), d.w.end());
    }
    for (Symbol s : target_names_)
      if (contains(m_.params, s) || is_function(s)) fail_at(start, "target variable '" + s.name() + "' clashes");
    if (d.kind == MapKind::point) {
      expect("inverse");
      expect('(');
      skip();
      std::size_t at = pos_;
      d.inverse = expression_list(';', Scope::target);
      arity(at, "inverse x", d.inverse.size(), n);
      expect(';');
      skip();
      at = pos_;
      auto U = expression_list(')', Scope::target);
      arity(at, "inverse u", U.size(), mm);
      d.inverse.insert(d.inverse.end(), U.begin(), U.end());
      expect(')');
    }
    target_names_.clear();
    m_.maps.push_back(std::move(d));
  }

  void ma(std::size_t start) {
    std::string name = identifier("spec name");
    check_new_object(name, start);
    expect('(');
    skip();
    std::size_t at = pos_;
    std::size_t mm = integer();
    expect(',');
    std::size_t n = integer();
    expect(')');
    if (mm < 1 || n < 1 || mm > 6 || n > 6) fail_at(at, "Monge–Ampère dimensions must lie in 1..6");
    ma_ctx_ = ma_decl_context(m_, mm, n);
    MaDecl d;
    d.name = name;
    d.m = mm;
    d.n = n;
    d.pos = position(start);
    const std::size_t width = ma_table_width(mm, n);
    expect('=');
    expect('[');
    if (!peek(']')) {
      do {
        skip();
        std::size_t row_at = pos_;
        expect('[');
        auto row = expression_list(']', Scope::ma);
        expect(']');
        arity(row_at, "kappa row", row.size(), width);
        d.table.push_back(std::move(row));
      } while (accept(','));
    }
    expect(']');
    if (d.table.empty()) fail_at(at, "arity mismatch: spec needs at least one equation");
    skip();
    std::size_t f_at = pos_;
    if (accept("f")) {
      expect('(');
      d.f = expression_list(')', Scope::ma);
      expect(')');
      arity(f_at, "f", d.f.size(), n);
    }
    ma_ctx_.reset();
    m_.ma_specs.push_back(std::move(d));
  }

  void run(std::size_t start) {
    std::string cmd = word();
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), cmd) == names.end()) fail_at(start, "unknown command '" + cmd + "'");
    RunDecl r;
    r.command = cmd;
    r.pos = position(start);
    for (;;) {
      skip();
      if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) break;
      std::size_t at = pos_;
      std::string arg = word();
      check_reference(cmd, arg, at);
      r.args.push_back(arg);
    }
    std::size_t want_min = cmd == "classify" ? 0 : 1;
    std::size_t want_max = cmd == "classify" ? 0 : cmd == "check-structure" ? 64 : 1;
    if (r.args.size() < want_min || r.args.size() > want_max)
      fail_at(start, "arity mismatch: '" + cmd + "' takes " +
                         (cmd == "classify"          ? std::string("no arguments")
                          : cmd == "check-structure" ? std::string("one or more names")
                                                     : std::string("exactly one argument")));
    m_.runs.push_back(std::move(r));
  }

  void check_reference(const std::string& cmd, const std::string& arg, std::size_t at) {
    bool ok = false;
    if (cmd == "check-symmetry") ok = m_.find_field(arg) != nullptr;
    if (cmd == "check-structure") ok = m_.find_field(arg) != nullptr || m_.find_invariants(arg) != nullptr;
    if (cmd == "transform") ok = m_.find_map(arg) != nullptr;
    if (cmd == "reduce-ma") ok = m_.find_ma(arg) != nullptr;
    if (cmd == "reproduce") {
      const auto& r = recipe_names();
      ok = std::find(r.begin(), r.end(), arg) != r.end();
    }
    if (cmd == "classify") ok = true;
    if (!ok) fail_at(at, "unresolved reference '" + arg + "' for '" + cmd + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  Manifest m_;
  std::set<std::string> declared_, objects_;
  std::vector<Symbol> target_names_;
  std::optional<JetContext> ma_ctx_;
};

std::string join(const std::vector<Expr>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].to_string();
  return out;
}

std::string join(const std::vector<Symbol>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i].name();
  return out;
}

}  // namespace

Manifest parse_manifest(std::string_view text) { return ManifestParser(text).parse(); }

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string print_manifest(const Manifest& m) {
  std::ostringstream out;
  if (!m.indep.empty()) out << "indep " << join(m.indep, " ") << ";\n";
  if (!m.dep.empty()) out << "dep " << join(m.dep, " ") << ";\n";
  if (!m.params.empty()) out << "param " << join(m.params, " ") << ";\n";
  for (const auto& f : m.functions) out << "fn " << f.name.name() << "(" << join(f.args, ", ") << ");\n";
  for (const auto& e : m.equations) out << "eq " << e.name << ": " << e.residual.to_string() << " = 0;\n";
  for (const auto& f : m.fields) {
    out << "field " << f.name << " = [";
    bool first = true;
    auto component = [&](Symbol v, const Expr& c) {
      if (c.is_zero()) return;
      out << (first ? "" : ", ") << v.name() << ": " << c.to_string();
      first = false;
    };
    for (std::size_t i = 0; i < m.indep.size(); ++i) component(m.indep[i], f.field.xi[i]);
    for (std::size_t a = 0; a < m.dep.size(); ++a) component(m.dep[a], f.field.eta[a]);
    out << "];\n";
  }
  for (const auto& inv : m.invariants) out << "invariants " << inv.name << " = [" << join(inv.exprs) << "];\n";
  for (const auto& d : m.maps) {
    out << "map " << d.name << " = " << to_string(d.kind);
    const std::size_t n = d.z.size();
    if (d.kind == MapKind::affine) out << "(" << join(d.forward) << ")";
    if (d.kind == MapKind::point) {
      std::vector<Expr> Z(d.forward.begin(), d.forward.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<Expr> W(d.forward.begin() + static_cast<std::ptrdiff_t>(n), d.forward.end());
      out << "(" << join(Z) << "; " << join(W) << ")";
    }
    out << " -> (" << join(d.z, ", ") << "; " << join(d.w, ", ") << ")";
    if (d.kind == MapKind::point) {
      std::vector<Expr> X(d.inverse.begin(), d.inverse.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<Expr> U(d.inverse.begin() + static_cast<std::ptrdiff_t>(n), d.inverse.end());
      out << " inverse(" << join(X) << "; " << join(U) << ")";
    }
    out << ";\n";
  }
  for (const auto& d : m.ma_specs) {
    out << "ma " << d.name << "(" << d.m << ", " << d.n << ") = [";
    for (std::size_t i = 0; i < d.table.size(); ++i) out << (i ? ", " : "") << "[" << join(d.table[i]) << "]";
    out << "]";
    if (!d.f.empty()) out << " f(" << join(d.f) << ")";
    out << ";\n";
  }
  for (const auto& r : m.runs) {
    out << "run " << r.command;
    for (const auto& a : r.args) out << " " << a;
    out << ";\n";
  }
  return out.str();
}

}  // namespace liereduce::cli
