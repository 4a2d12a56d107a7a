#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liereduce/liealg.hpp"

/// The manifest DSL (grammar in docs/grammar.ebnf): declarations of a jet
/// context, equations, vector fields, invariants, point transformations,
/// Monge–Ampère specs and a list of commands.
namespace liereduce::cli {

/// Syntax or resolution error with a 1-based source position.
class ManifestError : public Error {
 public:
  ManifestError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct SourcePos {
  std::size_t line = 1, column = 1;
};

struct FunctionDecl {
  Symbol name;
  std::vector<Symbol> args;
  friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

/// Equation "lhs = rhs" stored as the residual lhs - rhs.
struct EquationDecl {
  std::string name;
  Expr residual;
  SourcePos pos;
  friend bool operator==(const EquationDecl& a, const EquationDecl& b) {
    return a.name == b.name && a.residual == b.residual;
  }
};

struct FieldDecl {
  std::string name;
  VectorField field;
  SourcePos pos;
  friend bool operator==(const FieldDecl& a, const FieldDecl& b) { return a.name == b.name && a.field == b.field; }
};

/// Candidate invariants w(x,u) for the structure check.
struct InvariantsDecl {
  std::string name;
  std::vector<Expr> exprs;
  SourcePos pos;
  friend bool operator==(const InvariantsDecl& a, const InvariantsDecl& b) {
    return a.name == b.name && a.exprs == b.exprs;
  }
};

enum class MapKind { affine, hodograph, point };
std::string to_string(MapKind k);

struct MapDecl {
  std::string name;
  MapKind kind = MapKind::affine;
  /// affine: f_1..f_n; point: Z_1..Z_n then W_1..W_m; hodograph: empty.
  std::vector<Expr> forward;
  /// point only: x_1..x_n then u_1..u_m in target coordinates.
  std::vector<Expr> inverse;
  std::vector<Symbol> z, w;  // target names
  SourcePos pos;
  friend bool operator==(const MapDecl& a, const MapDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.forward == b.forward && a.inverse == b.inverse && a.z == b.z &&
           a.w == b.w;
  }
};

/// Monge–Ampère spec: rows of kappa^i_j in table order (labels from 0 when
/// m = n, from 1 otherwise) and optionally the functions f_i(u).
struct MaDecl {
  std::string name;
  std::size_t m = 2, n = 2;
  std::vector<std::vector<Expr>> table;
  std::vector<Expr> f;  // empty: solve the constant case
  SourcePos pos;
  friend bool operator==(const MaDecl& a, const MaDecl& b) {
    return a.name == b.name && a.m == b.m && a.n == b.n && a.table == b.table && a.f == b.f;
  }
};

struct RunDecl {
  std::string command;
  std::vector<std::string> args;
  SourcePos pos;
  friend bool operator==(const RunDecl& a, const RunDecl& b) { return a.command == b.command && a.args == b.args; }
};

struct Manifest {
  std::vector<Symbol> indep, dep, params;
  std::vector<FunctionDecl> functions;
  std::vector<EquationDecl> equations;
  std::vector<FieldDecl> fields;
  std::vector<InvariantsDecl> invariants;
  std::vector<MapDecl> maps;
  std::vector<MaDecl> ma_specs;
  std::vector<RunDecl> runs;

  JetContext context() const;
  PdeSystem system() const;
  const FieldDecl* find_field(const std::string& name) const;
  const InvariantsDecl* find_invariants(const std::string& name) const;
  const MapDecl* find_map(const std::string& name) const;
  const MaDecl* find_ma(const std::string& name) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Commands accepted by `run` statements and the command line.
const std::vector<std::string>& command_names();
/// Recipe identifiers accepted by `reproduce`.
const std::vector<std::string>& recipe_names();

Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::string& path);
/// Canonical text; parse_manifest(print_manifest(m)) == m.
std::string print_manifest(const Manifest& m);

/// Context of a Monge–Ampère declaration: x1..xn, u1..um, f1..fn plus the
/// manifest's parameters and the functions whose arguments are among u.
JetContext ma_decl_context(const Manifest& m, std::size_t ma_m, std::size_t ma_n);

}  // namespace liereduce::cli
