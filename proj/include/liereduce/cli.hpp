#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liereduce/manifest.hpp"
#include "liereduce/transform.hpp"

namespace liereduce::cli {

enum class Format { text, kv };

/// Ordered key/value report. Keys are dotted paths (documented in the
/// README); values are single-line strings. `pass` decides the exit code.
struct Report {
  std::vector<std::pair<std::string, std::string>> entries;
  bool pass = true;

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, bool value);
  void add(const std::string& key, std::size_t value);
  void add(const std::string& key, int value);
  void add(const std::string& key, const Expr& value);
  void add(const std::string& key, const Rational& value);
  /// Records a boolean check and folds it into `pass`.
  void check(const std::string& key, bool ok);
  /// Appends another report's entries under `prefix.`; folds its pass flag.
  void append(const std::string& prefix, const Report& other);
  /// Value of the first entry with `key`, if any.
  std::optional<std::string> get(const std::string& key) const;
};

/// text: "key: value" lines; kv: "key=value" lines. A non-empty report ends
/// with a "status" record (pass/fail); an empty report emits nothing.
std::string emit(const Report& report, Format format);

struct RunOptions {
  std::optional<int> multiplier_degree;
  int search_radius = 5;
  std::uint64_t seed = 0;
  std::size_t jet_samples = 100;
};

/// Runs one command (see command_names()) against a manifest. Errors
/// (unresolved references, malformed input) throw liereduce::Error.
Report run_command(const Manifest& manifest, const std::string& command, const std::vector<std::string>& args,
                   const RunOptions& options);
/// Runs every `run` statement of the manifest, prefixing entries with
/// "run.<k>".
Report run_all(const Manifest& manifest, const RunOptions& options);

/// Named reproduction recipes (see recipe_names()).
Report reproduce(const std::string& recipe, const RunOptions& options);

// Individual commands (exposed for tests).
Report classify(const PdeSystem& sys, const std::vector<std::string>& names = {});
Report check_symmetry(const Manifest& m, const std::string& field, const RunOptions& options);
Report check_structure(const Manifest& m, const std::vector<std::string>& names);
Report transform(const Manifest& m, const std::string& map, const RunOptions& options);
Report reduce_ma(const Manifest& m, const std::string& spec, const RunOptions& options);

/// Point transformation of a map declaration over the manifest context.
PointTransformation build_map(const Manifest& m, const MapDecl& decl);

/// Seed from LIEREDUCE_SEED (default 0); throws on a malformed value.
std::uint64_t seed_from_environment();

}  // namespace liereduce::cli
