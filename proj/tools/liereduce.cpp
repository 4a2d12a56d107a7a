// liereduce <command> -f <manifest-file> [--format text|kv]
//           [--multiplier-degree k] [--search-radius r]
// Exit codes: 0 pass, 1 fail / not found, 2 error.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liereduce/cli.hpp"

int main(int argc, char** argv) {
  using namespace liereduce::cli;
  CLI::App app{"liereduce: symmetry-based reduction of first-order PDE systems"};
  app.set_help_flag("-h,--help", "Print this help message and exit");
  std::string command;
  std::vector<std::string> args;
  std::string file;
  std::string format = "text";
  int multiplier_degree = -1;
  int search_radius = 5;
  app.add_option("command", command,
                 "classify | check-symmetry <field> | check-structure <fields...> | transform <map> | "
                 "reduce-ma <spec> | reproduce <example-id> | run")
      ->required();
  app.add_option("args", args, "Command arguments");
  app.add_option("-f,--file", file, "Manifest file");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "kv"}));
  app.add_option("--multiplier-degree", multiplier_degree, "Multiplier degree bound for check-symmetry")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--search-radius", search_radius, "Rational search radius for shift/beta search")
      ->check(CLI::Range(1, 50));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunOptions options;
    if (multiplier_degree >= 0) options.multiplier_degree = multiplier_degree;
    options.search_radius = search_radius;
    options.seed = seed_from_environment();
    Format fmt = format == "kv" ? Format::kv : Format::text;

    Report report;
    if (command == "reproduce" && file.empty()) {
      if (args.size() != 1) throw liereduce::Error("'reproduce' takes exactly one example id");
      const auto& ids = recipe_names();
      if (std::find(ids.begin(), ids.end(), args[0]) == ids.end()) {
        std::cerr << "not found: example id '" << args[0] << "'\n";
        return 1;
      }
      report = reproduce(args[0], options);
    } else {
      if (file.empty()) throw liereduce::Error("missing manifest: use -f <manifest-file>");
      Manifest manifest = load_manifest(file);
      if (command == "run") {
        if (!args.empty()) throw liereduce::Error("'run' takes no arguments");
        report = run_all(manifest, options);
      } else {
        report = run_command(manifest, command, args, options);
      }
    }
    std::cout << emit(report, fmt);
    return report.pass ? 0 : 1;
  } catch (const ManifestError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
