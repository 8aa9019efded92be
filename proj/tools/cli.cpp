#include "cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "mfock/report.hpp"

namespace mfock {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification engine for modified current algebras and their Fock realizations", "mfock"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

  std::string tables = "MF,EMB1,CLASSICAL_MF,EMB2,DIFF_EXT";
  std::string split = "negative";
  int dim = 0;
  double tolerance = 0;
  bool no_timestamp = false;
  RunConfig cfg;

  auto* o_alg = app.add_option("--algebra", cfg.algebra, "Built-in algebra: su2, su3, ... (su(n) also accepted)");
  app.add_option("--algebra-file", cfg.algebra_file, "Structure-constant file (lines 'f a b c value' / 'd a b c value')")
      ->excludes(o_alg);
  auto* o_dim = app.add_option("--dim", dim, "Spacetime dimension N (1..4)");
  app.add_option("--tables", tables, "Comma-separated tables: MF, EMB1, CLASSICAL_MF, EMB2, DIFF_EXT");
  app.add_option("--level", cfg.level, "Truncation weight L of the Fock spaces");
  app.add_option("--momentum-window", cfg.momentum_window, "Zero-mode lattice window P");
  app.add_option("--mode-window", cfg.mode_window, "Trajectory oscillator mode window M");
  auto* o_tol = app.add_option("--tolerance", tolerance, "Numeric tolerance for charge fits and commutator checks");
  app.add_option("--format", cfg.format, "Report format: text or json");
  app.add_option("--output", cfg.output, "Write the report to this file instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp header");
  app.add_option("--split", split, "Frequency split: negative (default) or positive modes annihilate");
  app.add_option("--max-sources", cfg.max_sources, "Cap on source states in the numeric table sweep (0 = all)");

  using Command = std::function<CommandResult(const RunConfig&)>;
  const std::map<std::string, Command> commands{
      {"verify-lie", cmd_verify_lie},     {"verify-tables", cmd_verify_tables}, {"verify-fock", cmd_verify_fock},
      {"measure", cmd_measure},           {"report", cmd_report},
  };
  const std::map<std::string, std::string> help{
      {"verify-lie", "Check the structure-constant identities"},
      {"verify-tables", "Jacobi sweeps, the EMB1 obstruction and the table embeddings"},
      {"verify-fock", "Wick commutators against the truncated Fock matrix oracle"},
      {"measure", "Measure k, k1, k2, c1, c2 and check the realized DIFF_EXT brackets"},
      {"report", "Run all suites"},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (o_dim->count()) cfg.dim = dim;
    if (o_tol->count()) cfg.tolerance = tolerance;
    cfg.timestamp = !no_timestamp;
    cfg.split = parse_split(split);
    cfg.tables = parse_tables(tables);
    const CommandResult r = commands.at(command)(cfg);
    const std::string doc = render(command, r, cfg);
    if (cfg.output.empty()) {
      out << doc;
    } else {
      std::ofstream f(cfg.output);
      if (!f) throw ConfigError("cannot write " + cfg.output);
      f << doc;
    }
    if (!r.pass) {
      err << r.diagnostic << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    // invalid_argument from the library, BoundaryError from too small windows
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mfock
