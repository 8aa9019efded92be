#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfock/fock.hpp"
#include "mfock/formal_algebra.hpp"
#include "mfock/lie_core.hpp"

namespace mfock {

/// Invalid or inconsistent run configuration (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string algebra = "su2";
  std::string algebra_file;
  std::optional<int> dim;  // commands pick their own default
  std::vector<TableKind> tables{TableKind::MF, TableKind::EMB1, TableKind::CLASSICAL_MF, TableKind::EMB2,
                                TableKind::DIFF_EXT};
  int level = 4;
  int momentum_window = 2;
  int mode_window = 2;
  std::optional<double> tolerance;
  std::string format = "text";
  std::string output;
  bool timestamp = true;
  FrequencySplit split = FrequencySplit::kNegativeModesAnnihilate;
  std::size_t max_sources = 0;  // numeric table sweep; 0 = every safe source

  /// Checks ranges and combinations; throws ConfigError naming the constraint.
  void validate(const std::string& command) const;
  int dim_or(int fallback) const { return dim.value_or(fallback); }
};

/// "su2", "su(3)", ... or the tensor file; throws ConfigError on bad input.
std::shared_ptr<const StructureConstants> load_algebra(const RunConfig& cfg);

FrequencySplit parse_split(const std::string& s);
std::vector<TableKind> parse_tables(const std::string& list);

struct CommandResult {
  nlohmann::ordered_json report;
  bool pass = false;
  std::string diagnostic;  // one line for stderr when the run fails
};

/// Each command validates the config, runs its suite and returns the report body.
CommandResult cmd_verify_lie(const RunConfig& cfg);
CommandResult cmd_verify_tables(const RunConfig& cfg);
CommandResult cmd_verify_fock(const RunConfig& cfg);
CommandResult cmd_measure(const RunConfig& cfg);
CommandResult cmd_report(const RunConfig& cfg);

/// Shared conventions block (normalization, split, zeta, mode transform, signs).
nlohmann::ordered_json conventions(const StructureConstants& sc, FrequencySplit split);

/// Indented "key: value" text rendering with the document's key order.
std::string render_text(const nlohmann::ordered_json& doc);

/// Full document: optional timestamp header, command name, body; text or JSON.
std::string render(const std::string& command, const CommandResult& r, const RunConfig& cfg);

}  // namespace mfock
