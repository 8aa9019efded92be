#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfock/fock.hpp"
#include "mfock/wick_currents.hpp"

namespace mfock {

/// Field-sector basis states (no trajectory quanta, lattice at the origin)
/// of truncation weight <= max_weight.
std::vector<FockState> enumerate_field_states(const FieldLayout& layout, const Oscillators& osc, int max_weight);

/// Exact action of the mode X_n = sum_k c_ij :a_i(k) b_j(n-k): on a basis
/// state, by applying the ladder operators one at a time. Only finitely many
/// k contribute, so no cutoff enters.
FockVector<Surd> apply_current(const Pattern& pattern, int n, const FockState& state, const Oscillators& osc);

struct OracleOptions {
  int level = 4;               // truncation weight L of the matrix representation
  int source_weight = -1;      // columns checked; -1 means L - 2
  std::vector<int> modes{-1, 0, 1};
  bool include_T = false;
  /// Split used on the Wick side; defaults to the Fock split. A different
  /// value must produce mismatches in the anomalous brackets.
  std::optional<FrequencySplit> wick_split;
};

struct OracleMismatch {
  std::string x, y;
  int m = 0, n = 0;
  std::string source;
  std::string detail;
};

struct OracleReport {
  std::size_t sources = 0;
  std::size_t columns = 0;           // (pair, modes, source) columns compared
  std::size_t leaked_columns = 0;    // skipped: an intermediate state left the truncation
  std::size_t elements = 0;          // nonzero matrix elements compared
  std::vector<OracleMismatch> mismatches;
  bool exact_rational = false;       // arithmetic ran over Q instead of the surd field
  bool ok() const { return mismatches.empty() && columns > 0; }
};

/// Compares Wick commutators against commutators of truncated Fock matrices:
/// for every current pair and mode pair, (X Y - Y X)|s> with the products
/// taken inside the weight-L truncation must equal the predicted bilinear at
/// m + n plus the anomaly times |s>, on every element of weight <= L.
OracleReport verify_fock(const CurrentFamily& fam, FrequencySplit split, const OracleOptions& opt);

}  // namespace mfock
