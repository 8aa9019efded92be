#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfock/bilinear_action.hpp"
#include "mfock/fock.hpp"
#include "mfock/formal_algebra.hpp"
#include "mfock/wick_currents.hpp"

namespace mfock {

using Complex = std::complex<double>;
using CVector = FockVector<Complex>;
using Momentum = std::array<int, kMaxDim>;

std::string momentum_str(const Momentum& m, int N);

/// Windows of the truncated Fock space: total weight <= L, zero-mode lattice
/// |p_mu| <= P, trajectory oscillator modes |l| <= M.
struct TruncationSpec {
  int N = 2;
  int L = 4;
  int P = 2;
  int M = 2;
  void validate() const;  // throws std::invalid_argument
  std::string str() const;
};

/// Raised when a requested operator cannot be represented inside the windows.
class BoundaryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sparse matrix over the truncated basis, stored by column.
struct OperatorMatrix {
  FockVector<CVector> columns;
  /// Columns whose image lost amplitude to a window.
  std::size_t leaked_columns = 0;
  CVector apply(const CVector& v) const;  // columns absent from the map act as zero
  Complex element(const FockState& row, const FockState& col) const;
};

/// A realized generator: species and indices (as in the formal tables) at a concrete momentum.
struct NumericGenerator {
  Species species = Species::J;
  int adj = -1;
  std::array<int, 3> idx{-1, -1, -1};
  Momentum m{};
  std::string str(int N) const;
  friend auto operator<=>(const NumericGenerator&, const NumericGenerator&) = default;
};

/// Realized generators of the modified current algebra and of diff(N) acting
/// on (trajectory oscillators) x (zero-mode lattice) x (field oscillators).
/// Modes: q(t) = sum_l q_l e^{-ilt}, p(t) = (1/2pi) sum_j p_j e^{-ijt},
/// [p_j, q_l] = delta_{j+l}; p_0 acts as i times the lattice label.
class VertexFock {
 public:
  VertexFock(std::shared_ptr<const CurrentFamily> fam, TruncationSpec spec, FrequencySplit split,
             bool with_T = true);

  const TruncationSpec& spec() const { return spec_; }
  const CurrentFamily& family() const { return *fam_; }
  FrequencySplit split() const { return osc_.split; }
  const Oscillators& oscillators() const { return osc_; }
  bool with_T() const { return with_T_; }

  bool in_window(const FockState& s) const;

  /// k-th Fourier mode of :e^{imq(t)}: (normalized so that E_0[k] = delta_{k0}),
  /// applied to v. Dropped amplitude sets *leaked.
  CVector vertex(const Momentum& m, int k, const CVector& v, bool* leaked = nullptr) const;

  /// Realized generator applied to v: J, G, H (vertex times current modes),
  /// S1, and L (-i :e^{imq} p_mu: + m_nu e^{imq} T^nu_mu).
  CVector apply(const NumericGenerator& g, const CVector& v, bool* leaked = nullptr) const;

  /// Basis states inside the windows with weight <= max_weight, lattice
  /// label with |p_mu| <= lattice_radius; without fields, only the trajectory
  /// sector (field oscillators in their ground state).
  std::vector<FockState> basis(int max_weight, int lattice_radius, bool fields = true) const;

  OperatorMatrix matrix(const NumericGenerator& g, const std::vector<FockState>& columns) const;

 private:
  void vertex_state(const Momentum& m, int k, const FockState& s, const Complex& c, CVector& out,
                    bool* leaked) const;
  void current_term(const Pattern& p, const Momentum& m, const CVector& v, const Complex& scale, CVector& out,
                    bool* leaked) const;
  void settle(CVector& v, bool* leaked) const;

  const detail::BilinearOp<Complex>& op(const Current& c) const;

  std::shared_ptr<const CurrentFamily> fam_;
  std::vector<detail::BilinearOp<Complex>> ops_;  // parallel to fam_->all()
  TruncationSpec spec_;
  Oscillators osc_;
  bool with_T_;
};

/// n-th mode of the vertex operator e^{imq} as a matrix over the trajectory
/// sector basis of the spec; throws BoundaryError if |m_mu| > P.
OperatorMatrix build_vertex(const VertexFock& engine, const Momentum& m, int n);

struct Charges {
  double k = 0, c1 = 0, c2 = 0;
};

/// Charge values the realization should produce for the measured Wick data:
/// k, c1 = k1 + 1 (negative modes annihilate) or k1 - 1 (positive modes
/// annihilate), c2 = k2; without T the current contributions drop out.
Charges predicted_charges(const CurrentFamily& fam, FrequencySplit split, bool with_T);

struct NumericCheckOptions {
  std::vector<Momentum> momenta;   // empty: all m with |m_mu| <= 1
  int source_weight = -1;          // -1: L - 2
  std::size_t max_sources = 0;     // 0: all; otherwise an evenly spaced subset
  double tolerance = 1e-9;
};

struct BracketDeviation {
  std::string bracket;
  double deviation = 0;
};

struct NumericReport {
  TableKind table = TableKind::EMB2;
  TruncationSpec spec;
  std::size_t sources = 0;
  std::size_t brackets = 0;
  std::size_t columns = 0;
  std::size_t leaked_columns = 0;
  double max_deviation = 0;
  double tolerance = 1e-9;
  std::vector<BracketDeviation> worst;  // largest deviations, descending, at most 10
  bool ok() const { return columns > 0 && max_deviation <= tolerance; }
};

/// Compares matrix commutators of the realized generators against the table's
/// right-hand side (charges substituted) on leak-free source columns.
NumericReport check_table_numeric(const AlgebraTable& table, const VertexFock& engine, const Charges& charges,
                                  const NumericCheckOptions& opt = {});

struct FitResult {
  std::vector<double> values;
  double residual = 0;       // max elementwise residual after the fit
  std::size_t equations = 0; // nonzero elements used
};

/// c1, c2 from [L_mu(m), L_nu(n)] - (n_mu L_nu(m+n) - m_nu L_mu(m+n)) =
/// (c1 m_nu n_mu + c2 m_mu n_nu) m_rho S1^rho(m+n) by least squares over
/// momentum pairs with m + n != 0. Needs N >= 2.
FitResult measure_c1_c2(const VertexFock& engine, int source_weight = -1);

/// k from [J^a(m), J^b(n)] - f^{abc} J^c(m+n) = -k delta^{ab} m_rho S1^rho(m+n).
FitResult measure_k_vertex(const VertexFock& engine, int source_weight = -1);

/// N = 1: max deviation of [L(m), L(n)] from (n - m) L(m+n) on safe sources.
double witt_closure_deviation(const VertexFock& engine, int max_mode = 2);

struct ConvergencePoint {
  std::string bracket;
  std::string source;
  double deviation_low = 0;   // at L
  double deviation_high = 0;  // at L + 2 (M + 2)
};

struct ConvergenceReport {
  TruncationSpec low, high;
  std::vector<ConvergencePoint> points;  // near-boundary elements with nonzero deviation at the low cutoff
  bool ok() const;                        // every deviation decreased
};

/// Commutator deviations of the EMB2 / DIFF_EXT brackets on near-boundary
/// sources (weight L - 1 and L) at the given spec, recomputed for the same
/// elements with L and M raised by 2.
ConvergenceReport check_convergence(const AlgebraTable& table, std::shared_ptr<const CurrentFamily> fam,
                                    const TruncationSpec& spec, FrequencySplit split, const Charges& charges,
                                    std::size_t max_sources = 12);

}  // namespace mfock
