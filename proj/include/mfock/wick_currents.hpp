#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfock/fock.hpp"
#include "mfock/lie_core.hpp"

namespace mfock {

/// zeta^{a mu nu}: the paper declares it symmetric, but [G,G] = d H with
/// symmetric d forces H, and so zeta, to be antisymmetric (see README).
enum class ZetaSymmetry { kAntisymmetric, kSymmetric };
std::string to_string(ZetaSymmetry z);

/// Enumeration of field oscillator components: phi^a, psi^{a mu}, and the
/// independent zeta^{a mu nu} (mu < nu, or mu <= nu when symmetric).
class FieldLayout {
 public:
  FieldLayout(int dim, int N, ZetaSymmetry zeta);
  int dim() const { return dim_; }
  int N() const { return N_; }
  ZetaSymmetry zeta_symmetry() const { return zeta_; }
  int size() const { return size_; }
  int species_per_adjoint() const { return 1 + N_ + static_cast<int>(pairs_.size()); }
  int phi(int a) const { return a; }
  int psi(int a, int mu) const { return dim_ + a * N_ + mu; }
  /// Index and sign of zeta^{a mu nu} in terms of the stored component; sign 0 if it vanishes.
  std::pair<int, int> zeta(int a, int mu, int nu) const;
  const std::vector<std::pair<int, int>>& zeta_pairs() const { return pairs_; }
  std::string label(int i) const;

 private:
  int dim_, N_;
  ZetaSymmetry zeta_;
  std::vector<std::pair<int, int>> pairs_;
  int size_;
};

/// Coefficient pattern c_{ij} of the bilinear sum_k :a_i(k) b_j(n-k):.
class Pattern {
 public:
  using Map = std::map<std::pair<int, int>, Surd>;
  const Map& entries() const { return m_; }
  bool is_zero() const { return m_.empty(); }
  void add(int i, int j, const Surd& v);
  Pattern& operator+=(const Pattern& o);
  Pattern& operator-=(const Pattern& o);
  friend Pattern operator+(Pattern a, const Pattern& b) { return a += b; }
  friend Pattern operator-(Pattern a, const Pattern& b) { return a -= b; }
  friend Pattern operator*(const Surd& s, const Pattern& p);
  friend bool operator==(const Pattern& a, const Pattern& b) { return a.m_ == b.m_; }
  /// Matrix product and commutator.
  friend Pattern operator*(const Pattern& a, const Pattern& b);
  static Pattern commutator(const Pattern& a, const Pattern& b) { return a * b - b * a; }
  /// tr(a b)
  static Surd trace_product(const Pattern& a, const Pattern& b);

 private:
  Map m_;
};

enum class CurrentSpecies { J, G, H, T };
std::string to_string(CurrentSpecies s);

struct CurrentLabel {
  CurrentSpecies species = CurrentSpecies::J;
  int adj = -1;  // J, G, H
  int mu = -1;   // G, H, T (upper index of T)
  int nu = -1;   // H, T (lower index of T)
  std::string str() const;
  friend auto operator<=>(const CurrentLabel&, const CurrentLabel&) = default;
};

struct Current {
  CurrentLabel label;
  Pattern pattern;
};

/// The normal-ordered currents J, G, H and the gl(N) currents T on one Fock space.
class CurrentFamily {
 public:
  CurrentFamily(std::shared_ptr<const StructureConstants> sc, int N,
                ZetaSymmetry zeta = ZetaSymmetry::kAntisymmetric);

  const StructureConstants& sc() const { return *sc_; }
  std::shared_ptr<const StructureConstants> sc_ptr() const { return sc_; }
  int N() const { return layout_.N(); }
  const FieldLayout& layout() const { return layout_; }

  const Current& J(int a) const { return currents_[index_.at({CurrentSpecies::J, a, -1, -1})]; }
  const Current& G(int a, int mu) const { return currents_[index_.at({CurrentSpecies::G, a, mu, -1})]; }
  /// H^{a mu nu} for stored index pairs (mu < nu, or mu <= nu when symmetric).
  const Current& H(int a, int mu, int nu) const { return currents_[index_.at({CurrentSpecies::H, a, mu, nu})]; }
  /// T^mu_nu; absent for symmetric zeta.
  const Current& T(int mu, int nu) const { return currents_[index_.at({CurrentSpecies::T, -1, mu, nu})]; }
  bool has_T() const { return layout_.zeta_symmetry() == ZetaSymmetry::kAntisymmetric; }

  const std::vector<Current>& all() const { return currents_; }
  /// J, G, H only.
  std::vector<const Current*> kac_moody() const;
  /// Pattern of H^{a mu nu} for any index order (antisymmetric or symmetric extension).
  Pattern H_pattern(int a, int mu, int nu) const;

 private:
  std::shared_ptr<const StructureConstants> sc_;
  FieldLayout layout_;
  std::vector<Current> currents_;
  std::map<CurrentLabel, std::size_t> index_;
};

CurrentFamily build_currents(std::shared_ptr<const StructureConstants> sc, int N,
                             ZetaSymmetry zeta = ZetaSymmetry::kAntisymmetric);

struct CurrentMode {
  Pattern pattern;
  int mode = 0;
  std::string label;
  static CurrentMode of(const Current& c, int mode) { return {c.pattern, mode, c.label.str()}; }
};

struct CommutatorResult {
  Pattern bilinear;  // at mode m + n
  int mode = 0;
  Surd anomaly;      // coefficient of the identity; zero unless m + n = 0
};

/// Exact commutator by Wick's theorem: single contractions give the matrix
/// commutator of the patterns, double contractions give the c-number, counted
/// mode by mode over the finite window allowed by the frequency split.
CommutatorResult mode_commutator(const CurrentMode& x, const CurrentMode& y, FrequencySplit split);

/// Expected right-hand side (bilinear pattern) of [X, Y] for the current
/// algebra and the gl(N) relations, from the structure constants alone.
Pattern expected_bracket(const CurrentFamily& fam, const CurrentLabel& x, const CurrentLabel& y);

/// Expected c-number of [X_m, Y_{-m}] given the charges: -k m delta^{ab} for
/// (J,J), m (k1 delta^mu_tau delta^sigma_nu + k2 delta^mu_nu delta^sigma_tau)
/// for (T,T), zero otherwise.
Surd expected_anomaly(const CurrentLabel& x, const CurrentLabel& y, int m, const Surd& k, const Surd& k1,
                      const Surd& k2);

struct LevelMeasurement {
  Surd k;
  std::vector<std::pair<int, Surd>> samples;  // (m, anomaly of [J^1_m, J^1_-m])
};

/// k from anomaly([J^a_m, J^b_-m]) = -k m delta^{ab}; checks m in {1,2,3}
/// for linearity and the delta^{ab} structure; throws std::runtime_error otherwise.
LevelMeasurement measure_level(const CurrentFamily& fam, FrequencySplit split);

struct GlMeasurement {
  Surd k1, k2;
};

/// k1, k2 from anomaly([T^mu_nu(m), T^sigma_tau(-m)]); also checks the gl(N)
/// bilinear part. Needs N >= 2 and antisymmetric zeta; throws on any mismatch.
GlMeasurement measure_k1_k2(const CurrentFamily& fam, FrequencySplit split);

struct BracketCheck {
  CurrentLabel x, y;
  int m = 0, n = 0;
  bool bilinear_ok = true;
  bool anomaly_ok = true;
  Surd anomaly;
};

struct CurrentAlgebraReport {
  Surd k, k1, k2;
  std::size_t checked = 0;
  std::vector<BracketCheck> failures;
  /// Species pairs with a nonzero anomaly somewhere in the sweep, e.g. "J,J".
  std::vector<std::string> anomalous_pairs;
  bool ok() const { return failures.empty(); }
};

/// Every ordered current pair over the given modes, against expected_bracket
/// and expected_anomaly with the measured charges.
CurrentAlgebraReport check_current_algebra(const CurrentFamily& fam, FrequencySplit split,
                                           const std::vector<int>& modes, bool include_T = true);

/// Jacobiator of Wick commutators (bilinear and c-number) over all current
/// triples at modes (m, n, -m-n); returns the number of nonzero Jacobiators.
std::size_t wick_jacobi_failures(const CurrentFamily& fam, FrequencySplit split, int m, int n);

}  // namespace mfock
