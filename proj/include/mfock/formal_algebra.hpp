#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfock/lie_core.hpp"
#include "mfock/polynomial.hpp"

namespace mfock {

/// Generator species. The enumerator order is the canonical bracket order:
/// a bracket is evaluated with the lower species first and negated if swapped.
enum class Species : std::uint8_t { L, J, G, H, S1, S3, Delta };
std::string to_string(Species s);
int index_count(Species s);
bool has_adjoint(Species s);

/// Integer combination of the momentum symbols m, n, r.
struct Arg {
  std::array<std::int8_t, kMaxSymbols> c{};
  friend auto operator<=>(const Arg&, const Arg&) = default;
  Arg operator+(const Arg& o) const;
  bool is_zero() const { return c == std::array<std::int8_t, kMaxSymbols>{}; }
  /// Component mu of the argument vector as a linear polynomial.
  Polynomial component(int mu) const;
  std::string str() const;
};
inline constexpr Arg kArgM{{1, 0, 0}};
inline constexpr Arg kArgN{{0, 1, 0}};
inline constexpr Arg kArgR{{0, 0, 1}};

/// A basis generator. Unused index slots hold -1. Indices are 0-based.
struct Generator {
  Species species = Species::J;
  std::int8_t adj = -1;
  std::array<std::int8_t, 3> idx{-1, -1, -1};
  Arg arg;
  friend auto operator<=>(const Generator&, const Generator&) = default;
  std::string str() const;
};

class TableMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite sum of polynomial coefficient times generator, in normal form:
/// antisymmetric index slots sorted (with sign), zero terms pruned.
class Expression {
 public:
  using Map = std::map<Generator, Polynomial>;

  Expression() = default;
  static Expression J(int a, Arg arg);
  static Expression G(int a, int mu, Arg arg);
  static Expression H(int a, int mu, int nu, Arg arg);
  static Expression S1(int rho, Arg arg);
  static Expression S3(int mu, int nu, int rho, Arg arg);
  static Expression L(int mu, Arg arg);
  static Expression Delta(Arg arg);
  static Expression of(const Generator& g) { return term(g, Polynomial(1)); }
  /// Normalizes the generator's antisymmetric slots before inserting.
  static Expression term(Generator g, const Polynomial& coeff);

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(Generator g, const Polynomial& coeff);

  Expression operator-() const;
  Expression& operator+=(const Expression& o);
  Expression& operator-=(const Expression& o);
  friend Expression operator+(Expression a, const Expression& b) { return a += b; }
  friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
  friend Expression operator*(const Polynomial& p, const Expression& e);
  friend bool operator==(const Expression& a, const Expression& b) { return a.terms_ == b.terms_; }

  /// Applies a map to every coefficient (e.g. setting charges to values).
  Expression map_coefficients(const std::function<Polynomial(const Polynomial&)>& fn) const;
  /// Drops all terms of the given species.
  Expression without(Species s) const;

  /// Canonical text form with deterministic term order.
  std::string str() const;

 private:
  Map terms_;
};

enum class TableKind { MF, EMB1, CLASSICAL_MF, EMB2, DIFF_EXT };
enum class ChainMode { FORMAL, CONCRETE_3D };
std::string to_string(TableKind k);
std::string to_string(ChainMode m);
TableKind parse_table_kind(const std::string& s);

struct AlgebraTable {
  TableKind kind = TableKind::EMB2;
  int N = 3;
  std::shared_ptr<const StructureConstants> sc;
  ChainMode mode = ChainMode::FORMAL;

  bool uses(Species s) const;
  /// All basis generators of the table carrying the given argument.
  std::vector<Generator> generators(Arg arg) const;
};

/// Validates N against the table (1..4; MF and EMB1 need N >= 2).
AlgebraTable make_table(TableKind kind, std::shared_ptr<const StructureConstants> sc, int N = 3,
                        ChainMode mode = ChainMode::FORMAL);

/// Raw bilinear bracket in canonical form; chains are not reduced.
Expression bracket(const AlgebraTable& t, const Expression& x, const Expression& y);

/// Normal form modulo closedness: a_rho S1^rho(a) = 0, a_rho S3^{mu nu rho}(a) = 0
/// and their polynomial multiples. In CONCRETE_3D form delta(a) terms are
/// reduced on the support a = 0. Other terms pass through unchanged.
Expression reduce_closedness(const Expression& x, int N);

Expression jacobiator(const AlgebraTable& t, const Expression& x, const Expression& y,
                      const Expression& z);

/// J^a(m) -> J^a(m) + m_mu G^{a mu}(m); other species unchanged.
Expression redefine(const Expression& x, int N);

/// S3^{mu nu rho}(a) -> epsilon^{mu nu rho} delta(a). Requires N = 3.
Expression concretize(const Expression& x);
AlgebraTable concretize_chain(const AlgebraTable& t);

struct PairCheck {
  Generator x;
  Generator y;
  bool match = true;
  Expression difference;
};

struct EmbeddingReport {
  TableKind source;
  TableKind target;
  std::vector<PairCheck> pairs;
  bool all_match() const;
};

/// Supported pairs: (MF, EMB1) and (CLASSICAL_MF, EMB2); throws TableMismatch otherwise.
EmbeddingReport verify_embedding(const AlgebraTable& source, const AlgebraTable& target);

struct TripleResult {
  Generator x, y, z;
  Expression value;
};

struct JacobiSweep {
  std::string algebra;
  TableKind kind;
  int N = 0;
  ChainMode mode = ChainMode::FORMAL;
  std::size_t triples = 0;
  std::size_t evaluated = 0;  // triples with at least one nonzero pairwise bracket
  std::vector<TripleResult> nonzero;
  bool all_zero() const { return nonzero.empty(); }
};

/// Jacobiator over all unordered generator triples with repetition, with
/// arguments m, n, r attached in position order.
JacobiSweep jacobi_sweep(const AlgebraTable& t);

/// d^{abc} m_rho S3^{mu nu rho}(m+n+r), reduced; in CONCRETE_3D the chain is concretized.
Expression expected_obstruction(const AlgebraTable& t, int a, int b, int c, int mu, int nu);

struct ObstructionReport {
  std::size_t triples = 0;
  std::size_t nonzero = 0;     // (J,G,G) triples whose Jacobiator is nonzero
  std::size_t mismatches = 0;  // triples differing from the expected value
  std::vector<TripleResult> mismatch_examples;
  std::string sample;          // rendered nonzero Jacobiator, if any
  bool reproduced() const { return mismatches == 0; }
};

/// Runs the EMB1 sweep and checks every triple against the obstruction formula
/// (zero unless the triple is of type (J,G,G)).
ObstructionReport check_obstruction(const AlgebraTable& emb1);

}  // namespace mfock
