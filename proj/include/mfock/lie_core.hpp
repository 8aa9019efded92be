#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfock/surd.hpp"

namespace mfock {

/// Dense rank-3 tensor over the exact scalar field, indexed from 0.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim) {}

  int dim() const { return dim_; }
  const Surd& operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
  Surd& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  bool is_zero() const;

 private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * dim_ + b) * dim_ + c;
  }
  int dim_ = 0;
  std::vector<Surd> data_;
};

/// Structure constants f^{abc}, symmetric invariant d^{abc} and the
/// metric of a finite-dimensional Lie algebra. The metric is always the
/// identity; constructing with any other metric throws.
class StructureConstants {
 public:
  StructureConstants(std::string name, Tensor3 f, Tensor3 d);

  const std::string& name() const { return name_; }
  int dim() const { return f_.dim(); }
  const Surd& f(int a, int b, int c) const { return f_(a, b, c); }
  const Surd& d(int a, int b, int c) const { return d_(a, b, c); }
  const Tensor3& f_tensor() const { return f_; }
  const Tensor3& d_tensor() const { return d_; }
  int metric(int a, int b) const { return a == b ? 1 : 0; }

  /// Nonzero entries of f (resp. d) for fixed first index, as (b, c, value).
  struct Entry {
    int b;
    int c;
    Surd value;
  };
  const std::vector<Entry>& f_row(int a) const { return f_rows_[a]; }
  const std::vector<Entry>& d_row(int a) const { return d_rows_[a]; }

  /// Human-readable statement of the normalization used for f and d.
  const std::string& convention() const { return convention_; }
  void set_convention(std::string c) { convention_ = std::move(c); }

 private:
  std::string name_;
  Tensor3 f_;
  Tensor3 d_;
  std::vector<std::vector<Entry>> f_rows_;
  std::vector<std::vector<Entry>> d_rows_;
  std::string convention_;
};

/// su(n) in the generalized Gell-Mann basis with tr(T^a T^b) = delta^{ab}/2,
/// f^{abc} = -2i tr([T^a,T^b] T^c) and d^{abc} = 2 tr({T^a,T^b} T^c).
/// Throws std::invalid_argument for n < 2.
StructureConstants build_su(int n);

enum class Identity {
  kJacobi,          // f^{aed}f^{bcd} + f^{acd}f^{bde} + f^{abd}f^{dce} = 0
  kMixed,           // f^{aed}d^{bcd} + f^{acd}d^{bed} + f^{abd}d^{ced} = 0
  kFAntisymmetric,  // f^{bac} = -f^{abc}
  kFCyclic,         // f^{bca} = f^{abc}
  kDSymmetric,      // d^{bac} = d^{abc}
  kDCyclic,         // d^{bca} = d^{abc}
};
inline constexpr std::array<Identity, 6> kAllIdentities = {
    Identity::kJacobi,         Identity::kMixed,      Identity::kFAntisymmetric,
    Identity::kFCyclic,        Identity::kDSymmetric, Identity::kDCyclic};
std::string to_string(Identity id);

struct IdentityResult {
  Identity identity;
  bool pass = true;
  /// First violating index tuple, 1-based (3 entries, or 4 for the quartic identities).
  std::vector<int> witness;
  Surd residual;
};

struct IdentityReport {
  std::string algebra;
  std::vector<IdentityResult> results;
  bool all_pass() const;
};

IdentityReport verify_identities(const StructureConstants& sc);

/// Plain-text tensor format: a "dim D" line, then one nonzero entry per line
/// "f a b c value" or "d a b c value" with 1-based indices and exact literals.
/// '#' starts a comment. Entries are taken verbatim; nothing is symmetrized.
StructureConstants read_algebra(std::istream& in, const std::string& name);
StructureConstants read_algebra_file(const std::string& path);
void write_algebra(std::ostream& out, const StructureConstants& sc);

}  // namespace mfock
