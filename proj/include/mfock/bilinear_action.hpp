#pragma once

#include <complex>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

#include "mfock/fock.hpp"
#include "mfock/wick_currents.hpp"

namespace mfock::detail {

template <class S>
S convert(const Surd& v);
template <>
inline Surd convert<Surd>(const Surd& v) { return v; }
template <>
inline Rational convert<Rational>(const Surd& v) {
  if (!v.is_rational()) throw std::logic_error("irrational coefficient in rational oracle");
  return v.rational_part();
}

template <class S>
inline bool is_zero(const S& v) {
  return v == S();
}

template <>
inline std::complex<double> convert<std::complex<double>>(const Surd& v) { return v.to_double(); }

// Pattern entries indexed for the three normal-ordering cases.
template <class S>
struct BilinearOp {
  struct Entry {
    int i, j;
    S c;
  };
  std::vector<Entry> all;
  std::map<int, std::vector<Entry>> by_row, by_col;

  explicit BilinearOp(const Pattern& p) {
    for (const auto& [ij, v] : p.entries()) {
      Entry e{ij.first, ij.second, convert<S>(v)};
      all.push_back(e);
      by_row[e.i].push_back(e);
      by_col[e.j].push_back(e);
    }
  }
};

/// Adds scale * X_n|st> to out, X_n = sum_k c_ij :a_i(k) b_j(n-k):.
template <class S>
void apply(const BilinearOp<S>& op, int n, const FockState& st, const S& scale, const Oscillators& osc,
           FockVector<S>& out) {
  // b_j(n-k) annihilates an a-quantum (j, q): k = n + q; a_i(k) acts afterwards.
  for (std::size_t u = 0; u < st.quanta.size(); ++u) {
    const auto code = st.quanta[u];
    if (u > 0 && st.quanta[u - 1] == code) continue;
    const int comp = quantum_comp(code), q = quantum_mode(code);
    const QuantumKind kind = quantum_kind(code);
    if (kind == QuantumKind::kA) {
      auto it = op.by_col.find(comp);
      if (it == op.by_col.end()) continue;
      const int k = n + q;
      for (const auto& e : it->second) {
        FockState t = st;
        int c = osc.apply(Ladder::kB, comp, -q, t);
        if (c != 0) c *= osc.apply(Ladder::kA, e.i, k, t);
        if (c != 0) accumulate(out, t, scale * e.c * S(c));
      }
    } else if (kind == QuantumKind::kB) {
      // a_i(k) annihilates a b-quantum (i, q): k = -q; b_j(n-k) must create.
      auto it = op.by_row.find(comp);
      if (it == op.by_row.end()) continue;
      const int k = -q;
      if (osc.annihilates(Ladder::kB, n - k)) continue;
      for (const auto& e : it->second) {
        FockState t = st;
        int c = osc.apply(Ladder::kA, comp, k, t);
        if (c != 0) c *= osc.apply(Ladder::kB, e.j, n - k, t);
        if (c != 0) accumulate(out, t, scale * e.c * S(c));
      }
    }
  }
  // Both creators: only |k| <= |n| can contribute.
  for (int k = -std::abs(n); k <= std::abs(n); ++k) {
    if (osc.annihilates(Ladder::kA, k) || osc.annihilates(Ladder::kB, n - k)) continue;
    for (const auto& e : op.all) {
      FockState t = st;
      osc.apply(Ladder::kB, e.j, n - k, t);
      osc.apply(Ladder::kA, e.i, k, t);
      accumulate(out, t, scale * e.c);
    }
  }
}

}  // namespace mfock::detail
