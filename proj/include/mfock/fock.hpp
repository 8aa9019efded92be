#pragma once

#include <boost/container/small_vector.hpp>
#include <boost/functional/hash.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_map>

#include "mfock/polynomial.hpp"

namespace mfock {

/// Which circle modes annihilate the vacuum. Positive: unbarred a(k) and
/// trajectory q_l, p_j annihilate for mode > 0, barred b(j) for j >= 0.
/// Negative is the mirror image (mode < 0, barred j <= 0).
enum class FrequencySplit { kPositiveModesAnnihilate, kNegativeModesAnnihilate };
std::string to_string(FrequencySplit s);
inline int split_sign(FrequencySplit s) { return s == FrequencySplit::kPositiveModesAnnihilate ? 1 : -1; }

/// Created quanta: a-type (unbarred field), b-type (barred field), q, p.
enum class QuantumKind : std::uint32_t { kA = 0, kB = 1, kQ = 2, kP = 3 };

inline std::uint32_t quantum_code(QuantumKind kind, int comp, int mode) {
  return (static_cast<std::uint32_t>(kind) << 30) | (static_cast<std::uint32_t>(comp) << 16) |
         static_cast<std::uint32_t>(mode + 32768);
}
inline QuantumKind quantum_kind(std::uint32_t code) { return static_cast<QuantumKind>(code >> 30); }
inline int quantum_comp(std::uint32_t code) { return static_cast<int>((code >> 16) & 0x3fff); }
inline int quantum_mode(std::uint32_t code) { return static_cast<int>(code & 0xffff) - 32768; }

/// Basis state of the unnormalized monomial basis: product of creators on
/// the vacuum of momentum lattice point `lattice`.
struct FockState {
  boost::container::small_vector<std::uint32_t, 6> quanta;  // sorted, repeated per occupation
  std::array<std::int8_t, kMaxDim> lattice{};

  friend bool operator==(const FockState& a, const FockState& b) {
    return a.lattice == b.lattice && a.quanta == b.quanta;
  }
  friend bool operator<(const FockState& a, const FockState& b) {
    if (a.lattice != b.lattice) return a.lattice < b.lattice;
    return std::lexicographical_compare(a.quanta.begin(), a.quanta.end(), b.quanta.begin(), b.quanta.end());
  }
  int count(std::uint32_t code) const {
    auto [lo, hi] = std::equal_range(quanta.begin(), quanta.end(), code);
    return static_cast<int>(hi - lo);
  }
  void insert(std::uint32_t code) { quanta.insert(std::upper_bound(quanta.begin(), quanta.end(), code), code); }
  /// Removes one copy; returns the previous occupation (0 if absent).
  int remove(std::uint32_t code) {
    auto [lo, hi] = std::equal_range(quanta.begin(), quanta.end(), code);
    const int n = static_cast<int>(hi - lo);
    if (n > 0) quanta.erase(lo);
    return n;
  }
  std::string str() const;
};

struct FockStateHash {
  std::size_t operator()(const FockState& s) const {
    std::size_t h = boost::hash_range(s.quanta.begin(), s.quanta.end());
    for (auto v : s.lattice) boost::hash_combine(h, v);
    return h;
  }
};

template <class S>
using FockVector = std::unordered_map<FockState, S, FockStateHash>;

template <class S>
void accumulate(FockVector<S>& v, const FockState& s, const S& c) {
  auto [it, fresh] = v.try_emplace(s, c);
  if (!fresh) it->second += c;
}

template <class S>
void accumulate(FockVector<S>& v, const FockVector<S>& w, const S& scale) {
  for (const auto& [s, c] : w) accumulate(v, s, c * scale);
}

/// Ladder operators of the free oscillators. Field component i carries the
/// pair a_i(k), b_i(j) with [b_i(j), a_i(k)] = delta_{j+k,0}; the trajectory
/// component mu carries q^mu_l, p_{mu j} with [p_j, q_l] = delta_{j+l,0}.
enum class Ladder { kA, kB, kQ, kP };

struct Oscillators {
  FrequencySplit split = FrequencySplit::kNegativeModesAnnihilate;

  bool annihilates(Ladder op, int mode) const {
    const int s = split_sign(split) * mode;
    return op == Ladder::kB ? s >= 0 : s > 0;
  }

  /// Applies one ladder operator to a basis state in place. Returns the
  /// coefficient (0 if the result vanishes). Trajectory zero modes are not
  /// ladder operators and must not be passed here.
  int apply(Ladder op, int comp, int mode, FockState& st) const {
    if (!annihilates(op, mode)) {
      static constexpr QuantumKind created[] = {QuantumKind::kA, QuantumKind::kB, QuantumKind::kQ, QuantumKind::kP};
      st.insert(quantum_code(created[static_cast<int>(op)], comp, mode));
      return 1;
    }
    switch (op) {
      case Ladder::kA: return -st.remove(quantum_code(QuantumKind::kB, comp, -mode));
      case Ladder::kB: return st.remove(quantum_code(QuantumKind::kA, comp, -mode));
      case Ladder::kQ: return -st.remove(quantum_code(QuantumKind::kP, comp, -mode));
      case Ladder::kP: return st.remove(quantum_code(QuantumKind::kQ, comp, -mode));
    }
    return 0;
  }

  /// Energy of a created quantum (>= 0); the ground state has energy 0.
  int energy(std::uint32_t code) const { return -split_sign(split) * quantum_mode(code); }
  /// Truncation weight: field quanta count at least 1 (zero modes have no energy).
  int weight(std::uint32_t code) const {
    const int e = energy(code);
    const QuantumKind k = quantum_kind(code);
    return (k == QuantumKind::kA || k == QuantumKind::kB) ? std::max(1, e) : e;
  }
  int weight(const FockState& st) const {
    int w = 0;
    for (auto c : st.quanta) w += weight(c);
    return w;
  }
  int energy(const FockState& st) const {
    int e = 0;
    for (auto c : st.quanta) e += energy(c);
    return e;
  }
};

}  // namespace mfock
