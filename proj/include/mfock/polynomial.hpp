#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "mfock/surd.hpp"

namespace mfock {

/// Indeterminates of the formal engine: momentum components x_{s,mu} of up
/// to three momentum symbols (m, n, r) in up to four dimensions, plus the
/// abelian charges k, c1, c2.
inline constexpr int kMaxSymbols = 3;
inline constexpr int kMaxDim = 4;
inline constexpr int kNumMomentumVars = kMaxSymbols * kMaxDim;
inline constexpr int kVarK = kNumMomentumVars;
inline constexpr int kVarC1 = kNumMomentumVars + 1;
inline constexpr int kVarC2 = kNumMomentumVars + 2;
inline constexpr int kNumVars = kNumMomentumVars + 3;

constexpr int momentum_var(int symbol, int mu) { return symbol * kMaxDim + mu; }
std::string var_name(int var);

/// Exponent vector. Ordered by comparing exponents from the highest variable
/// index down, so charges dominate, then r, n, m components.
struct Monomial {
  std::array<std::uint8_t, kNumVars> exp{};

  static Monomial var(int v) {
    Monomial m;
    m.exp[v] = 1;
    return m;
  }
  int degree() const;
  int momentum_degree() const;
  Monomial momentum_part() const;
  Monomial charge_part() const;
  Monomial operator*(const Monomial& o) const;
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    for (int i = kNumVars - 1; i >= 0; --i)
      if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i];
    return false;
  }
  std::string str() const;
};

class Polynomial {
 public:
  using Map = std::map<Monomial, Surd>;

  Polynomial() = default;
  Polynomial(const Surd& c) { if (!c.is_zero()) terms_[Monomial{}] = c; }  // NOLINT
  Polynomial(std::int64_t c) : Polynomial(Surd(c)) {}                        // NOLINT
  static Polynomial var(int v) {
    Polynomial p;
    p.terms_[Monomial::var(v)] = Surd(1);
    return p;
  }
  static Polynomial term(const Monomial& m, const Surd& c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_[m] = c;
    return p;
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Monomial& m, const Surd& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Surd& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Surd& c) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  /// Substitutes each variable by a polynomial (identity for unlisted ones).
  Polynomial substitute(const std::function<Polynomial(int)>& image) const;
  /// Numeric evaluation; `value(var)` supplies each indeterminate.
  double evaluate(const std::function<double(int)>& value) const;

  std::string str() const;

 private:
  Map terms_;
};

}  // namespace mfock
