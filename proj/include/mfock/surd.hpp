#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <ostream>
#include <string>

#include "mfock/rational.hpp"

namespace mfock {

/// Element of the multi-quadratic field Q(sqrt 2, sqrt 3, sqrt 5, ...):
/// a finite sum  sum_s q_s * sqrt(s)  over distinct squarefree s >= 1.
/// Square roots of distinct squarefree integers are linearly independent
/// over Q, so the sorted term list is a unique normal form and equality
/// (in particular the zero test) is exact.
class Surd {
 public:
  struct Term {
    std::int64_t radicand;  // squarefree, >= 1
    Rational coeff;         // nonzero
  };
  using Terms = boost::container::small_vector<Term, 2>;

  Surd() = default;
  Surd(const Rational& q) { if (!q.is_zero()) terms_.push_back({1, q}); }  // NOLINT
  Surd(std::int64_t n) : Surd(Rational(n)) {}                               // NOLINT

  /// q * sqrt(radicand); the radicand's square part is pulled into q.
  static Surd make(const Rational& q, std::int64_t radicand);
  /// sqrt of a nonnegative rational.
  static Surd sqrt(const Rational& q);
  /// Parses sums of terms "p/q", "p/q*sqrt(k)", "sqrt(k)", "-sqrt(k)/q".
  static Surd parse(const std::string& text);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].radicand == 1); }
  Rational rational_part() const;
  double to_double() const;

  Surd operator-() const;
  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o) { return *this += -o; }
  Surd& operator*=(const Surd& o) { return *this = *this * o; }
  Surd& operator*=(const Rational& q);

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(const Surd& a, const Surd& b);
  friend Surd operator*(Surd a, const Rational& q) { return a *= q; }
  friend Surd operator*(const Rational& q, Surd a) { return a *= q; }

  friend bool operator==(const Surd& a, const Surd& b);
  friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }
  /// Total order on normal forms (not numeric order); for use as map keys.
  friend bool operator<(const Surd& a, const Surd& b);

  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const Surd& s) { return os << s.str(); }

 private:
  void add_term(std::int64_t radicand, const Rational& q);
  Terms terms_;  // sorted by radicand
};

/// Splits n > 0 as n = square^2 * squarefree.
void split_square(std::int64_t n, std::int64_t& square, std::int64_t& squarefree);

}  // namespace mfock
