#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "mfock/rational.hpp"
#include "mfock/surd.hpp"

namespace mfock {

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const std::int64_t n = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(n);
    }
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    const std::int64_t n = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const std::int64_t d = std::stoll(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
}

void split_square(std::int64_t n, std::int64_t& square, std::int64_t& squarefree) {
  if (n <= 0) throw std::domain_error("split_square: argument must be positive");
  square = 1;
  squarefree = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    for (int i = 0; i < e / 2; ++i) square *= p;
    if (e % 2) squarefree *= p;
  }
  squarefree *= n;
}

Surd Surd::make(const Rational& q, std::int64_t radicand) {
  Surd s;
  if (q.is_zero()) return s;
  std::int64_t sq = 1, sf = 1;
  split_square(radicand, sq, sf);
  s.terms_.push_back({sf, q * Rational(sq)});
  return s;
}

Surd Surd::sqrt(const Rational& q) {
  if (q < Rational(0)) throw std::domain_error("Surd::sqrt of a negative rational");
  if (q.is_zero()) return {};
  // sqrt(p/d) = sqrt(p*d)/d
  const __int128 prod = static_cast<__int128>(q.num()) * q.den();
  if (prod > INT64_MAX) throw std::overflow_error("Surd::sqrt: radicand overflow");
  return make(Rational(1, q.den()), static_cast<std::int64_t>(prod));
}

void Surd::add_term(std::int64_t radicand, const Rational& q) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), radicand,
                             [](const Term& t, std::int64_t r) { return t.radicand < r; });
  if (it != terms_.end() && it->radicand == radicand) {
    it->coeff += q;
    if (it->coeff.is_zero()) terms_.erase(it);
  } else if (!q.is_zero()) {
    terms_.insert(it, Term{radicand, q});
  }
}

Rational Surd::rational_part() const {
  return (!terms_.empty() && terms_[0].radicand == 1) ? terms_[0].coeff : Rational(0);
}

double Surd::to_double() const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.coeff.to_double() * std::sqrt(static_cast<double>(t.radicand));
  return v;
}

Surd Surd::operator-() const {
  Surd r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Surd& Surd::operator+=(const Surd& o) {
  for (const auto& t : o.terms_) add_term(t.radicand, t.coeff);
  return *this;
}

Surd& Surd::operator*=(const Rational& q) {
  if (q.is_zero()) { terms_.clear(); return *this; }
  for (auto& t : terms_) t.coeff *= q;
  return *this;
}

Surd operator*(const Surd& a, const Surd& b) {
  Surd r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.terms_.size() == 1 && a.terms_[0].radicand == 1) return b * a.terms_[0].coeff;
  if (b.terms_.size() == 1 && b.terms_[0].radicand == 1) return a * b.terms_[0].coeff;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      const std::int64_t g = std::gcd(x.radicand, y.radicand);
      r.add_term((x.radicand / g) * (y.radicand / g), x.coeff * y.coeff * Rational(g));
    }
  }
  return r;
}

bool operator==(const Surd& a, const Surd& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].radicand != b.terms_[i].radicand || !(a.terms_[i].coeff == b.terms_[i].coeff))
      return false;
  }
  return true;
}

bool operator<(const Surd& a, const Surd& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (x.radicand != y.radicand) return x.radicand < y.radicand;
    if (!(x.coeff == y.coeff)) return x.coeff < y.coeff;
  }
  return a.terms_.size() < b.terms_.size();
}

std::string Surd::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    Rational c = t.coeff;
    if (i > 0) {
      out += c < Rational(0) ? " - " : " + ";
      if (c < Rational(0)) c = -c;
    }
    if (t.radicand == 1) {
      out += c.str();
    } else {
      out += c.str() + "*sqrt(" + std::to_string(t.radicand) + ")";
    }
  }
  return out;
}

namespace {

// term := [sign] rational ['*' 'sqrt(' int ')']  |  [sign] 'sqrt(' int ')' ['/' int]
Surd parse_term(const std::string& raw) {
  std::string t;
  for (char c : raw) if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty surd term");
  Rational sign(1);
  if (t[0] == '+' || t[0] == '-') {
    if (t[0] == '-') sign = Rational(-1);
    t.erase(0, 1);
  }
  const auto sq = t.find("sqrt(");
  if (sq == std::string::npos) return Surd(sign * Rational::parse(t));
  const auto close = t.find(')', sq);
  if (close == std::string::npos) throw std::invalid_argument("unterminated sqrt( in '" + raw + "'");
  const std::int64_t radicand = Rational::parse(t.substr(sq + 5, close - sq - 5)).num();
  Rational coeff(1);
  if (sq > 0) {
    if (t[sq - 1] != '*') throw std::invalid_argument("expected '*' before sqrt in '" + raw + "'");
    coeff = Rational::parse(t.substr(0, sq - 1));
  }
  const std::string tail = t.substr(close + 1);
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("unexpected text after sqrt in '" + raw + "'");
    coeff /= Rational::parse(tail.substr(1));
  }
  if (radicand <= 0) throw std::invalid_argument("sqrt radicand must be positive in '" + raw + "'");
  return Surd::make(sign * coeff, radicand);
}

}  // namespace

Surd Surd::parse(const std::string& text) {
  Surd total;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= text.size(); ++i) {
    // split at a top-level +/- that is not an exponent or leading sign
    if (i == text.size() || ((text[i] == '+' || text[i] == '-') && text[i - 1] != '(' &&
                             text[i - 1] != '/' && text[i - 1] != '*')) {
      const std::string piece = text.substr(start, i - start);
      bool blank = true;
      for (char c : piece) if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) total += parse_term(piece);
      start = i;
    }
  }
  return total;
}

}  // namespace mfock
