#include "mfock/polynomial.hpp"

#include <cmath>

namespace mfock {

std::string var_name(int var) {
  if (var == kVarK) return "k";
  if (var == kVarC1) return "c1";
  if (var == kVarC2) return "c2";
  static const char* symbols = "mnr";
  return std::string(1, symbols[var / kMaxDim]) + std::to_string(var % kMaxDim + 1);
}

int Monomial::degree() const {
  int d = 0;
  for (auto e : exp) d += e;
  return d;
}

int Monomial::momentum_degree() const {
  int d = 0;
  for (int i = 0; i < kNumMomentumVars; ++i) d += exp[i];
  return d;
}

Monomial Monomial::momentum_part() const {
  Monomial m = *this;
  for (int i = kNumMomentumVars; i < kNumVars; ++i) m.exp[i] = 0;
  return m;
}

Monomial Monomial::charge_part() const {
  Monomial m = *this;
  for (int i = 0; i < kNumMomentumVars; ++i) m.exp[i] = 0;
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  for (int i = 0; i < kNumVars; ++i) m.exp[i] = static_cast<std::uint8_t>(exp[i] + o.exp[i]);
  return m;
}

std::string Monomial::str() const {
  std::string out;
  for (int v = kNumVars - 1; v >= 0; --v) {
    for (int e = 0; e < exp[v]; ++e) {
      if (!out.empty()) out += "*";
      out += var_name(v);
    }
  }
  return out;
}

void Polynomial::add_term(const Monomial& m, const Surd& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [m, c] : p.terms_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Surd& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v = v * c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial Polynomial::substitute(const std::function<Polynomial(int)>& image) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Polynomial t(c);
    for (int v = 0; v < kNumVars; ++v) {
      if (m.exp[v] == 0) continue;
      const Polynomial img = image(v);
      for (int e = 0; e < m.exp[v]; ++e) t = t * img;
    }
    out += t;
  }
  return out;
}

double Polynomial::evaluate(const std::function<double(int)>& value) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (int v = 0; v < kNumVars; ++v)
      if (m.exp[v] != 0) t *= std::pow(value(v), m.exp[v]);
    total += t;
  }
  return total;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string coeff = c.str();
    const bool compound = c.terms().size() > 1;
    const bool negative = !compound && c.terms()[0].coeff < Rational(0);
    if (negative) coeff = (-c).str();
    if (compound) coeff = "(" + coeff + ")";
    if (!first) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    first = false;
    const std::string mono = m.str();
    if (mono.empty()) out += coeff;
    else if (coeff == "1") out += mono;
    else out += coeff + "*" + mono;
  }
  return out;
}

}  // namespace mfock
