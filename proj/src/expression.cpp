#include <algorithm>

#include "mfock/formal_algebra.hpp"

namespace mfock {

std::string to_string(Species s) {
  switch (s) {
    case Species::L: return "L";
    case Species::J: return "J";
    case Species::G: return "G";
    case Species::H: return "H";
    case Species::S1: return "S1";
    case Species::S3: return "S3";
    case Species::Delta: return "delta";
  }
  return "?";
}

int index_count(Species s) {
  switch (s) {
    case Species::G:
    case Species::S1:
    case Species::L: return 1;
    case Species::H: return 2;
    case Species::S3: return 3;
    default: return 0;
  }
}

bool has_adjoint(Species s) { return s == Species::J || s == Species::G || s == Species::H; }

Arg Arg::operator+(const Arg& o) const {
  Arg r;
  for (int s = 0; s < kMaxSymbols; ++s) r.c[s] = static_cast<std::int8_t>(c[s] + o.c[s]);
  return r;
}

Polynomial Arg::component(int mu) const {
  Polynomial p;
  for (int s = 0; s < kMaxSymbols; ++s)
    if (c[s] != 0) p.add_term(Monomial::var(momentum_var(s, mu)), Surd(c[s]));
  return p;
}

std::string Arg::str() const {
  static const char* names = "mnr";
  std::string out;
  for (int s = 0; s < kMaxSymbols; ++s) {
    if (c[s] == 0) continue;
    const int v = c[s];
    if (v < 0) out += "-";
    else if (!out.empty()) out += "+";
    if (v != 1 && v != -1) out += std::to_string(v < 0 ? -v : v);
    out += names[s];
  }
  return out.empty() ? "0" : out;
}

std::string Generator::str() const {
  std::string out = to_string(species);
  const int n = index_count(species);
  if (species == Species::L) {
    out += "_" + std::to_string(idx[0] + 1);
  } else if (has_adjoint(species) || n > 0) {
    out += "^{";
    if (has_adjoint(species)) {
      out += std::to_string(adj + 1);
      if (n > 0) out += ",";
    }
    for (int i = 0; i < n; ++i) out += std::to_string(idx[i] + 1);
    out += "}";
  }
  return out + "(" + arg.str() + ")";
}

Expression Expression::J(int a, Arg arg) {
  return of({Species::J, static_cast<std::int8_t>(a), {-1, -1, -1}, arg});
}
Expression Expression::G(int a, int mu, Arg arg) {
  return of({Species::G, static_cast<std::int8_t>(a), {static_cast<std::int8_t>(mu), -1, -1}, arg});
}
Expression Expression::H(int a, int mu, int nu, Arg arg) {
  return of({Species::H, static_cast<std::int8_t>(a),
             {static_cast<std::int8_t>(mu), static_cast<std::int8_t>(nu), -1}, arg});
}
Expression Expression::S1(int rho, Arg arg) {
  return of({Species::S1, -1, {static_cast<std::int8_t>(rho), -1, -1}, arg});
}
Expression Expression::S3(int mu, int nu, int rho, Arg arg) {
  return of({Species::S3, -1,
             {static_cast<std::int8_t>(mu), static_cast<std::int8_t>(nu), static_cast<std::int8_t>(rho)},
             arg});
}
Expression Expression::L(int mu, Arg arg) {
  return of({Species::L, -1, {static_cast<std::int8_t>(mu), -1, -1}, arg});
}
Expression Expression::Delta(Arg arg) { return of({Species::Delta, -1, {-1, -1, -1}, arg}); }

Expression Expression::term(Generator g, const Polynomial& coeff) {
  Expression e;
  e.add(g, coeff);
  return e;
}

void Expression::add(Generator g, const Polynomial& coeff) {
  if (coeff.is_zero()) return;
  const int n = index_count(g.species);
  bool negate = false;
  if (g.species == Species::H || g.species == Species::S3) {
    // Bubble sort keeps track of the permutation sign.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j + 1 < n - i; ++j) {
        if (g.idx[j] == g.idx[j + 1]) return;
        if (g.idx[j] > g.idx[j + 1]) {
          std::swap(g.idx[j], g.idx[j + 1]);
          negate = !negate;
        }
      }
    for (int j = 0; j + 1 < n; ++j)
      if (g.idx[j] == g.idx[j + 1]) return;
  }
  auto [it, fresh] = terms_.try_emplace(g);
  if (negate) it->second -= coeff;
  else it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

Expression Expression::operator-() const {
  Expression e = *this;
  for (auto& [g, c] : e.terms_) c = -c;
  return e;
}

Expression& Expression::operator+=(const Expression& o) {
  for (const auto& [g, c] : o.terms_) {
    auto [it, fresh] = terms_.try_emplace(g, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

Expression& Expression::operator-=(const Expression& o) { return *this += -o; }

Expression operator*(const Polynomial& p, const Expression& e) {
  Expression r;
  if (p.is_zero()) return r;
  for (const auto& [g, c] : e.terms_) {
    Polynomial q = p * c;
    if (!q.is_zero()) r.terms_.emplace(g, std::move(q));
  }
  return r;
}

Expression Expression::map_coefficients(
    const std::function<Polynomial(const Polynomial&)>& fn) const {
  Expression r;
  for (const auto& [g, c] : terms_) r.add(g, fn(c));
  return r;
}

Expression Expression::without(Species s) const {
  Expression r;
  for (const auto& [g, c] : terms_)
    if (g.species != s) r.terms_.emplace(g, c);
  return r;
}

std::string Expression::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [g, c] : terms_) {
    std::string t;
    const std::string cs = c.str();
    if (cs == "1") t = g.str();
    else if (cs == "-1") t = "-" + g.str();
    else if (c.terms().size() == 1) t = cs + "*" + g.str();
    else t = "(" + cs + ")*" + g.str();
    if (out.empty()) out = t;
    else if (t[0] == '-') out += " - " + t.substr(1);
    else out += " + " + t;
  }
  return out;
}

std::string to_string(TableKind k) {
  switch (k) {
    case TableKind::MF: return "MF";
    case TableKind::EMB1: return "EMB1";
    case TableKind::CLASSICAL_MF: return "CLASSICAL_MF";
    case TableKind::EMB2: return "EMB2";
    case TableKind::DIFF_EXT: return "DIFF_EXT";
  }
  return "?";
}

std::string to_string(ChainMode m) { return m == ChainMode::FORMAL ? "FORMAL" : "CONCRETE_3D"; }

TableKind parse_table_kind(const std::string& s) {
  for (TableKind k : {TableKind::MF, TableKind::EMB1, TableKind::CLASSICAL_MF, TableKind::EMB2,
                      TableKind::DIFF_EXT})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown table '" + s + "' (expected MF, EMB1, CLASSICAL_MF, EMB2, DIFF_EXT)");
}

}  // namespace mfock
