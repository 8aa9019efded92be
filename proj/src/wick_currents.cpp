#include "mfock/wick_currents.hpp"

#include <set>
#include <stdexcept>

namespace mfock {

std::string to_string(ZetaSymmetry z) { return z == ZetaSymmetry::kAntisymmetric ? "antisymmetric" : "symmetric"; }

std::string to_string(FrequencySplit s) {
  return s == FrequencySplit::kPositiveModesAnnihilate ? "positive-modes-annihilate" : "negative-modes-annihilate";
}

FieldLayout::FieldLayout(int dim, int N, ZetaSymmetry zeta) : dim_(dim), N_(N), zeta_(zeta) {
  if (N < 1 || N > kMaxDim) throw std::invalid_argument("field layout needs 1 <= N <= 4");
  for (int mu = 0; mu < N; ++mu)
    for (int nu = mu; nu < N; ++nu)
      if (nu > mu || zeta == ZetaSymmetry::kSymmetric) pairs_.emplace_back(mu, nu);
  size_ = dim * species_per_adjoint();
}

std::pair<int, int> FieldLayout::zeta(int a, int mu, int nu) const {
  int sign = 1;
  if (mu == nu && zeta_ == ZetaSymmetry::kAntisymmetric) return {-1, 0};
  if (mu > nu) {
    std::swap(mu, nu);
    if (zeta_ == ZetaSymmetry::kAntisymmetric) sign = -1;
  }
  for (std::size_t p = 0; p < pairs_.size(); ++p)
    if (pairs_[p] == std::pair{mu, nu})
      return {dim_ * (1 + N_) + a * static_cast<int>(pairs_.size()) + static_cast<int>(p), sign};
  return {-1, 0};
}

std::string FieldLayout::label(int i) const {
  if (i < dim_) return "phi^" + std::to_string(i + 1);
  if (i < dim_ * (1 + N_)) {
    const int r = i - dim_;
    return "psi^{" + std::to_string(r / N_ + 1) + "," + std::to_string(r % N_ + 1) + "}";
  }
  const int r = i - dim_ * (1 + N_);
  const int np = static_cast<int>(pairs_.size());
  const auto [mu, nu] = pairs_[r % np];
  return "zeta^{" + std::to_string(r / np + 1) + "," + std::to_string(mu + 1) + std::to_string(nu + 1) + "}";
}

void Pattern::add(int i, int j, const Surd& v) {
  if (v.is_zero()) return;
  auto [it, fresh] = m_.try_emplace({i, j}, v);
  if (!fresh) {
    it->second += v;
    if (it->second.is_zero()) m_.erase(it);
  }
}

Pattern& Pattern::operator+=(const Pattern& o) {
  for (const auto& [ij, v] : o.m_) add(ij.first, ij.second, v);
  return *this;
}

Pattern& Pattern::operator-=(const Pattern& o) {
  for (const auto& [ij, v] : o.m_) add(ij.first, ij.second, -v);
  return *this;
}

Pattern operator*(const Surd& s, const Pattern& p) {
  Pattern r;
  if (s.is_zero()) return r;
  for (const auto& [ij, v] : p.m_) r.m_.emplace(ij, s * v);
  return r;
}

Pattern operator*(const Pattern& a, const Pattern& b) {
  std::map<int, std::vector<std::pair<int, const Surd*>>> rows;
  for (const auto& [ij, v] : b.m_) rows[ij.first].emplace_back(ij.second, &v);
  Pattern r;
  for (const auto& [ij, v] : a.m_) {
    auto it = rows.find(ij.second);
    if (it == rows.end()) continue;
    for (const auto& [col, w] : it->second) r.add(ij.first, col, v * *w);
  }
  return r;
}

Surd Pattern::trace_product(const Pattern& a, const Pattern& b) {
  Surd t;
  for (const auto& [ij, v] : a.m_) {
    auto it = b.m_.find({ij.second, ij.first});
    if (it != b.m_.end()) t += v * it->second;
  }
  return t;
}

std::string to_string(CurrentSpecies s) {
  switch (s) {
    case CurrentSpecies::J: return "J";
    case CurrentSpecies::G: return "G";
    case CurrentSpecies::H: return "H";
    case CurrentSpecies::T: return "T";
  }
  return "?";
}

std::string CurrentLabel::str() const {
  const std::string a = std::to_string(adj + 1), m = std::to_string(mu + 1), n = std::to_string(nu + 1);
  switch (species) {
    case CurrentSpecies::J: return "J^{" + a + "}";
    case CurrentSpecies::G: return "G^{" + a + "," + m + "}";
    case CurrentSpecies::H: return "H^{" + a + "," + m + n + "}";
    case CurrentSpecies::T: return "T^{" + m + "}_{" + n + "}";
  }
  return "?";
}

CurrentFamily::CurrentFamily(std::shared_ptr<const StructureConstants> sc, int N, ZetaSymmetry zeta)
    : sc_(std::move(sc)), layout_(sc_->dim(), N, zeta) {
  const int D = sc_->dim();
  const FieldLayout& F = layout_;
  auto push = [&](CurrentLabel l, Pattern p) {
    index_[l] = currents_.size();
    currents_.push_back({l, std::move(p)});
  };
  for (int a = 0; a < D; ++a) {
    Pattern p;
    for (const auto& e : sc_->f_row(a)) {  // f^{a b c}: c-field times b-conjugate
      p.add(F.phi(e.c), F.phi(e.b), e.value);
      for (int mu = 0; mu < N; ++mu) p.add(F.psi(e.c, mu), F.psi(e.b, mu), e.value);
      for (const auto& [mu, nu] : F.zeta_pairs())
        p.add(F.zeta(e.c, mu, nu).first, F.zeta(e.b, mu, nu).first, e.value);
    }
    push({CurrentSpecies::J, a, -1, -1}, std::move(p));
  }
  for (int a = 0; a < D; ++a)
    for (int mu = 0; mu < N; ++mu) {
      Pattern p;
      for (const auto& e : sc_->f_row(a)) p.add(F.psi(e.c, mu), F.phi(e.b), e.value);
      for (const auto& e : sc_->d_row(a))
        for (int nu = 0; nu < N; ++nu) {
          const auto [z, s] = F.zeta(e.c, mu, nu);
          if (s != 0) p.add(z, F.psi(e.b, nu), e.value * Rational(s));
        }
      push({CurrentSpecies::G, a, mu, -1}, std::move(p));
    }
  for (int a = 0; a < D; ++a)
    for (const auto& [mu, nu] : F.zeta_pairs()) push({CurrentSpecies::H, a, mu, nu}, H_pattern(a, mu, nu));
  if (!has_T()) return;
  for (int mu = 0; mu < N; ++mu)
    for (int nu = 0; nu < N; ++nu) {
      Pattern p;
      if (mu == nu)
        for (int i = 0; i < F.size(); ++i) p.add(i, i, Surd(1));
      for (int a = 0; a < D; ++a) {
        p.add(F.psi(a, mu), F.psi(a, nu), Surd(1));
        for (int rho = 0; rho < N; ++rho) {
          const auto [z1, s1] = F.zeta(a, mu, rho);
          const auto [z2, s2] = F.zeta(a, nu, rho);
          if (s1 != 0 && s2 != 0) p.add(z1, z2, Surd(s1 * s2));
        }
      }
      push({CurrentSpecies::T, -1, mu, nu}, std::move(p));
    }
}

Pattern CurrentFamily::H_pattern(int a, int mu, int nu) const {
  Pattern p;
  for (const auto& e : sc_->f_row(a)) {
    const auto [z, s] = layout_.zeta(e.c, mu, nu);
    if (s != 0) p.add(z, layout_.phi(e.b), e.value * Rational(s));
  }
  return p;
}

std::vector<const Current*> CurrentFamily::kac_moody() const {
  std::vector<const Current*> out;
  for (const auto& c : currents_)
    if (c.label.species != CurrentSpecies::T) out.push_back(&c);
  return out;
}

CurrentFamily build_currents(std::shared_ptr<const StructureConstants> sc, int N, ZetaSymmetry zeta) {
  return CurrentFamily(std::move(sc), N, zeta);
}

namespace {

// Number of modes k at which both contractions of the (X_m Y_-m) product are
// nonzero: <b(m-k) a(k-m)> and <a(k) b(-k)>.
int double_contraction_count(int m, const Oscillators& osc) {
  int count = 0;
  const int reach = std::abs(m) + 1;
  for (int k = -reach; k <= reach; ++k)
    if (osc.annihilates(Ladder::kB, m - k) && !osc.annihilates(Ladder::kA, k - m) &&
        osc.annihilates(Ladder::kA, k) && !osc.annihilates(Ladder::kB, -k))
      ++count;
  return count;
}

}  // namespace

CommutatorResult mode_commutator(const CurrentMode& x, const CurrentMode& y, FrequencySplit split) {
  CommutatorResult r;
  r.bilinear = Pattern::commutator(x.pattern, y.pattern);
  r.mode = x.mode + y.mode;
  if (r.mode == 0) {
    const Oscillators osc{split};
    const int net = double_contraction_count(x.mode, osc) - double_contraction_count(y.mode, osc);
    if (net != 0) r.anomaly = -Pattern::trace_product(x.pattern, y.pattern) * Rational(net);
  }
  return r;
}

Pattern expected_bracket(const CurrentFamily& fam, const CurrentLabel& x, const CurrentLabel& y) {
  using CS = CurrentSpecies;
  const StructureConstants& sc = fam.sc();
  const int D = sc.dim();
  if (y.species == CS::T && x.species != CS::T) return Surd(-1) * expected_bracket(fam, y, x);
  Pattern out;
  if (x.species == CS::T) {
    const int mu = x.mu, nu = x.nu;
    switch (y.species) {
      case CS::T:
        if (y.mu == nu) out += fam.T(mu, y.nu).pattern;
        if (y.nu == mu) out -= fam.T(y.mu, nu).pattern;
        break;
      case CS::G:
        if (y.mu == nu) out += fam.G(y.adj, mu).pattern;
        break;
      case CS::H:
        if (y.mu == nu) out += fam.H_pattern(y.adj, mu, y.nu);
        if (y.nu == nu) out += fam.H_pattern(y.adj, y.mu, mu);
        break;
      case CS::J: break;
    }
    return out;
  }
  if (static_cast<int>(x.species) > static_cast<int>(y.species)) return Surd(-1) * expected_bracket(fam, y, x);
  const int a = x.adj, b = y.adj;
  for (int c = 0; c < D; ++c) {
    const Surd& f = sc.f(a, b, c);
    const Surd& d = sc.d(a, b, c);
    if (x.species == CS::J) {
      if (f.is_zero()) continue;
      if (y.species == CS::J) out += f * fam.J(c).pattern;
      if (y.species == CS::G) out += f * fam.G(c, y.mu).pattern;
      if (y.species == CS::H) out += f * fam.H_pattern(c, y.mu, y.nu);
    } else if (x.species == CS::G && y.species == CS::G && !d.is_zero()) {
      out += d * fam.H_pattern(c, x.mu, y.mu);
    }
  }
  return out;
}

Surd expected_anomaly(const CurrentLabel& x, const CurrentLabel& y, int m, const Surd& k, const Surd& k1,
                      const Surd& k2) {
  using CS = CurrentSpecies;
  if (x.species == CS::J && y.species == CS::J) return x.adj == y.adj ? -k * Rational(m) : Surd();
  if (x.species == CS::T && y.species == CS::T) {
    Surd s;
    if (x.mu == y.nu && y.mu == x.nu) s += k1;
    if (x.mu == x.nu && y.mu == y.nu) s += k2;
    return s * Rational(m);
  }
  return {};
}

LevelMeasurement measure_level(const CurrentFamily& fam, FrequencySplit split) {
  const int D = fam.sc().dim();
  LevelMeasurement out;
  bool first = true;
  for (int m = 1; m <= 3; ++m)
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) {
        const Surd an = mode_commutator(CurrentMode::of(fam.J(a), m), CurrentMode::of(fam.J(b), -m), split).anomaly;
        if (a != b) {
          if (!an.is_zero())
            throw std::runtime_error("Kac-Moody anomaly not proportional to delta^{ab}: [J^" + std::to_string(a + 1) +
                                     ", J^" + std::to_string(b + 1) + "] = " + an.str());
          continue;
        }
        if (a == 0) out.samples.emplace_back(m, an);
        const Surd k = -an * Rational(1, m);
        if (first) {
          out.k = k;
          first = false;
        } else if (k != out.k) {
          throw std::runtime_error("Kac-Moody anomaly is not of the form -k m delta^{ab} (m = " + std::to_string(m) +
                                   ", a = " + std::to_string(a + 1) + ")");
        }
      }
  return out;
}

GlMeasurement measure_k1_k2(const CurrentFamily& fam, FrequencySplit split) {
  const int N = fam.N();
  if (N < 2) throw std::invalid_argument("k1 and k2 are only separable for N >= 2");
  if (!fam.has_T()) throw std::invalid_argument("gl(N) currents need antisymmetric zeta");
  auto anomaly = [&](int mu, int nu, int sigma, int tau, int m) {
    return mode_commutator(CurrentMode::of(fam.T(mu, nu), m), CurrentMode::of(fam.T(sigma, tau), -m), split).anomaly;
  };
  GlMeasurement g{anomaly(0, 1, 1, 0, 1), anomaly(0, 0, 1, 1, 1)};
  for (int mu = 0; mu < N; ++mu)
    for (int nu = 0; nu < N; ++nu)
      for (int sigma = 0; sigma < N; ++sigma)
        for (int tau = 0; tau < N; ++tau) {
          const CurrentLabel x = fam.T(mu, nu).label, y = fam.T(sigma, tau).label;
          if (Pattern::commutator(fam.T(mu, nu).pattern, fam.T(sigma, tau).pattern) != expected_bracket(fam, x, y))
            throw std::runtime_error("gl(N) bilinear part fails for [" + x.str() + ", " + y.str() + "]");
          for (int m = 1; m <= 3; ++m)
            if (anomaly(mu, nu, sigma, tau, m) != expected_anomaly(x, y, m, Surd(), g.k1, g.k2))
              throw std::runtime_error("gl(N) anomaly is not m(k1 d d + k2 d d) for [" + x.str() + ", " + y.str() + "]");
        }
  return g;
}

CurrentAlgebraReport check_current_algebra(const CurrentFamily& fam, FrequencySplit split, const std::vector<int>& modes,
                                           bool include_T) {
  CurrentAlgebraReport rep;
  rep.k = measure_level(fam, split).k;
  const bool with_T = include_T && fam.has_T() && fam.N() >= 2;
  if (with_T) {
    const auto g = measure_k1_k2(fam, split);
    rep.k1 = g.k1;
    rep.k2 = g.k2;
  }
  std::vector<const Current*> cur;
  for (const auto& c : fam.all())
    if (with_T || c.label.species != CurrentSpecies::T) cur.push_back(&c);
  std::set<std::string> anomalous;
  for (const Current* x : cur)
    for (const Current* y : cur) {
      const Pattern want = expected_bracket(fam, x->label, y->label);
      const Pattern got = Pattern::commutator(x->pattern, y->pattern);
      const bool bil = got == want;
      for (int m : modes)
        for (int n : modes) {
          ++rep.checked;
          const auto r = mode_commutator(CurrentMode::of(*x, m), CurrentMode::of(*y, n), split);
          const Surd an_want =
              m + n == 0 ? expected_anomaly(x->label, y->label, m, rep.k, rep.k1, rep.k2) : Surd();
          if (!r.anomaly.is_zero())
            anomalous.insert(to_string(x->label.species) + "," + to_string(y->label.species));
          if (!bil || r.anomaly != an_want)
            rep.failures.push_back({x->label, y->label, m, n, bil, r.anomaly == an_want, r.anomaly});
        }
    }
  rep.anomalous_pairs.assign(anomalous.begin(), anomalous.end());
  return rep;
}

std::size_t wick_jacobi_failures(const CurrentFamily& fam, FrequencySplit split, int m, int n) {
  const int r = -m - n;
  const auto& cur = fam.all();
  std::size_t failures = 0;
  auto outer = [&](const CurrentMode& x, const CommutatorResult& inner) {
    return mode_commutator(x, CurrentMode{inner.bilinear, inner.mode, ""}, split);
  };
  for (std::size_t i = 0; i < cur.size(); ++i)
    for (std::size_t j = 0; j < cur.size(); ++j)
      for (std::size_t k = j; k < cur.size(); ++k) {
        const auto X = CurrentMode::of(cur[i], m), Y = CurrentMode::of(cur[j], n), Z = CurrentMode::of(cur[k], r);
        const auto a = outer(X, mode_commutator(Y, Z, split));
        const auto b = outer(Y, mode_commutator(Z, X, split));
        const auto c = outer(Z, mode_commutator(X, Y, split));
        if (!(a.bilinear + b.bilinear + c.bilinear).is_zero() || !(a.anomaly + b.anomaly + c.anomaly).is_zero())
          ++failures;
      }
  return failures;
}

}  // namespace mfock
