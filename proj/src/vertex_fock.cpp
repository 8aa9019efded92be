#include "mfock/vertex_fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

namespace mfock {

namespace {

constexpr Complex kI{0, 1};
constexpr double kPrune = 1e-13;

int abs_sum(const Momentum& m) {
  int s = 0;
  for (int v : m) s += std::abs(v);
  return s;
}

}  // namespace

std::string momentum_str(const Momentum& m, int N) {
  std::string s = "(";
  for (int mu = 0; mu < N; ++mu) s += (mu ? "," : "") + std::to_string(m[mu]);
  return s + ")";
}

void TruncationSpec::validate() const {
  if (N < 1 || N > kMaxDim) throw std::invalid_argument("N must be between 1 and 4");
  if (L < 1 || P < 1 || M < 1) throw std::invalid_argument("L, P and M must be >= 1");
  if (P > 100 || M > 100 || L > 100) throw std::invalid_argument("truncation windows must be <= 100");
}

std::string TruncationSpec::str() const {
  std::ostringstream os;
  os << "N=" << N << " L=" << L << " P=" << P << " M=" << M;
  return os.str();
}

CVector OperatorMatrix::apply(const CVector& v) const {
  CVector out;
  for (const auto& [s, c] : v) {
    auto it = columns.find(s);
    if (it != columns.end()) accumulate(out, it->second, c);
  }
  return out;
}

Complex OperatorMatrix::element(const FockState& row, const FockState& col) const {
  auto it = columns.find(col);
  if (it == columns.end()) return {};
  auto jt = it->second.find(row);
  return jt == it->second.end() ? Complex{} : jt->second;
}

std::string NumericGenerator::str(int N) const {
  Generator g;
  g.species = species;
  g.adj = static_cast<std::int8_t>(adj);
  for (int i = 0; i < 3; ++i) g.idx[i] = static_cast<std::int8_t>(idx[i]);
  std::string s = g.str();
  // The formal rendering ends with the symbolic argument "(...)"; replace it.
  s = s.substr(0, s.rfind('('));
  return s + momentum_str(m, N);
}

VertexFock::VertexFock(std::shared_ptr<const CurrentFamily> fam, TruncationSpec spec, FrequencySplit split,
                       bool with_T)
    : fam_(std::move(fam)), spec_(spec), osc_{split}, with_T_(with_T && fam_->has_T()) {
  spec_.validate();
  if (fam_->N() != spec_.N) throw std::invalid_argument("current family and truncation disagree on N");
  for (const auto& c : fam_->all()) ops_.emplace_back(c.pattern);
}

const detail::BilinearOp<Complex>& VertexFock::op(const Current& c) const {
  return ops_[static_cast<std::size_t>(&c - fam_->all().data())];
}

bool VertexFock::in_window(const FockState& s) const {
  for (int mu = 0; mu < kMaxDim; ++mu)
    if (std::abs(s.lattice[mu]) > (mu < spec_.N ? spec_.P : 0)) return false;
  for (auto code : s.quanta) {
    const auto kind = quantum_kind(code);
    if ((kind == QuantumKind::kQ || kind == QuantumKind::kP) && std::abs(quantum_mode(code)) > spec_.M) return false;
  }
  return osc_.weight(s) <= spec_.L;
}

void VertexFock::settle(CVector& v, bool* leaked) const {
  for (auto it = v.begin(); it != v.end();) {
    if (std::abs(it->second) < kPrune) {
      it = v.erase(it);
    } else if (!in_window(it->first)) {
      if (leaked) *leaked = true;
      it = v.erase(it);
    } else {
      ++it;
    }
  }
}

void VertexFock::vertex_state(const Momentum& m, int k, const FockState& s, const Complex& c, CVector& out,
                              bool* leaked) const {
  if (abs_sum(m) == 0) {
    if (k == 0) accumulate(out, s, c);
    return;
  }
  const int N = spec_.N;
  // Annihilating part: q^mu_l removes p-quanta (mu, -l); exponent bounded by occupation.
  struct Slot {
    int mu, l, occ;
  };
  std::vector<Slot> ann;
  for (std::size_t u = 0; u < s.quanta.size(); ++u) {
    const auto code = s.quanta[u];
    if (quantum_kind(code) != QuantumKind::kP || (u > 0 && s.quanta[u - 1] == code)) continue;
    const int mu = quantum_comp(code);
    if (m[mu] != 0) ann.push_back({mu, -quantum_mode(code), s.count(code)});
  }
  // Creating part: modes l with q_l a creator, same sign for all.
  const int sigma = -split_sign(osc_.split);
  std::vector<int> cre_mu;
  for (int mu = 0; mu < N; ++mu)
    if (m[mu] != 0) cre_mu.push_back(mu);

  std::function<void(std::size_t, FockState&, Complex, int)> annihilate;
  // Creators: each slot (mu, |l|) gets a multiplicity r with factor (i m_mu)^r / r!.
  std::vector<std::pair<int, int>> slots;
  std::function<void(std::size_t, int, FockState&, Complex)> create = [&](std::size_t i, int rem, FockState& st,
                                                                           Complex coef) {
    if (rem == 0) {
      accumulate(out, st, coef);
      return;
    }
    if (i == slots.size()) return;
    const auto [mu, p] = slots[i];
    create(i + 1, rem, st, coef);
    const auto code = quantum_code(QuantumKind::kQ, mu, sigma * p);
    int r = 0;
    for (int left = rem - p; left >= 0; left -= p) {
      st.insert(code);
      coef *= kI * double(m[mu]) / double(++r);
      create(i + 1, left, st, coef);
    }
    for (; r > 0; --r) st.remove(code);
  };
  annihilate = [&](std::size_t i, FockState& st, Complex coef, int lsum) {
    if (i == ann.size()) {
      FockState t = st;
      for (int mu = 0; mu < N; ++mu) t.lattice[mu] = static_cast<std::int8_t>(t.lattice[mu] + m[mu]);
      const int need = k - lsum;
      if (need != 0 && (need > 0) != (sigma > 0)) return;
      slots.clear();
      for (int mu : cre_mu)
        for (int p = 1; p <= std::abs(need); ++p) slots.emplace_back(mu, p);
      create(0, std::abs(need), t, coef);
      return;
    }
    const Slot& sl = ann[i];
    Complex cf = coef;
    annihilate(i + 1, st, cf, lsum);
    for (int r = 1; r <= sl.occ; ++r) {
      const int c = osc_.apply(Ladder::kQ, sl.mu, sl.l, st);
      cf *= double(c) * kI * double(m[sl.mu]) / double(r);
      annihilate(i + 1, st, cf, lsum + sl.l * r);
    }
    for (int r = 1; r <= sl.occ; ++r) st.insert(quantum_code(QuantumKind::kP, sl.mu, -sl.l));
  };
  FockState st = s;
  annihilate(0, st, c, 0);
  (void)leaked;
}

CVector VertexFock::vertex(const Momentum& m, int k, const CVector& v, bool* leaked) const {
  CVector out;
  for (const auto& [s, c] : v) vertex_state(m, k, s, c, out, leaked);
  settle(out, leaked);
  return out;
}

// scale * sum_j E_m[-j] X_j v; only |j| <= energy + 1 can contribute.
void VertexFock::current_term(const Pattern& p, const Momentum& m, const CVector& v, const Complex& scale,
                              CVector& out, bool* leaked) const {
  const detail::BilinearOp<Complex>* bop = nullptr;
  for (const auto& c : fam_->all())
    if (&c.pattern == &p) bop = &op(c);
  std::optional<detail::BilinearOp<Complex>> local;
  if (!bop) bop = &local.emplace(p);
  for (const auto& [s, c] : v) {
    const int E = osc_.energy(s);
    for (int j = -E - 1; j <= E + 1; ++j) {
      CVector tmp;
      detail::apply(*bop, j, s, c * scale, osc_, tmp);
      for (const auto& [t, ct] : tmp)
        if (std::abs(ct) >= kPrune) vertex_state(m, -j, t, ct, out, leaked);
    }
  }
}

CVector VertexFock::apply(const NumericGenerator& g, const CVector& v, bool* leaked) const {
  const CurrentFamily& F = *fam_;
  CVector out;
  switch (g.species) {
    case Species::J:
      current_term(F.J(g.adj).pattern, g.m, v, 1.0, out, leaked);
      break;
    case Species::G:
      current_term(F.G(g.adj, g.idx[0]).pattern, g.m, v, 1.0, out, leaked);
      break;
    case Species::H: {
      const int mu = g.idx[0], nu = g.idx[1];
      if (mu == nu && F.layout().zeta_symmetry() == ZetaSymmetry::kAntisymmetric) break;
      if (mu < nu || F.layout().zeta_symmetry() == ZetaSymmetry::kSymmetric)
        current_term(F.H(g.adj, std::min(mu, nu), std::max(mu, nu)).pattern, g.m, v, 1.0, out, leaked);
      else
        current_term(F.H(g.adj, nu, mu).pattern, g.m, v, -1.0, out, leaked);
      break;
    }
    case Species::S1: {
      // sum_l (-i l) q^rho_l E_m[-l]
      const int rho = g.idx[0];
      for (const auto& [s, c] : v) {
        const int E = osc_.energy(s);
        for (int l = -E - 1; l <= E + 1; ++l) {
          if (l == 0) continue;
          CVector tmp;
          vertex_state(g.m, -l, s, c * (-kI * double(l)), tmp, leaked);
          for (auto [t, ct] : tmp) {
            FockState u = t;
            const int f = osc_.apply(Ladder::kQ, rho, l, u);
            if (f != 0) accumulate(out, u, ct * double(f));
          }
        }
      }
      break;
    }
    case Species::L: {
      const int mu = g.idx[0];
      for (const auto& [s, c] : v) {
        // p_0 = i P on the right: -i E_m[0] (i P_mu) = E_m[0] P_mu.
        if (s.lattice[mu] != 0) vertex_state(g.m, 0, s, c * double(s.lattice[mu]), out, leaked);
        const int E = osc_.energy(s);
        for (int j = -E - 1; j <= E + 1; ++j) {
          if (j == 0) continue;
          if (osc_.annihilates(Ladder::kP, j)) {
            FockState u = s;
            const int f = osc_.apply(Ladder::kP, mu, j, u);
            if (f != 0) vertex_state(g.m, -j, u, c * (-kI) * double(f), out, leaked);
          } else {
            CVector tmp;
            vertex_state(g.m, -j, s, c * (-kI), tmp, leaked);
            for (auto [t, ct] : tmp) {
              FockState u = t;
              osc_.apply(Ladder::kP, mu, j, u);
              accumulate(out, u, ct);
            }
          }
        }
      }
      if (with_T_)
        for (int nu = 0; nu < spec_.N; ++nu)
          if (g.m[nu] != 0) current_term(F.T(nu, mu).pattern, g.m, v, double(g.m[nu]), out, leaked);
      break;
    }
    default:
      throw std::invalid_argument("no Fock realization for " + to_string(g.species));
  }
  settle(out, leaked);
  return out;
}

std::vector<FockState> VertexFock::basis(int max_weight, int lattice_radius, bool fields) const {
  std::vector<std::pair<std::uint32_t, int>> kinds;
  auto consider = [&](QuantumKind kind, Ladder l, int comp, int mode) {
    if (osc_.annihilates(l, mode)) return;
    const auto code = quantum_code(kind, comp, mode);
    if (osc_.weight(code) <= max_weight) kinds.emplace_back(code, osc_.weight(code));
  };
  for (int k = -max_weight; k <= max_weight; ++k) {
    if (fields)
      for (int i = 0; i < fam_->layout().size(); ++i) {
        consider(QuantumKind::kA, Ladder::kA, i, k);
        consider(QuantumKind::kB, Ladder::kB, i, k);
      }
    if (k == 0 || std::abs(k) > spec_.M) continue;
    for (int mu = 0; mu < spec_.N; ++mu) {
      consider(QuantumKind::kQ, Ladder::kQ, mu, k);
      consider(QuantumKind::kP, Ladder::kP, mu, k);
    }
  }
  std::sort(kinds.begin(), kinds.end());
  std::vector<FockState> quanta_states;
  FockState st;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int budget) {
    quanta_states.push_back(st);
    for (std::size_t u = from; u < kinds.size(); ++u) {
      if (kinds[u].second > budget) continue;
      st.insert(kinds[u].first);
      rec(u, budget - kinds[u].second);
      st.remove(kinds[u].first);
    }
  };
  rec(0, max_weight);
  const int R = std::min(lattice_radius, spec_.P);
  std::vector<Momentum> lattice{Momentum{}};
  for (int mu = 0; mu < spec_.N; ++mu) {
    std::vector<Momentum> next;
    for (const auto& p : lattice)
      for (int v = -R; v <= R; ++v) {
        Momentum q = p;
        q[mu] = v;
        next.push_back(q);
      }
    lattice = std::move(next);
  }
  std::vector<FockState> out;
  out.reserve(quanta_states.size() * lattice.size());
  for (const auto& p : lattice)
    for (const auto& q : quanta_states) {
      FockState s = q;
      for (int mu = 0; mu < kMaxDim; ++mu) s.lattice[mu] = static_cast<std::int8_t>(p[mu]);
      out.push_back(std::move(s));
    }
  return out;
}

OperatorMatrix VertexFock::matrix(const NumericGenerator& g, const std::vector<FockState>& columns) const {
  OperatorMatrix out;
  for (const auto& s : columns) {
    bool leaked = false;
    auto img = apply(g, CVector{{s, Complex(1)}}, &leaked);
    if (leaked) ++out.leaked_columns;
    out.columns.emplace(s, std::move(img));
  }
  return out;
}

OperatorMatrix build_vertex(const VertexFock& engine, const Momentum& m, int n) {
  const auto& spec = engine.spec();
  for (int mu = 0; mu < kMaxDim; ++mu)
    if (std::abs(m[mu]) > (mu < spec.N ? spec.P : 0))
      throw BoundaryError("vertex momentum " + momentum_str(m, spec.N) + " outside the lattice window");
  OperatorMatrix out;
  for (const auto& s : engine.basis(spec.L, spec.P, false)) {
    bool leaked = false;
    auto img = engine.vertex(m, n, CVector{{s, Complex(1)}}, &leaked);
    if (leaked) ++out.leaked_columns;
    out.columns.emplace(s, std::move(img));
  }
  return out;
}

Charges predicted_charges(const CurrentFamily& fam, FrequencySplit split, bool with_T) {
  Charges c;
  c.k = measure_level(fam, split).k.to_double();
  const double qp = split == FrequencySplit::kNegativeModesAnnihilate ? 1.0 : -1.0;
  c.c1 = qp;
  if (!with_T || !fam.has_T()) return c;
  if (fam.N() >= 2) {
    const auto g = measure_k1_k2(fam, split);
    c.c1 += g.k1.to_double();
    c.c2 = g.k2.to_double();
  } else {
    // Only k1 + k2 exists at N = 1; the cocycle multiplies m n m S1, which vanishes there.
    c.c1 += mode_commutator(CurrentMode::of(fam.T(0, 0), 1), CurrentMode::of(fam.T(0, 0), -1), split)
                .anomaly.to_double();
  }
  return c;
}

namespace {

NumericGenerator numeric(const Generator& g, const Momentum& m) {
  NumericGenerator n;
  n.species = g.species;
  n.adj = g.adj;
  for (int i = 0; i < 3; ++i) n.idx[i] = g.idx[i];
  n.m = m;
  return n;
}

Momentum combine(const Arg& a, const Momentum& m, const Momentum& n) {
  Momentum r{};
  for (int mu = 0; mu < kMaxDim; ++mu) r[mu] = a.c[0] * m[mu] + a.c[1] * n[mu];
  return r;
}

Momentum operator+(const Momentum& a, const Momentum& b) {
  Momentum r{};
  for (int mu = 0; mu < kMaxDim; ++mu) r[mu] = a[mu] + b[mu];
  return r;
}

double evaluate(const Polynomial& p, const Momentum& m, const Momentum& n, const Charges& ch) {
  return p.evaluate([&](int var) -> double {
    if (var == kVarK) return ch.k;
    if (var == kVarC1) return ch.c1;
    if (var == kVarC2) return ch.c2;
    const int symbol = var / kMaxDim, mu = var % kMaxDim;
    return symbol == 0 ? m[mu] : symbol == 1 ? n[mu] : 0.0;
  });
}

std::vector<Momentum> unit_box(int N) {
  std::vector<Momentum> out{Momentum{}};
  for (int mu = 0; mu < N; ++mu) {
    std::vector<Momentum> next;
    for (const auto& p : out)
      for (int v = -1; v <= 1; ++v) {
        Momentum q = p;
        q[mu] = v;
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<FockState> spaced(std::vector<FockState> all, std::size_t max) {
  if (max == 0 || all.size() <= max) return all;
  std::vector<FockState> out;
  for (std::size_t i = 0; i < max; ++i) out.push_back(all[i * all.size() / max]);
  return out;
}

// Images of one source under realized generators, computed on demand.
class SourceImages {
 public:
  SourceImages(const VertexFock& e, const FockState& s) : e_(e), v_{{s, Complex(1)}} {}
  const CVector& get(const NumericGenerator& g, bool& leaked) {
    auto it = cache_.find(g);
    if (it == cache_.end()) {
      bool lk = false;
      CVector img = e_.apply(g, v_, &lk);
      it = cache_.emplace(g, std::make_pair(std::move(img), lk)).first;
    }
    leaked = leaked || it->second.second;
    return it->second.first;
  }

 private:
  const VertexFock& e_;
  CVector v_;
  std::map<NumericGenerator, std::pair<CVector, bool>> cache_;
};

double max_abs_diff(const CVector& a, const CVector& b, const VertexFock* restrict_to = nullptr) {
  double d = 0;
  for (const auto& [s, c] : a) {
    if (restrict_to && !restrict_to->in_window(s)) continue;
    auto it = b.find(s);
    d = std::max(d, std::abs(c - (it == b.end() ? Complex{} : it->second)));
  }
  for (const auto& [s, c] : b) {
    if (restrict_to && !restrict_to->in_window(s)) continue;
    if (!a.count(s)) d = std::max(d, std::abs(c));
  }
  return d;
}

struct Bracket {
  Generator x, y;  // arguments m and n
  Expression rhs;
};

std::vector<Bracket> table_brackets(const AlgebraTable& table) {
  std::vector<Generator> gens;
  for (const auto& g : table.generators(kArgM))
    if (g.species != Species::S3 && g.species != Species::Delta) gens.push_back(g);
  std::vector<Bracket> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      Generator y = gens[j];
      y.arg = kArgN;
      out.push_back({gens[i], y, bracket(table, Expression::of(gens[i]), Expression::of(y))});
    }
  return out;
}

// lhs = [X(m), Y(n)]|s> with truncated intermediate states, rhs = table right-hand
// side on |s>; returns false if any step lost amplitude to a window.
bool bracket_residual(const VertexFock& e, SourceImages& img, const Bracket& b, const Momentum& m,
                      const Momentum& n, const Charges& ch, CVector& lhs, CVector& rhs) {
  bool leaked = false;
  const NumericGenerator X = numeric(b.x, m), Y = numeric(b.y, n);
  const CVector& Ys = img.get(Y, leaked);
  const CVector& Xs = img.get(X, leaked);
  lhs = e.apply(X, Ys, &leaked);
  accumulate(lhs, e.apply(Y, Xs, &leaked), Complex(-1));
  rhs.clear();
  for (const auto& [g, coeff] : b.rhs.terms()) {
    const double v = evaluate(coeff, m, n, ch);
    if (v == 0) continue;
    accumulate(rhs, img.get(numeric(g, combine(g.arg, m, n)), leaked), Complex(v));
  }
  return !leaked;
}

}  // namespace

NumericReport check_table_numeric(const AlgebraTable& table, const VertexFock& engine, const Charges& charges,
                                  const NumericCheckOptions& opt) {
  if (table.kind != TableKind::EMB2 && table.kind != TableKind::DIFF_EXT)
    throw std::invalid_argument("numeric checks cover the EMB2 and DIFF_EXT tables only");
  if (table.N != engine.spec().N) throw std::invalid_argument("table and truncation disagree on N");
  NumericReport rep;
  rep.table = table.kind;
  rep.spec = engine.spec();
  rep.tolerance = opt.tolerance;
  const auto momenta = opt.momenta.empty() ? unit_box(table.N) : opt.momenta;
  const auto brackets = table_brackets(table);
  const int W = opt.source_weight < 0 ? engine.spec().L - 2 : opt.source_weight;
  const auto sources = spaced(engine.basis(W, 0), opt.max_sources);
  rep.sources = sources.size();
  std::map<std::string, double> per_bracket;
  CVector lhs, rhs;
  for (const auto& s : sources) {
    SourceImages img(engine, s);
    for (const auto& b : brackets)
      for (const auto& m : momenta)
        for (const auto& n : momenta) {
          if (b.x == Generator{b.y.species, b.y.adj, b.y.idx, kArgM} && !(m < n)) continue;
          if (!bracket_residual(engine, img, b, m, n, charges, lhs, rhs)) {
            ++rep.leaked_columns;
            continue;
          }
          ++rep.columns;
          const double d = max_abs_diff(lhs, rhs);
          const std::string name =
              "[" + numeric(b.x, m).str(table.N) + ", " + numeric(b.y, n).str(table.N) + "]";
          double& slot = per_bracket[name];
          slot = std::max(slot, d);
          rep.max_deviation = std::max(rep.max_deviation, d);
        }
  }
  rep.brackets = per_bracket.size();
  std::vector<BracketDeviation> all;
  for (const auto& [name, d] : per_bracket) all.push_back({name, d});
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.deviation > b.deviation; });
  all.resize(std::min<std::size_t>(all.size(), 10));
  rep.worst = std::move(all);
  return rep;
}

namespace {

struct LsqRow {
  Complex target;
  std::vector<Complex> basis;
};

// Real least squares over the real and imaginary parts of every row.
FitResult solve(const std::vector<LsqRow>& rows, std::size_t n) {
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < n; ++i) {
      b[i] += (std::conj(r.basis[i]) * r.target).real();
      for (std::size_t j = 0; j < n; ++j) A[i][j] += (std::conj(r.basis[i]) * r.basis[j]).real();
    }
  // Gaussian elimination with partial pivoting.
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) < 1e-12) throw std::runtime_error("charge fit is degenerate: no cocycle support on the sources");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  FitResult fit;
  for (std::size_t i = 0; i < n; ++i) fit.values.push_back(b[i] / A[i][i]);
  for (const auto& r : rows) {
    Complex model;
    for (std::size_t i = 0; i < n; ++i) model += fit.values[i] * r.basis[i];
    fit.residual = std::max(fit.residual, std::abs(r.target - model));
  }
  fit.equations = rows.size();
  return fit;
}

void add_rows(std::vector<LsqRow>& rows, const CVector& target, const std::vector<std::pair<double, const CVector*>>& basis) {
  CVector keys = target;
  for (const auto& [w, v] : basis)
    for (const auto& [st, c] : *v) keys.try_emplace(st, Complex{});
  for (const auto& [st, c] : keys) {
    LsqRow r{c, {}};
    for (const auto& [w, v] : basis) {
      auto it = v->find(st);
      r.basis.push_back(it == v->end() ? Complex{} : w * it->second);
    }
    rows.push_back(std::move(r));
  }
}

// Momentum pairs with m + n != 0 spanning both cocycle patterns.
std::vector<std::pair<Momentum, Momentum>> fit_pairs(int N) {
  Momentum e0{}, e1{};
  e0[0] = 1;
  e1[N > 1 ? 1 : 0] = 1;
  Momentum me0{};
  me0[0] = -1;
  return {{e0, e1}, {e1, e0}, {e0, e0 + e1}, {e0 + e1, me0}, {e1, me0}};
}

NumericGenerator gen(Species s, int adj, int i0, const Momentum& m) {
  NumericGenerator g;
  g.species = s;
  g.adj = adj;
  g.idx[0] = i0;
  g.m = m;
  return g;
}

}  // namespace

FitResult measure_c1_c2(const VertexFock& engine, int source_weight) {
  const int N = engine.spec().N;
  if (N < 2) throw std::invalid_argument("c1 and c2 are only separable for N >= 2");
  const int W = source_weight < 0 ? engine.spec().L - 2 : source_weight;
  std::vector<LsqRow> rows;
  for (const auto& s : engine.basis(W, 0)) {
    SourceImages img(engine, s);
    for (const auto& [m, n] : fit_pairs(N)) {
      const Momentum mn = m + n;
      bool leaked = false;
      CVector X;
      for (int rho = 0; rho < N; ++rho)
        if (m[rho] != 0) accumulate(X, img.get(gen(Species::S1, -1, rho, mn), leaked), Complex(m[rho]));
      for (int mu = 0; mu < N; ++mu)
        for (int nu = 0; nu < N; ++nu) {
          bool lk = leaked;
          const auto& Ln = img.get(gen(Species::L, -1, nu, n), lk);
          const auto& Lm = img.get(gen(Species::L, -1, mu, m), lk);
          CVector R = engine.apply(gen(Species::L, -1, mu, m), Ln, &lk);
          accumulate(R, engine.apply(gen(Species::L, -1, nu, n), Lm, &lk), Complex(-1));
          accumulate(R, img.get(gen(Species::L, -1, nu, mn), lk), Complex(-n[mu]));
          accumulate(R, img.get(gen(Species::L, -1, mu, mn), lk), Complex(m[nu]));
          if (lk) continue;
          add_rows(rows, R, {{double(m[nu] * n[mu]), &X}, {double(m[mu] * n[nu]), &X}});
        }
    }
  }
  return solve(rows, 2);
}

FitResult measure_k_vertex(const VertexFock& engine, int source_weight) {
  const int N = engine.spec().N;
  const int D = engine.family().sc().dim();
  const int W = source_weight < 0 ? engine.spec().L - 2 : source_weight;
  const auto& sc = engine.family().sc();
  std::vector<LsqRow> rows;
  CVector zero;
  for (const auto& s : engine.basis(W, 0)) {
    SourceImages img(engine, s);
    for (const auto& [m, n] : fit_pairs(N)) {
      const Momentum mn = m + n;
      bool leaked = false;
      CVector X;
      for (int rho = 0; rho < N; ++rho)
        if (m[rho] != 0) accumulate(X, img.get(gen(Species::S1, -1, rho, mn), leaked), Complex(-m[rho]));
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) {
          bool lk = leaked;
          const auto& Jn = img.get(gen(Species::J, b, -1, n), lk);
          const auto& Jm = img.get(gen(Species::J, a, -1, m), lk);
          CVector R = engine.apply(gen(Species::J, a, -1, m), Jn, &lk);
          accumulate(R, engine.apply(gen(Species::J, b, -1, n), Jm, &lk), Complex(-1));
          for (const auto& e : sc.f_row(a))
            if (e.b == b) accumulate(R, img.get(gen(Species::J, e.c, -1, mn), lk), Complex(-e.value.to_double()));
          if (lk) continue;
          add_rows(rows, R, {{a == b ? 1.0 : 0.0, a == b ? &X : &zero}});
        }
    }
  }
  return solve(rows, 1);
}

double witt_closure_deviation(const VertexFock& engine, int max_mode) {
  if (engine.spec().N != 1) throw std::invalid_argument("Witt closure is an N = 1 check");
  const int P = engine.spec().P;
  double dev = 0;
  for (const auto& s : engine.basis(engine.spec().L - 2, 0)) {
    SourceImages img(engine, s);
    for (int m = -max_mode; m <= max_mode; ++m)
      for (int n = -max_mode; n <= max_mode; ++n) {
        if (std::abs(m) > P || std::abs(n) > P || std::abs(m + n) > P) continue;
        bool lk = false;
        const Momentum M{m}, Nm{n}, MN{m + n};
        const auto& Ln = img.get(gen(Species::L, -1, 0, Nm), lk);
        const auto& Lm = img.get(gen(Species::L, -1, 0, M), lk);
        CVector R = engine.apply(gen(Species::L, -1, 0, M), Ln, &lk);
        accumulate(R, engine.apply(gen(Species::L, -1, 0, Nm), Lm, &lk), Complex(-1));
        accumulate(R, img.get(gen(Species::L, -1, 0, MN), lk), Complex(m - n));
        if (lk) continue;
        dev = std::max(dev, max_abs_diff(R, CVector{}));
      }
  }
  return dev;
}

bool ConvergenceReport::ok() const {
  if (points.empty()) return false;
  for (const auto& p : points)
    if (!(p.deviation_high < p.deviation_low)) return false;
  return true;
}

ConvergenceReport check_convergence(const AlgebraTable& table, std::shared_ptr<const CurrentFamily> fam,
                                    const TruncationSpec& spec, FrequencySplit split, const Charges& charges,
                                    std::size_t max_sources) {
  ConvergenceReport rep;
  rep.low = spec;
  rep.high = spec;
  rep.high.L += 2;
  rep.high.M += 2;
  const VertexFock low(fam, rep.low, split), high(fam, rep.high, split);
  std::vector<FockState> near;
  for (const auto& s : low.basis(spec.L, 0))
    if (low.oscillators().weight(s) >= spec.L - 1) near.push_back(s);
  std::vector<Momentum> momenta;
  for (int mu = 0; mu < spec.N; ++mu)
    for (int v : {1, -1}) {
      Momentum m{};
      m[mu] = v;
      momenta.push_back(m);
    }
  const auto brackets = table_brackets(table);
  CVector lhs, rhs, lhs_h, rhs_h;
  for (const auto& s : spaced(near, max_sources)) {
    // Truncated products at the low cutoff: windows drop amplitude, which is the deviation.
    SourceImages img_low(low, s), img_high(high, s);
    for (const auto& b : brackets)
      for (const auto& m : momenta)
        for (const auto& n : momenta) {
          if (b.x == Generator{b.y.species, b.y.adj, b.y.idx, kArgM} && !(m < n)) continue;
          bracket_residual(low, img_low, b, m, n, charges, lhs, rhs);
          const double d_low = max_abs_diff(lhs, rhs);
          if (d_low <= 1e-9) continue;
          bracket_residual(high, img_high, b, m, n, charges, lhs_h, rhs_h);
          rep.points.push_back({"[" + numeric(b.x, m).str(spec.N) + ", " + numeric(b.y, n).str(spec.N) + "]",
                                s.str(), d_low, max_abs_diff(lhs_h, rhs_h, &low)});
        }
  }
  return rep;
}

}  // namespace mfock
