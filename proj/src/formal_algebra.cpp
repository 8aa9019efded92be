#include "mfock/formal_algebra.hpp"

namespace mfock {
namespace {

Polynomial charge(int var) { return Polynomial::var(var); }

// m_rho X^{..rho..}(p) summed over rho, with `make(rho)` building the generator.
template <class Make>
Expression contract(const Arg& a, int N, Make make) {
  Expression out;
  for (int rho = 0; rho < N; ++rho) out += a.component(rho) * make(rho);
  return out;
}

Expression gen_bracket(const AlgebraTable& t, const Generator& x, const Generator& y);

Expression l_bracket(const AlgebraTable& t, const Generator& x, const Generator& y) {
  const int N = t.N;
  const Arg& a = x.arg;
  const Arg p = x.arg + y.arg;
  const int mu = x.idx[0];
  const Polynomial b_mu = y.arg.component(mu);
  const int c = y.adj;
  switch (y.species) {
    case Species::L: {
      const int nu = y.idx[0];
      const Polynomial cocycle =
          charge(kVarC1) * a.component(nu) * b_mu + charge(kVarC2) * a.component(mu) * y.arg.component(nu);
      return b_mu * Expression::L(nu, p) - a.component(nu) * Expression::L(mu, p) +
             cocycle * contract(a, N, [&](int rho) { return Expression::S1(rho, p); });
    }
    case Species::J: return b_mu * Expression::J(c, p);
    case Species::G: {
      const int nu = y.idx[0];
      Expression out = b_mu * Expression::G(c, nu, p);
      if (nu == mu) out += contract(a, N, [&](int rho) { return Expression::G(c, rho, p); });
      return out;
    }
    case Species::H: {
      const int nu = y.idx[0], rho = y.idx[1];
      Expression out = b_mu * Expression::H(c, nu, rho, p);
      if (nu == mu) out += contract(a, N, [&](int s) { return Expression::H(c, s, rho, p); });
      if (rho == mu) out += contract(a, N, [&](int s) { return Expression::H(c, nu, s, p); });
      return out;
    }
    case Species::S1: {
      const int nu = y.idx[0];
      Expression out = b_mu * Expression::S1(nu, p);
      if (nu == mu) out += contract(a, N, [&](int rho) { return Expression::S1(rho, p); });
      return out;
    }
    default: return {};
  }
}

Expression gen_bracket(const AlgebraTable& t, const Generator& x, const Generator& y) {
  if (y.species < x.species) return -gen_bracket(t, y, x);
  const StructureConstants& sc = *t.sc;
  const int D = sc.dim(), N = t.N;
  const TableKind k = t.kind;
  const Arg p = x.arg + y.arg;
  const int a = x.adj, b = y.adj;
  Expression out;
  if (x.species == Species::L) return k == TableKind::DIFF_EXT ? l_bracket(t, x, y) : out;

  auto f_sum = [&](auto make) {
    for (int c = 0; c < D; ++c)
      if (!sc.f(a, b, c).is_zero()) out += Polynomial(sc.f(a, b, c)) * make(c);
  };
  auto d_sum = [&](const Polynomial& coeff, auto make) {
    for (int c = 0; c < D; ++c)
      if (!sc.d(a, b, c).is_zero()) out += (coeff * Polynomial(sc.d(a, b, c))) * make(c);
  };
  const bool s3_table = k == TableKind::MF || k == TableKind::EMB1;
  const bool kac_moody = k == TableKind::CLASSICAL_MF || k == TableKind::EMB2 || k == TableKind::DIFF_EXT;
  const bool mf_cocycle = k == TableKind::MF || k == TableKind::CLASSICAL_MF;

  if (x.species == Species::J) {
    switch (y.species) {
      case Species::J:
        f_sum([&](int c) { return Expression::J(c, p); });
        if (mf_cocycle)
          for (int mu = 0; mu < N; ++mu)
            for (int nu = 0; nu < N; ++nu)
              if (mu != nu)
                d_sum(x.arg.component(mu) * y.arg.component(nu),
                      [&](int c) { return Expression::H(c, mu, nu, p); });
        if (kac_moody && a == b)
          out -= charge(kVarK) * contract(x.arg, N, [&](int rho) { return Expression::S1(rho, p); });
        break;
      case Species::G:
        f_sum([&](int c) { return Expression::G(c, y.idx[0], p); });
        break;
      case Species::H:
        f_sum([&](int c) { return Expression::H(c, y.idx[0], y.idx[1], p); });
        if (s3_table && a == b)
          out += contract(x.arg, N, [&](int rho) { return Expression::S3(y.idx[0], y.idx[1], rho, p); });
        break;
      default: break;
    }
  } else if (x.species == Species::G && y.species == Species::G) {
    if (k == TableKind::EMB1 || k == TableKind::EMB2 || k == TableKind::DIFF_EXT)
      d_sum(Polynomial(1), [&](int c) { return Expression::H(c, x.idx[0], y.idx[0], p); });
  }
  return out;
}

void check_species(const AlgebraTable& t, const Expression& e) {
  for (const auto& [g, c] : e.terms())
    if (!t.uses(g.species))
      throw TableMismatch("species " + to_string(g.species) + " is not part of table " + to_string(t.kind));
}

}  // namespace

bool AlgebraTable::uses(Species s) const {
  switch (s) {
    case Species::J:
    case Species::H: return true;
    case Species::G: return kind != TableKind::MF && kind != TableKind::CLASSICAL_MF;
    case Species::S1:
      return kind == TableKind::CLASSICAL_MF || kind == TableKind::EMB2 || kind == TableKind::DIFF_EXT;
    case Species::S3: return kind == TableKind::MF || kind == TableKind::EMB1;
    case Species::L: return kind == TableKind::DIFF_EXT;
    case Species::Delta: return mode == ChainMode::CONCRETE_3D;
  }
  return false;
}

std::vector<Generator> AlgebraTable::generators(Arg arg) const {
  std::vector<Generator> out;
  const int D = sc->dim();
  auto i8 = [](int v) { return static_cast<std::int8_t>(v); };
  if (uses(Species::L))
    for (int mu = 0; mu < N; ++mu) out.push_back({Species::L, -1, {i8(mu), -1, -1}, arg});
  for (int a = 0; a < D; ++a) out.push_back({Species::J, i8(a), {-1, -1, -1}, arg});
  if (uses(Species::G))
    for (int a = 0; a < D; ++a)
      for (int mu = 0; mu < N; ++mu) out.push_back({Species::G, i8(a), {i8(mu), -1, -1}, arg});
  for (int a = 0; a < D; ++a)
    for (int mu = 0; mu < N; ++mu)
      for (int nu = mu + 1; nu < N; ++nu) out.push_back({Species::H, i8(a), {i8(mu), i8(nu), -1}, arg});
  if (uses(Species::S1))
    for (int rho = 0; rho < N; ++rho) out.push_back({Species::S1, -1, {i8(rho), -1, -1}, arg});
  if (uses(Species::S3)) {
    if (mode == ChainMode::CONCRETE_3D) {
      out.push_back({Species::Delta, -1, {-1, -1, -1}, arg});
    } else {
      for (int mu = 0; mu < N; ++mu)
        for (int nu = mu + 1; nu < N; ++nu)
          for (int rho = nu + 1; rho < N; ++rho)
            out.push_back({Species::S3, -1, {i8(mu), i8(nu), i8(rho)}, arg});
    }
  }
  return out;
}

AlgebraTable make_table(TableKind kind, std::shared_ptr<const StructureConstants> sc, int N, ChainMode mode) {
  if (!sc) throw std::invalid_argument("table needs structure constants");
  if (N < 1 || N > kMaxDim)
    throw std::invalid_argument("dimension N = " + std::to_string(N) + " outside 1.." + std::to_string(kMaxDim));
  if ((kind == TableKind::MF || kind == TableKind::EMB1) && N < 2)
    throw std::invalid_argument("tables with the three-chain S3 need N >= 2");
  AlgebraTable t{kind, N, std::move(sc), ChainMode::FORMAL};
  return mode == ChainMode::CONCRETE_3D ? concretize_chain(t) : t;
}

Expression concretize(const Expression& x) {
  Expression out;
  for (const auto& [g, c] : x.terms()) {
    if (g.species != Species::S3) {
      out += Expression::term(g, c);
      continue;
    }
    // Stored triples are sorted, so epsilon is +1 for (1,2,3).
    if (g.idx[0] != 0 || g.idx[1] != 1 || g.idx[2] != 2)
      throw std::invalid_argument("S3 component outside three dimensions");
    out += c * Expression::Delta(g.arg);
  }
  return out;
}

AlgebraTable concretize_chain(const AlgebraTable& t) {
  if (t.N != 3) throw std::invalid_argument("the concrete three-chain needs N = 3");
  if (!t.uses(Species::S3)) throw TableMismatch("table " + to_string(t.kind) + " has no three-chain");
  AlgebraTable c = t;
  c.mode = ChainMode::CONCRETE_3D;
  return c;
}

Expression bracket(const AlgebraTable& t, const Expression& x, const Expression& y) {
  const bool concrete = t.mode == ChainMode::CONCRETE_3D;
  const Expression& xc = concrete ? concretize(x) : x;
  const Expression& yc = concrete ? concretize(y) : y;
  check_species(t, xc);
  check_species(t, yc);
  Expression out;
  for (const auto& [gx, cx] : xc.terms())
    for (const auto& [gy, cy] : yc.terms()) {
      const Expression e = gen_bracket(t, gx, gy);
      if (!e.is_zero()) out += (cx * cy) * e;
    }
  return concrete ? concretize(out) : out;
}

Expression jacobiator(const AlgebraTable& t, const Expression& x, const Expression& y, const Expression& z) {
  return reduce_closedness(bracket(t, x, bracket(t, y, z)) + bracket(t, y, bracket(t, z, x)) +
                               bracket(t, z, bracket(t, x, y)),
                           t.N);
}

Expression redefine(const Expression& x, int N) {
  Expression out;
  for (const auto& [g, c] : x.terms()) {
    out += Expression::term(g, c);
    if (g.species == Species::J)
      out += c * contract(g.arg, N, [&](int mu) { return Expression::G(g.adj, mu, g.arg); });
  }
  return out;
}

bool EmbeddingReport::all_match() const {
  for (const auto& p : pairs)
    if (!p.match) return false;
  return true;
}

EmbeddingReport verify_embedding(const AlgebraTable& source, const AlgebraTable& target) {
  const bool ok = (source.kind == TableKind::MF && target.kind == TableKind::EMB1) ||
                  (source.kind == TableKind::CLASSICAL_MF && target.kind == TableKind::EMB2);
  if (!ok)
    throw TableMismatch("unsupported embedding " + to_string(source.kind) + " -> " + to_string(target.kind));
  if (source.N != target.N || source.mode != target.mode)
    throw TableMismatch("embedding tables must share N and chain mode");
  EmbeddingReport rep{source.kind, target.kind, {}};
  const int N = source.N;
  for (const Generator& gx : source.generators(kArgM))
    for (const Generator& gy : source.generators(kArgN)) {
      const Expression x = Expression::of(gx), y = Expression::of(gy);
      const Expression lhs = reduce_closedness(bracket(target, redefine(x, N), redefine(y, N)), N);
      const Expression rhs = reduce_closedness(redefine(bracket(source, x, y), N), N);
      PairCheck pc{gx, gy, true, lhs - rhs};
      pc.match = pc.difference.is_zero();
      rep.pairs.push_back(std::move(pc));
    }
  return rep;
}

JacobiSweep jacobi_sweep(const AlgebraTable& t) {
  JacobiSweep sweep{t.sc->name(), t.kind, t.N, t.mode};
  const auto gm = t.generators(kArgM), gn = t.generators(kArgN), gr = t.generators(kArgR);
  const std::size_t n = gm.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        ++sweep.triples;
        const Expression x = Expression::of(gm[i]), y = Expression::of(gn[j]), z = Expression::of(gr[k]);
        const Expression yz = bracket(t, y, z), zx = bracket(t, z, x), xy = bracket(t, x, y);
        if (yz.is_zero() && zx.is_zero() && xy.is_zero()) continue;
        ++sweep.evaluated;
        Expression jac = reduce_closedness(bracket(t, x, yz) + bracket(t, y, zx) + bracket(t, z, xy), t.N);
        if (!jac.is_zero()) sweep.nonzero.push_back({gm[i], gn[j], gr[k], std::move(jac)});
      }
  return sweep;
}

Expression expected_obstruction(const AlgebraTable& t, int a, int b, int c, int mu, int nu) {
  const Arg p = kArgM + kArgN + kArgR;
  Expression e = Polynomial(t.sc->d(a, b, c)) *
                 contract(kArgM, t.N, [&](int rho) { return Expression::S3(mu, nu, rho, p); });
  if (t.mode == ChainMode::CONCRETE_3D) e = concretize(e);
  return reduce_closedness(e, t.N);
}

ObstructionReport check_obstruction(const AlgebraTable& emb1) {
  if (emb1.kind != TableKind::EMB1) throw TableMismatch("obstruction check needs the EMB1 table");
  const JacobiSweep sweep = jacobi_sweep(emb1);
  ObstructionReport rep;
  rep.triples = sweep.triples;
  std::map<std::tuple<Generator, Generator, Generator>, const Expression*> found;
  for (const auto& tr : sweep.nonzero) found[{tr.x, tr.y, tr.z}] = &tr.value;
  const auto gm = emb1.generators(kArgM), gn = emb1.generators(kArgN), gr = emb1.generators(kArgR);
  const std::size_t n = gm.size();
  const Expression zero;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const bool jgg = gm[i].species == Species::J && gn[j].species == Species::G &&
                         gr[k].species == Species::G;
        Expression expected;
        if (jgg) expected = expected_obstruction(emb1, gm[i].adj, gn[j].adj, gr[k].adj, gn[j].idx[0], gr[k].idx[0]);
        auto it = found.find({gm[i], gn[j], gr[k]});
        const Expression& actual = it == found.end() ? zero : *it->second;
        if (jgg && !actual.is_zero()) {
          ++rep.nonzero;
          if (rep.sample.empty())
            rep.sample = "[" + gm[i].str() + ", [" + gn[j].str() + ", " + gr[k].str() + "]] + cycl. = " + actual.str();
        }
        if (!(actual == expected)) {
          ++rep.mismatches;
          if (rep.mismatch_examples.size() < 5) rep.mismatch_examples.push_back({gm[i], gn[j], gr[k], actual});
        }
      }
  return rep;
}

}  // namespace mfock
