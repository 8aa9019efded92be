#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "mfock/formal_algebra.hpp"

namespace mfock {
namespace {

// Column of the coefficient space of one chain: (momentum monomial, component).
// Columns with larger monomials come first, so they are eliminated first.
struct Column {
  Monomial mono;
  int comp;
};
struct ColumnOrder {
  bool operator()(const Column& x, const Column& y) const {
    if (x.mono == y.mono) return x.comp < y.comp;
    return y.mono < x.mono;
  }
};

template <class Scalar>
using SparseRow = std::map<Column, Scalar, ColumnOrder>;

// Components of an antisymmetric chain: sorted index tuples of length `rank`.
std::vector<std::array<int, 3>> components(int rank, int N) {
  std::vector<std::array<int, 3>> out;
  if (rank == 1)
    for (int a = 0; a < N; ++a) out.push_back({a, -1, -1});
  else
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b)
        for (int c = b + 1; c < N; ++c) out.push_back({a, b, c});
  return out;
}

int component_index(const std::vector<std::array<int, 3>>& comps, std::array<int, 3> key) {
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (comps[i] == key) return static_cast<int>(i);
  return -1;
}

std::vector<Monomial> monomials(int degree, int N) {
  std::vector<int> vars;
  for (int s = 0; s < kMaxSymbols; ++s)
    for (int mu = 0; mu < N; ++mu) vars.push_back(momentum_var(s, mu));
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t start, int left) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < vars.size(); ++i) {
      ++cur.exp[vars[i]];
      self(self, i, left - 1);
      --cur.exp[vars[i]];
    }
  };
  rec(rec, 0, degree);
  return out;
}

// Relations a_rho S^{I rho}(a) = 0 as rows over (linear monomial, component).
std::vector<SparseRow<Rational>> base_relations(int rank, const Arg& arg, int N) {
  const auto comps = components(rank, N);
  std::vector<SparseRow<Rational>> rows;
  auto add = [&](SparseRow<Rational>& row, int rho, int comp, int sign) {
    for (int s = 0; s < kMaxSymbols; ++s) {
      if (arg.c[s] == 0) continue;
      Column col{Monomial::var(momentum_var(s, rho)), comp};
      Rational& v = row[col];
      v += Rational(sign * arg.c[s]);
      if (v.is_zero()) row.erase(col);
    }
  };
  if (rank == 1) {
    SparseRow<Rational> row;
    for (int rho = 0; rho < N; ++rho) add(row, rho, rho, 1);
    if (!row.empty()) rows.push_back(std::move(row));
    return rows;
  }
  for (int mu = 0; mu < N; ++mu)
    for (int nu = mu + 1; nu < N; ++nu) {
      SparseRow<Rational> row;
      for (int rho = 0; rho < N; ++rho) {
        if (rho == mu || rho == nu) continue;
        std::array<int, 3> t{mu, nu, rho};
        int sign = 1;
        if (t[1] > t[2]) { std::swap(t[1], t[2]); sign = -sign; }
        if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
        add(row, rho, component_index(comps, t), sign);
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  return rows;
}

// Fully reduced row echelon basis of the degree-d part of the relation module.
class Reducer {
 public:
  Reducer(int rank, const Arg& arg, int N, int degree) {
    if (degree < 1) return;
    const auto base = base_relations(rank, arg, N);
    for (const Monomial& u : monomials(degree - 1, N))
      for (const auto& rel : base) {
        SparseRow<Rational> row;
        for (const auto& [col, v] : rel) row.emplace(Column{col.mono * u, col.comp}, v);
        insert(std::move(row));
      }
  }

  void reduce(SparseRow<Surd>& v) const {
    for (const auto& [pivot, row] : rows_) {
      auto it = v.find(pivot);
      if (it == v.end()) continue;
      const Surd coef = it->second;
      for (const auto& [col, r] : row) {
        Surd& x = v[col];
        x -= coef * r;
        if (x.is_zero()) v.erase(col);
      }
    }
  }

 private:
  void insert(SparseRow<Rational> row) {
    for (const auto& [pivot, prow] : rows_) {
      auto it = row.find(pivot);
      if (it == row.end()) continue;
      const Rational coef = it->second;
      axpy(row, prow, coef);
    }
    if (row.empty()) return;
    const Column pivot = row.begin()->first;
    const Rational inv = Rational(1) / row.begin()->second;
    for (auto& [col, v] : row) v = v * inv;
    for (auto& [p, prow] : rows_) {
      auto it = prow.find(pivot);
      if (it == prow.end()) continue;
      const Rational coef = it->second;
      axpy(prow, row, coef);
    }
    rows_.emplace(pivot, std::move(row));
  }

  static void axpy(SparseRow<Rational>& y, const SparseRow<Rational>& x, const Rational& a) {
    for (const auto& [col, v] : x) {
      Rational& t = y[col];
      t -= a * v;
      if (t.is_zero()) y.erase(col);
    }
  }

  std::map<Column, SparseRow<Rational>, ColumnOrder> rows_;
};

const Reducer& reducer_for(int rank, const Arg& arg, int N, int degree) {
  static std::mutex mutex;
  static std::map<std::tuple<int, Arg, int, int>, std::unique_ptr<Reducer>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{rank, arg, N, degree}];
  if (!slot) slot = std::make_unique<Reducer>(rank, arg, N, degree);
  return *slot;
}

Expression reduce_delta(const Generator& g, const Polynomial& coeff, int N) {
  int pivot = -1;
  for (int s = kMaxSymbols - 1; s >= 0 && pivot < 0; --s)
    if (g.arg.c[s] != 0) pivot = s;
  if (pivot < 0) return Expression::term(g, coeff);
  // On the support a = 0: x_{pivot,mu} = -(sum_{s != pivot} a_s x_{s,mu}) / a_pivot.
  const Rational inv(-1, g.arg.c[pivot]);
  auto image = [&](int v) {
    if (v >= kNumMomentumVars || v / kMaxDim != pivot) return Polynomial::var(v);
    const int mu = v % kMaxDim;
    Polynomial p;
    for (int s = 0; s < kMaxSymbols; ++s)
      if (s != pivot && g.arg.c[s] != 0)
        p.add_term(Monomial::var(momentum_var(s, mu)), Surd(Rational(g.arg.c[s]) * inv));
    return p;
  };
  (void)N;
  return Expression::term(g, coeff.substitute(image));
}

}  // namespace

Expression reduce_closedness(const Expression& x, int N) {
  Expression out;
  // (species, argument) -> (charge monomial, degree) -> coefficient vector
  using Key = std::tuple<Species, Arg>;
  std::map<Key, std::map<std::pair<Monomial, int>, SparseRow<Surd>>> chains;
  std::map<Key, std::vector<std::array<int, 3>>> comps;
  for (const auto& [g, c] : x.terms()) {
    if (g.species == Species::Delta) {
      out += reduce_delta(g, c, N);
      continue;
    }
    if (g.species != Species::S1 && g.species != Species::S3) {
      out += Expression::term(g, c);
      continue;
    }
    const int rank = g.species == Species::S1 ? 1 : 3;
    const Key key{g.species, g.arg};
    auto& cl = comps[key];
    if (cl.empty()) cl = components(rank, N);
    const int comp = component_index(cl, {g.idx[0], g.idx[1], g.idx[2]});
    if (comp < 0) throw std::invalid_argument("chain index out of range for N = " + std::to_string(N));
    for (const auto& [mono, v] : c.terms()) {
      auto& vec = chains[key][{mono.charge_part(), mono.momentum_degree()}];
      vec[Column{mono.momentum_part(), comp}] += v;
    }
  }
  for (auto& [key, groups] : chains) {
    const auto [species, arg] = key;
    const int rank = species == Species::S1 ? 1 : 3;
    const auto& cl = comps[key];
    for (auto& [group, vec] : groups) {
      std::erase_if(vec, [](const auto& kv) { return kv.second.is_zero(); });
      reducer_for(rank, arg, N, group.second).reduce(vec);
      for (const auto& [col, v] : vec) {
        Generator g{species, -1, {-1, -1, -1}, arg};
        for (int i = 0; i < rank; ++i) g.idx[i] = static_cast<std::int8_t>(cl[col.comp][i]);
        out += Expression::term(g, Polynomial::term(col.mono * group.first, v));
      }
    }
  }
  return out;
}

}  // namespace mfock
