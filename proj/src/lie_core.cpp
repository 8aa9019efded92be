#include "mfock/lie_core.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mfock {

bool Tensor3::is_zero() const {
  for (const auto& v : data_) if (!v.is_zero()) return false;
  return true;
}

StructureConstants::StructureConstants(std::string name, Tensor3 f, Tensor3 d)
    : name_(std::move(name)), f_(std::move(f)), d_(std::move(d)) {
  if (f_.dim() <= 0) throw std::invalid_argument("structure constants need dim >= 1");
  if (d_.dim() != f_.dim()) throw std::invalid_argument("f and d tensors differ in dimension");
  const int n = f_.dim();
  f_rows_.resize(n);
  d_rows_.resize(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (!f_(a, b, c).is_zero()) f_rows_[a].push_back({b, c, f_(a, b, c)});
        if (!d_(a, b, c).is_zero()) d_rows_[a].push_back({b, c, d_(a, b, c)});
      }
  convention_ = "user-supplied tensors; metric delta^{ab}";
}

namespace {

// Complex number over the surd field.
struct CSurd {
  Surd re;
  Surd im;
};
CSurd operator*(const CSurd& x, const CSurd& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}
CSurd& operator+=(CSurd& x, const CSurd& y) {
  x.re += y.re;
  x.im += y.im;
  return x;
}

using CMatrix = std::vector<std::vector<CSurd>>;

CMatrix zeros(int n) { return CMatrix(n, std::vector<CSurd>(n)); }

CMatrix mul(const CMatrix& x, const CMatrix& y) {
  const int n = static_cast<int>(x.size());
  CMatrix r = zeros(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (x[i][k].re.is_zero() && x[i][k].im.is_zero()) continue;
      for (int j = 0; j < n; ++j) r[i][j] += x[i][k] * y[k][j];
    }
  return r;
}

CSurd trace(const CMatrix& x) {
  CSurd t;
  for (std::size_t i = 0; i < x.size(); ++i) t += x[i][i];
  return t;
}

// Generalized Gell-Mann generators, normalized to tr(T^a T^b) = delta/2,
// ordered as for su(3): for k = 2..n, the symmetric/antisymmetric pairs
// (j,k), j < k, followed by the k-th diagonal generator.
std::vector<CMatrix> gell_mann(int n) {
  std::vector<CMatrix> gens;
  const Rational half(1, 2);
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      CMatrix s = zeros(n), a = zeros(n);
      s[j][k].re = half;
      s[k][j].re = half;
      a[j][k].im = -half;
      a[k][j].im = half;
      gens.push_back(std::move(s));
      gens.push_back(std::move(a));
    }
    // diag(1,...,1,-k,0,...)/sqrt(2k(k+1))
    CMatrix h = zeros(n);
    const Surd norm = Surd::sqrt(Rational(1, 2LL * k * (k + 1)));
    for (int i = 0; i < k; ++i) h[i][i].re = norm;
    h[k][k].re = norm * Rational(-k);
    gens.push_back(std::move(h));
  }
  return gens;
}

}  // namespace

StructureConstants build_su(int n) {
  if (n < 2) throw std::invalid_argument("su(n) requires n >= 2, got n = " + std::to_string(n));
  const auto gens = gell_mann(n);
  const int dim = static_cast<int>(gens.size());
  Tensor3 f(dim), d(dim);
  std::vector<std::vector<CMatrix>> prod(dim, std::vector<CMatrix>(dim));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) prod[a][b] = mul(gens[a], gens[b]);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        const CSurd tab = trace(mul(prod[a][b], gens[c]));
        const CSurd tba = trace(mul(prod[b][a], gens[c]));
        // -2i (x + iy) = 2y - 2ix with x + iy = tr([Ta,Tb]Tc)
        const Surd cx = tab.re - tba.re, cy = tab.im - tba.im;
        if (!cx.is_zero()) throw std::logic_error("build_su: f^{abc} came out non-real");
        f(a, b, c) = cy * Rational(2);
        const Surd ax = tab.re + tba.re, ay = tab.im + tba.im;
        if (!ay.is_zero()) throw std::logic_error("build_su: d^{abc} came out non-real");
        d(a, b, c) = ax * Rational(2);
      }
  StructureConstants sc("su" + std::to_string(n), std::move(f), std::move(d));
  sc.set_convention(
      "generalized Gell-Mann basis, tr(T^a T^b) = delta^{ab}/2 in the defining representation; "
      "f^{abc} = -2i tr([T^a,T^b] T^c); d^{abc} = 2 tr({T^a,T^b} T^c); metric delta^{ab}");
  return sc;
}

std::string to_string(Identity id) {
  switch (id) {
    case Identity::kJacobi: return "f-jacobi";
    case Identity::kMixed: return "fd-identity";
    case Identity::kFAntisymmetric: return "f-antisymmetric";
    case Identity::kFCyclic: return "f-cyclic";
    case Identity::kDSymmetric: return "d-symmetric";
    case Identity::kDCyclic: return "d-cyclic";
  }
  return "?";
}

bool IdentityReport::all_pass() const {
  for (const auto& r : results) if (!r.pass) return false;
  return true;
}

namespace {

IdentityResult check_quartic(const StructureConstants& sc, Identity id, const Tensor3& t) {
  IdentityResult res{id};
  const int n = sc.dim();
  const Tensor3& f = sc.f_tensor();
  const bool mixed = id == Identity::kMixed;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          Surd s;
          for (int x = 0; x < n; ++x) {
            if (!f(a, e, x).is_zero() && !t(b, c, x).is_zero()) s += f(a, e, x) * t(b, c, x);
            // Invariance of t under ad(J^a), acting on slots (b, c, e) of t^{b c e}.
            const Surd& t2 = mixed ? t(b, e, x) : t(b, x, e);
            const Surd& t3 = mixed ? t(c, e, x) : t(x, c, e);
            if (!f(a, c, x).is_zero() && !t2.is_zero()) s += f(a, c, x) * t2;
            if (!f(a, b, x).is_zero() && !t3.is_zero()) s += f(a, b, x) * t3;
          }
          if (!s.is_zero()) {
            res.pass = false;
            res.witness = {a + 1, b + 1, c + 1, e + 1};
            res.residual = s;
            return res;
          }
        }
  return res;
}

IdentityResult check_permutation(Identity id, const Tensor3& t, bool swap_first, int sign) {
  IdentityResult res{id};
  const int n = t.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Surd& lhs = swap_first ? t(b, a, c) : t(b, c, a);
        const Surd rhs = t(a, b, c) * Rational(sign);
        if (lhs != rhs) {
          res.pass = false;
          res.witness = {a + 1, b + 1, c + 1};
          res.residual = lhs - rhs;
          return res;
        }
      }
  return res;
}

}  // namespace

IdentityReport verify_identities(const StructureConstants& sc) {
  IdentityReport rep{sc.name()};
  rep.results.push_back(check_quartic(sc, Identity::kJacobi, sc.f_tensor()));
  rep.results.push_back(check_quartic(sc, Identity::kMixed, sc.d_tensor()));
  rep.results.push_back(check_permutation(Identity::kFAntisymmetric, sc.f_tensor(), true, -1));
  rep.results.push_back(check_permutation(Identity::kFCyclic, sc.f_tensor(), false, 1));
  rep.results.push_back(check_permutation(Identity::kDSymmetric, sc.d_tensor(), true, 1));
  rep.results.push_back(check_permutation(Identity::kDCyclic, sc.d_tensor(), false, 1));
  return rep;
}

StructureConstants read_algebra(std::istream& in, const std::string& name) {
  int dim = 0;
  struct Raw {
    char which;
    int a, b, c;
    Surd v;
  };
  std::vector<Raw> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    const std::string where = "algebra file line " + std::to_string(lineno) + ": ";
    if (tag == "dim") {
      if (!(ls >> dim) || dim < 1) throw std::invalid_argument(where + "bad dim");
      continue;
    }
    if (tag != "f" && tag != "d") throw std::invalid_argument(where + "unknown tag '" + tag + "'");
    Raw r{tag[0]};
    if (!(ls >> r.a >> r.b >> r.c)) throw std::invalid_argument(where + "expected three indices");
    std::string rest;
    std::getline(ls, rest);
    r.v = Surd::parse(rest);
    raw.push_back(r);
  }
  if (dim == 0) {
    for (const auto& r : raw) dim = std::max({dim, r.a, r.b, r.c});
  }
  if (dim == 0) throw std::invalid_argument("algebra file declares no dimension and no entries");
  Tensor3 f(dim), d(dim);
  for (const auto& r : raw) {
    if (r.a < 1 || r.b < 1 || r.c < 1 || r.a > dim || r.b > dim || r.c > dim)
      throw std::invalid_argument("algebra file: index out of range 1.." + std::to_string(dim));
    (r.which == 'f' ? f : d)(r.a - 1, r.b - 1, r.c - 1) = r.v;
  }
  return StructureConstants(name, std::move(f), std::move(d));
}

StructureConstants read_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open algebra file '" + path + "'");
  return read_algebra(in, path);
}

void write_algebra(std::ostream& out, const StructureConstants& sc) {
  out << "dim " << sc.dim() << "\n";
  for (char which : {'f', 'd'}) {
    const Tensor3& t = which == 'f' ? sc.f_tensor() : sc.d_tensor();
    for (int a = 0; a < sc.dim(); ++a)
      for (int b = 0; b < sc.dim(); ++b)
        for (int c = 0; c < sc.dim(); ++c)
          if (!t(a, b, c).is_zero())
            out << which << ' ' << a + 1 << ' ' << b + 1 << ' ' << c + 1 << ' ' << t(a, b, c) << "\n";
  }
}

}  // namespace mfock
