#include "mfock/fock_oracle.hpp"

#include "mfock/bilinear_action.hpp"

#include <map>
#include <stdexcept>

namespace mfock {

namespace {

using detail::BilinearOp;
using detail::apply;
using detail::convert;
using detail::is_zero;

template <class S>
void prune(FockVector<S>& v) {
  for (auto it = v.begin(); it != v.end();)
    it = is_zero(it->second) ? v.erase(it) : std::next(it);
}

template <class S>
std::string describe(const FockVector<S>& diff) {
  const auto& [st, c] = *diff.begin();
  return "first differing element " + st.str() + " off by " + c.str() + " (" + std::to_string(diff.size()) +
         " elements differ)";
}

template <class S>
OracleReport run(const CurrentFamily& fam, FrequencySplit split, const OracleOptions& opt) {
  const Oscillators osc{split};
  const int L = opt.level;
  const int W = opt.source_weight < 0 ? L - 2 : opt.source_weight;
  std::vector<const Current*> cur;
  for (const auto& c : fam.all())
    if (opt.include_T || c.label.species != CurrentSpecies::T) cur.push_back(&c);

  struct Op {
    const Current* current;
    int mode;
    BilinearOp<S> bilinear;
  };
  std::vector<Op> ops;
  for (const Current* c : cur)
    for (int m : opt.modes) ops.push_back({c, m, BilinearOp<S>(c->pattern)});

  // Wick predictions per ordered op pair.
  struct Prediction {
    BilinearOp<S> bilinear;
    int mode;
    S anomaly;
  };
  std::vector<Prediction> pred;
  pred.reserve(ops.size() * ops.size());
  for (const Op& x : ops)
    for (const Op& y : ops) {
      const auto r = mode_commutator(CurrentMode::of(*x.current, x.mode), CurrentMode::of(*y.current, y.mode),
                                     opt.wick_split.value_or(split));
      pred.push_back({BilinearOp<S>(r.bilinear), r.mode, convert<S>(r.anomaly)});
    }

  auto truncate = [&](FockVector<S>& v, bool& leaked) {
    for (auto it = v.begin(); it != v.end();) {
      if (osc.weight(it->first) > L) {
        if (!is_zero(it->second)) leaked = true;
        it = v.erase(it);
      } else {
        ++it;
      }
    }
  };

  OracleReport rep;
  rep.exact_rational = std::is_same_v<S, Rational>;
  const auto sources = enumerate_field_states(fam.layout(), osc, W);
  rep.sources = sources.size();
  const std::size_t nops = ops.size();
  for (const FockState& s : sources) {
    // Truncated images Y|s> and, for every intermediate state t, X|t>.
    std::vector<FockVector<S>> first(nops);
    std::vector<char> first_leaked(nops, 0);
    std::unordered_map<FockState, std::vector<FockVector<S>>, FockStateHash> second;
    for (std::size_t y = 0; y < nops; ++y) {
      apply(ops[y].bilinear, ops[y].mode, s, S(1), osc, first[y]);
      prune(first[y]);
      bool leaked = false;
      truncate(first[y], leaked);
      first_leaked[y] = leaked;
      for (const auto& [t, c] : first[y]) second.try_emplace(t);
    }
    for (auto& [t, imgs] : second) {
      imgs.resize(nops);
      for (std::size_t x = 0; x < nops; ++x) apply(ops[x].bilinear, ops[x].mode, t, S(1), osc, imgs[x]);
    }
    for (std::size_t x = 0; x < nops; ++x)
      for (std::size_t y = 0; y < nops; ++y) {
        if (first_leaked[x] || first_leaked[y]) {
          ++rep.leaked_columns;
          continue;
        }
        ++rep.columns;
        FockVector<S> diff;
        for (const auto& [t, c] : first[y]) accumulate(diff, second.at(t)[x], c);
        for (const auto& [t, c] : first[x]) accumulate(diff, second.at(t)[y], -c);
        const Prediction& p = pred[x * nops + y];
        apply(p.bilinear, p.mode, s, S(-1), osc, diff);
        if (!is_zero(p.anomaly)) accumulate(diff, s, -p.anomaly);
        bool ignored = false;
        truncate(diff, ignored);
        rep.elements += diff.size();
        prune(diff);
        if (!diff.empty())
          rep.mismatches.push_back({ops[x].current->label.str(), ops[y].current->label.str(), ops[x].mode,
                                    ops[y].mode, s.str(), describe(diff)});
      }
  }
  return rep;
}

void enumerate(const std::vector<std::pair<std::uint32_t, int>>& kinds, std::size_t from, int budget, FockState& st,
               std::vector<FockState>& out) {
  out.push_back(st);
  for (std::size_t u = from; u < kinds.size(); ++u) {
    if (kinds[u].second > budget) continue;
    st.insert(kinds[u].first);
    enumerate(kinds, u, budget - kinds[u].second, st, out);
    st.remove(kinds[u].first);
  }
}

}  // namespace

std::vector<FockState> enumerate_field_states(const FieldLayout& layout, const Oscillators& osc, int max_weight) {
  std::vector<std::pair<std::uint32_t, int>> kinds;
  for (int i = 0; i < layout.size(); ++i)
    for (int k = -max_weight; k <= max_weight; ++k) {
      for (Ladder l : {Ladder::kA, Ladder::kB}) {
        if (osc.annihilates(l, k)) continue;
        const auto code = quantum_code(l == Ladder::kA ? QuantumKind::kA : QuantumKind::kB, i, k);
        if (osc.weight(code) <= max_weight) kinds.emplace_back(code, osc.weight(code));
      }
    }
  std::sort(kinds.begin(), kinds.end());
  std::vector<FockState> out;
  FockState st;
  enumerate(kinds, 0, max_weight, st, out);
  return out;
}

FockVector<Surd> apply_current(const Pattern& pattern, int n, const FockState& state, const Oscillators& osc) {
  FockVector<Surd> out;
  apply(BilinearOp<Surd>(pattern), n, state, Surd(1), osc, out);
  prune(out);
  return out;
}

OracleReport verify_fock(const CurrentFamily& fam, FrequencySplit split, const OracleOptions& opt) {
  if (opt.level < 0) throw std::invalid_argument("truncation level must be >= 0");
  bool rational = true;
  for (int a = 0; a < fam.sc().dim() && rational; ++a) {
    for (const auto& e : fam.sc().f_row(a)) rational = rational && e.value.is_rational();
    for (const auto& e : fam.sc().d_row(a)) rational = rational && e.value.is_rational();
  }
  return rational ? run<Rational>(fam, split, opt) : run<Surd>(fam, split, opt);
}

}  // namespace mfock
