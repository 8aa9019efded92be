#include "mfock/report.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <regex>
#include <sstream>
#include <tuple>

#include "mfock/fock_oracle.hpp"
#include "mfock/vertex_fock.hpp"
#include "mfock/wick_currents.hpp"

namespace mfock {

using json = nlohmann::ordered_json;

namespace {

constexpr double kChargeTolerance = 1e-8;
constexpr double kSafeTolerance = 1e-9;

std::string witness_str(const std::vector<int>& w) {
  std::string s;
  for (int v : w) s += (s.empty() ? "" : ",") + std::to_string(v);
  return "(" + s + ")";
}

std::string tables_str(const std::vector<TableKind>& t) {
  std::string s;
  for (auto k : t) s += (s.empty() ? "" : ",") + to_string(k);
  return s;
}

bool has(const std::vector<TableKind>& t, TableKind k) { return std::find(t.begin(), t.end(), k) != t.end(); }

json triple_json(const TripleResult& t) {
  return json{{"triple", t.x.str() + ", " + t.y.str() + ", " + t.z.str()}, {"jacobiator", t.value.str()}};
}

}  // namespace

void RunConfig::validate(const std::string& command) const {
  if (dim && (*dim < 1 || *dim > kMaxDim)) throw ConfigError("--dim must be between 1 and 4");
  if (level < 1) throw ConfigError("--level must be >= 1");
  if (momentum_window < 1) throw ConfigError("--momentum-window must be >= 1");
  if (mode_window < 1) throw ConfigError("--mode-window must be >= 1");
  if (tolerance && !(*tolerance >= 0)) throw ConfigError("--tolerance must be >= 0");
  if (format != "text" && format != "json") throw ConfigError("--format must be text or json");
  if (tables.empty()) throw ConfigError("--tables must name at least one table");
  if (command == "verify-tables" || command == "report") {
    const int N = dim_or(3);
    for (auto k : tables)
      if (N < 2 && (k == TableKind::MF || k == TableKind::EMB1 || k == TableKind::CLASSICAL_MF))
        throw ConfigError("table " + to_string(k) + " uses the three-chain S3 and needs --dim >= 2");
  }
  if ((command == "measure" || command == "report") && momentum_window < 2)
    throw ConfigError("measure needs --momentum-window >= 2 (two unit shifts from the origin)");
}

FrequencySplit parse_split(const std::string& s) {
  if (s == "negative" || s == "negative-modes-annihilate") return FrequencySplit::kNegativeModesAnnihilate;
  if (s == "positive" || s == "positive-modes-annihilate") return FrequencySplit::kPositiveModesAnnihilate;
  throw ConfigError("unknown frequency split '" + s + "' (expected negative or positive)");
}

std::vector<TableKind> parse_tables(const std::string& list) {
  std::vector<TableKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_table_kind(item));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::shared_ptr<const StructureConstants> load_algebra(const RunConfig& cfg) {
  try {
    if (!cfg.algebra_file.empty())
      return std::make_shared<const StructureConstants>(read_algebra_file(cfg.algebra_file));
    static const std::regex su(R"(su\(?(\d+)\)?)");
    std::smatch m;
    if (!std::regex_match(cfg.algebra, m, su)) throw ConfigError("--algebra must look like su2 or su(3)");
    const int n = std::stoi(m[1]);
    if (n < 2 || n > 6) throw ConfigError("--algebra su(n) needs 2 <= n <= 6");
    return std::make_shared<const StructureConstants>(build_su(n));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

json conventions(const StructureConstants& sc, FrequencySplit split) {
  return json{
      {"algebra", sc.name()},
      {"normalization", sc.convention()},
      {"statistics", "bosonic oscillators, [bar-field(s), field(t)] = delta(s-t)"},
      {"frequency_split", to_string(split)},
      {"zeta", "antisymmetric in its spacetime pair, independent components mu < nu, weight-one CCR"},
      {"mode_transform", "X_n = int dt e^{int} X(t)"},
      {"k_sign", "anomaly([J^a_m, J^b_-m]) = -k m delta^{ab}"},
      {"gl_sign", "anomaly([T^mu_nu(m), T^sigma_tau(-m)]) = m (k1 d^mu_tau d^sigma_nu + k2 d^mu_nu d^sigma_tau)"},
      {"vertex_ordering", "q,p creators left, lattice shift, annihilators right; p_0 = i x lattice label on the right"},
  };
}

CommandResult cmd_verify_lie(const RunConfig& cfg) {
  cfg.validate("verify-lie");
  const auto sc = load_algebra(cfg);
  const auto rep = verify_identities(*sc);
  CommandResult r;
  json ids = json::array();
  std::string failures;
  for (const auto& id : rep.results) {
    json e{{"identity", to_string(id.identity)}, {"pass", id.pass}};
    if (!id.pass) {
      e["witness"] = witness_str(id.witness);
      e["residual"] = id.residual.str();
      failures += (failures.empty() ? "" : "; ") + to_string(id.identity) + " fails at " + witness_str(id.witness);
    }
    ids.push_back(e);
  }
  r.pass = rep.all_pass();
  r.report = json{{"algebra", sc->name()}, {"dim", sc->dim()}, {"normalization", sc->convention()},
                  {"identities", ids}, {"pass", r.pass}};
  if (!r.pass) r.diagnostic = "verify-lie: " + failures;
  return r;
}

CommandResult cmd_verify_tables(const RunConfig& cfg) {
  cfg.validate("verify-tables");
  const auto sc = load_algebra(cfg);
  const int N = cfg.dim_or(3);
  CommandResult r;
  r.pass = true;
  json sweeps = json::array();
  std::vector<std::string> failed;
  auto sweep = [&](const AlgebraTable& t) {
    const auto s = jacobi_sweep(t);
    json e{{"table", to_string(t.kind)}, {"chain_mode", to_string(t.mode)}, {"triples", s.triples},
           {"evaluated", s.evaluated}, {"nonzero", s.nonzero.size()}, {"pass", s.all_zero()}};
    if (!s.all_zero()) {
      e["first_nonzero"] = triple_json(s.nonzero.front());
      failed.push_back(to_string(t.kind) + "/" + to_string(t.mode));
      r.pass = false;
    }
    sweeps.push_back(e);
  };
  json obstruction;
  for (auto kind : cfg.tables) {
    if (kind == TableKind::EMB1) {
      json modes = json::array();
      std::vector<ChainMode> ms{ChainMode::FORMAL};
      if (N == 3) ms.push_back(ChainMode::CONCRETE_3D);
      for (auto mode : ms) {
        const auto o = check_obstruction(make_table(TableKind::EMB1, sc, N, mode));
        json e{{"chain_mode", to_string(mode)}, {"triples", o.triples}, {"nonzero", o.nonzero},
               {"mismatches", o.mismatches}, {"identically_zero", o.nonzero == 0}, {"reproduced", o.reproduced()}};
        if (!o.sample.empty()) e["sample"] = o.sample;
        if (!o.reproduced()) {
          e["first_mismatch"] = triple_json(o.mismatch_examples.front());
          failed.push_back("EMB1 obstruction/" + to_string(mode));
          r.pass = false;
        }
        modes.push_back(e);
      }
      obstruction = json{{"expected", "[J^a(m), [G^{b mu}(n), G^{c nu}(r)]] + cyclic = d^{abc} m_rho S3^{mu nu rho}(m+n+r)"},
                         {"d_vanishes", sc->d_tensor().is_zero()},
                         {"modes", modes}};
      continue;
    }
    sweep(make_table(kind, sc, N));
    if (kind == TableKind::MF && N == 3) sweep(make_table(kind, sc, N, ChainMode::CONCRETE_3D));
  }
  json emb = json::array();
  auto embed = [&](TableKind from, TableKind to) {
    if (!has(cfg.tables, from) || !has(cfg.tables, to)) return;
    const auto e = verify_embedding(make_table(from, sc, N), make_table(to, sc, N));
    std::size_t bad = 0;
    for (const auto& p : e.pairs) bad += !p.match;
    emb.push_back(json{{"source", to_string(from)}, {"target", to_string(to)}, {"pairs", e.pairs.size()},
                       {"mismatches", bad}, {"pass", e.all_match()}});
    if (!e.all_match()) {
      failed.push_back("embedding " + to_string(from) + "->" + to_string(to));
      r.pass = false;
    }
  };
  embed(TableKind::CLASSICAL_MF, TableKind::EMB2);
  embed(TableKind::MF, TableKind::EMB1);
  r.report = json{{"algebra", sc->name()}, {"N", N}, {"tables", tables_str(cfg.tables)}, {"jacobi", sweeps}};
  if (!obstruction.is_null()) r.report["obstruction"] = obstruction;
  if (!emb.empty()) r.report["embeddings"] = emb;
  r.report["pass"] = r.pass;
  if (!r.pass) {
    std::string s;
    for (const auto& f : failed) s += (s.empty() ? "" : ", ") + f;
    r.diagnostic = "verify-tables: failed " + s;
  }
  return r;
}

CommandResult cmd_verify_fock(const RunConfig& cfg) {
  cfg.validate("verify-fock");
  const auto sc = load_algebra(cfg);
  const int N = cfg.dim_or(2);
  const CurrentFamily fam(sc, N);
  CommandResult r;
  OracleOptions opt;
  opt.level = cfg.level;
  const auto oracle = verify_fock(fam, cfg.split, opt);
  const auto km = check_current_algebra(fam, cfg.split, {-2, -1, 0, 1, 2}, false);
  const auto level = measure_level(fam, cfg.split);
  json samples = json::array();
  for (const auto& [m, a] : level.samples) samples.push_back(json{{"m", m}, {"anomaly", a.str()}});
  const bool only_jj = km.anomalous_pairs == std::vector<std::string>{"J,J"};
  json o{{"level", cfg.level}, {"sources", oracle.sources}, {"columns", oracle.columns},
         {"leaked_columns", oracle.leaked_columns}, {"elements", oracle.elements},
         {"arithmetic", oracle.exact_rational ? "rational" : "surd"}, {"mismatches", oracle.mismatches.size()}};
  if (!oracle.mismatches.empty()) {
    const auto& m = oracle.mismatches.front();
    o["first_mismatch"] = "[" + m.x + "_" + std::to_string(m.m) + ", " + m.y + "_" + std::to_string(m.n) + "] on " +
                          m.source + ": " + m.detail;
  }
  json anomalous = json::array();
  for (const auto& p : km.anomalous_pairs) anomalous.push_back(p);
  r.pass = oracle.ok() && km.ok() && only_jj;
  r.report = json{{"conventions", conventions(*sc, cfg.split)},
                  {"N", N},
                  {"oracle", o},
                  {"current_algebra", json{{"brackets_checked", km.checked},
                                           {"failures", km.failures.size()},
                                           {"anomalous_pairs", anomalous}}},
                  {"k", level.k.str()},
                  {"k_samples", samples},
                  {"pass", r.pass}};
  if (!r.pass) {
    if (!oracle.ok())
      r.diagnostic = "verify-fock: oracle mismatch " + (oracle.mismatches.empty() ? std::string("(no columns)")
                                                                                  : o["first_mismatch"].get<std::string>());
    else if (!km.ok())
      r.diagnostic = "verify-fock: bracket " + km.failures.front().x.str() + ", " + km.failures.front().y.str() +
                     " differs from the current algebra";
    else
      r.diagnostic = "verify-fock: anomaly outside the (J,J) bracket";
  }
  return r;
}

CommandResult cmd_measure(const RunConfig& cfg) {
  cfg.validate("measure");
  const auto sc = load_algebra(cfg);
  const int N = cfg.dim_or(2);
  const double charge_tol = cfg.tolerance.value_or(kChargeTolerance);
  const double table_tol = cfg.tolerance.value_or(kSafeTolerance);
  const bool negative = cfg.split == FrequencySplit::kNegativeModesAnnihilate;
  auto fam = std::make_shared<const CurrentFamily>(sc, N);
  const TruncationSpec spec{N, cfg.level, cfg.momentum_window, cfg.mode_window};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  CommandResult r;
  r.pass = true;
  json checks = json::array();
  // (name, deviation, tolerance, bracket the deviation comes from)
  std::vector<std::tuple<std::string, double, double, std::string>> failed;
  auto check = [&](const std::string& name, double dev, double tol, const std::string& bracket) {
    const bool ok = std::isfinite(dev) && std::abs(dev) <= tol;
    checks.push_back(json{{"check", name}, {"deviation", dev}, {"tolerance", tol}, {"pass", ok}});
    if (!ok) {
      r.pass = false;
      failed.emplace_back(name, dev, tol, bracket);
    }
  };

  const auto level = measure_level(*fam, cfg.split);
  std::optional<GlMeasurement> gl;
  if (N >= 2) gl = measure_k1_k2(*fam, cfg.split);

  const VertexFock engine(fam, spec, cfg.split);
  json residuals = json::object();
  json k_json = level.k.to_double();
  json c1_json, c2_json, k1_json, k2_json;
  Charges charges = predicted_charges(*fam, cfg.split, true);
  charges.k = level.k.to_double();

  if (N >= 2) {
    const double k1 = gl->k1.to_double(), k2 = gl->k2.to_double();
    k1_json = k1;
    k2_json = k2;
    const auto kv = measure_k_vertex(engine);
    residuals["k_fit"] = kv.residual;
    check("k_vertex - k_wick", kv.values.at(0) - charges.k, charge_tol, "[J^a(m), J^b(n)]");
    const auto cc = measure_c1_c2(engine);
    c1_json = cc.values.at(0);
    c2_json = cc.values.at(1);
    residuals["c1_c2_fit"] = cc.residual;
    residuals["k_fit_equations"] = kv.equations;
    residuals["c1_c2_fit_equations"] = cc.equations;
    check(negative ? "c1 - (1 + k1)" : "c1 - (k1 - 1)", cc.values[0] - (k1 + (negative ? 1 : -1)), charge_tol,
          "[L_mu(m), L_nu(n)]");
    check("c2 - k2", cc.values[1] - k2, charge_tol, "[L_mu(m), L_nu(n)]");
    check("c1/c2 fit residual", cc.residual, charge_tol, "[L_mu(m), L_nu(n)]");
    charges.c1 = cc.values[0];
    charges.c2 = cc.values[1];
  } else {
    const double w = witt_closure_deviation(engine);
    residuals["witt_closure"] = w;
    check("[L(m), L(n)] - (n - m) L(m+n)", w, charge_tol, "[L(m), L(n)]");
  }

  NumericCheckOptions nopt;
  nopt.tolerance = table_tol;
  nopt.max_sources = cfg.max_sources;
  const auto num = check_table_numeric(make_table(TableKind::DIFF_EXT, sc, N), engine, charges, nopt);
  residuals["diff_ext_max_deviation"] = num.max_deviation;
  json worst = json::array();
  for (const auto& w : num.worst) worst.push_back(json{{"bracket", w.bracket}, {"deviation", w.deviation}});
  check("DIFF_EXT commutators", num.max_deviation, table_tol, num.worst.empty() ? "" : num.worst.front().bracket);
  if (num.columns == 0) {
    r.pass = false;
    failed.emplace_back("DIFF_EXT commutators", 0.0, table_tol, "no leak-free columns");
  }

  json exact{{"k", level.k.str()}};
  if (gl) {
    exact["k1"] = gl->k1.str();
    exact["k2"] = gl->k2.str();
    exact["c1_expected"] = (gl->k1 + Surd(negative ? 1 : -1)).str();
    exact["c2_expected"] = gl->k2.str();
  }

  r.report = json{{"conventions", conventions(*sc, cfg.split)},
                  {"N", N},
                  {"truncation", spec.str()},
                  {"k", k_json},
                  {"k1", k1_json},
                  {"k2", k2_json},
                  {"c1", c1_json},
                  {"c2", c2_json},
                  {"exact", exact},
                  {"residuals", residuals},
                  {"diff_ext", json{{"sources", num.sources},
                                    {"brackets", num.brackets},
                                    {"columns", num.columns},
                                    {"leaked_columns", num.leaked_columns},
                                    {"max_deviation", num.max_deviation},
                                    {"worst", worst}}},
                  {"checks", checks},
                  {"pass", r.pass}};
  if (!r.pass) {
    // Name the bracket behind the largest relative violation.
    const auto* top = &failed.front();
    for (const auto& f : failed)
      if (std::get<1>(f) / std::max(std::get<2>(f), 1e-300) > std::get<1>(*top) / std::max(std::get<2>(*top), 1e-300))
        top = &f;
    std::ostringstream os;
    os << "measure: " << std::get<0>(*top) << " = " << std::get<1>(*top) << " exceeds tolerance "
       << std::get<2>(*top) << "; worst bracket " << std::get<3>(*top);
    r.diagnostic = os.str();
  }
  return r;
}

CommandResult cmd_report(const RunConfig& cfg) {
  cfg.validate("report");
  CommandResult r;
  r.pass = true;
  r.report = json::object();
  std::string diag;
  auto part = [&](const char* name, CommandResult (*fn)(const RunConfig&)) {
    auto sub = fn(cfg);
    r.report[name] = std::move(sub.report);
    if (!sub.pass) {
      r.pass = false;
      diag += (diag.empty() ? "" : "; ") + sub.diagnostic;
    }
  };
  part("verify-lie", cmd_verify_lie);
  part("verify-tables", cmd_verify_tables);
  part("verify-fock", cmd_verify_fock);
  part("measure", cmd_measure);
  r.report["pass"] = r.pass;
  r.diagnostic = diag;
  return r;
}

namespace {

std::string scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "n/a";
  if (v.is_boolean()) {
    if (key == "pass") return v.get<bool>() ? "PASS" : "FAIL";
    return v.get<bool>() ? "yes" : "no";
  }
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(12);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

void text_node(std::ostringstream& os, const json& v, int indent) {
  const std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [key, val] : v.items()) {
      if (val.is_structured() && !val.empty()) {
        os << pad << key << ":\n";
        text_node(os, val, indent + 2);
      } else {
        os << pad << key << ": " << (val.is_structured() ? std::string("(none)") : scalar_text(key, val)) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& el : v) {
      if (el.is_object()) {
        // First field inline after the dash, the rest aligned beneath it.
        bool first = true;
        for (const auto& [key, val] : el.items()) {
          os << (first ? pad + "- " : pad + "  ");
          first = false;
          if (val.is_structured() && !val.empty()) {
            os << key << ":\n";
            text_node(os, val, indent + 4);
          } else {
            os << key << ": " << (val.is_structured() ? std::string("(none)") : scalar_text(key, val)) << "\n";
          }
        }
      } else {
        os << pad << "- " << scalar_text("", el) << "\n";
      }
    }
  } else {
    os << pad << scalar_text("", v) << "\n";
  }
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string render_text(const json& doc) {
  std::ostringstream os;
  text_node(os, doc, 0);
  return os.str();
}

std::string render(const std::string& command, const CommandResult& r, const RunConfig& cfg) {
  if (cfg.format == "json") {
    json doc;
    if (cfg.timestamp) doc["generated"] = utc_now();
    doc["command"] = command;
    for (const auto& [k, v] : r.report.items()) doc[k] = v;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  if (cfg.timestamp) os << "# generated " << utc_now() << "\n";
  os << "command: " << command << "\n" << render_text(r.report);
  return os.str();
}

}  // namespace mfock
