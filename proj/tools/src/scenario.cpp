#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace dobrushin::cli {

namespace {

const std::vector<AnalysisInfo> kAnalyses = {
    {"delta", "t (optional, default 1)",
     "Dobrushin coefficient of T_t relative to P; --oracle adds an independent cross-check"},
    {"certify", "t_grid (optional)",
     "uniform P-ergodicity certificate (t0, q, C, alpha) with the measured decay curve"},
    {"mean", "t_grid (optional)",
     "uniform mean ergodicity certificate with the 2 t0 / ((1 - q) t) Cesaro bound"},
    {"weak_mean", "t0, n0", "coefficient of the n0-th power of the Cesaro average A_t0"},
    {"doeblin", "tau, t0, q_projection (optional)",
     "Doeblin-type mean condition with the minimal compensator"},
    {"ergodize", "epsilon, t_grid (optional)",
     "Phillips perturbation by lambda (P - I) that certifies within rho_1 distance epsilon"},
    {"rho", "other or a perturbation semigroup, r (optional), M (optional)",
     "rho_r and series metric between two continuous semigroups"},
    {"spectral", "n_max (optional, default 200)",
     "root sequence delta_P(T_n)^(1/n) against the spectral radius of T_1 - P"},
    {"qubit_example", "n_max (optional, default 100), taus (optional)",
     "Pauli channel Phi_{-1,0,1}: norms, Cesaro coefficients and Doeblin thresholds"},
};

// ---------------------------------------------------------------- parsing

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string key_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path.empty() ? "config" : path, "missing field '" + key + "'");
  return obj.at(key);
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void allow_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(key_path(path, key), "unknown field");
    }
  }
}

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double get_positive(const Json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (!(v > 0.0)) throw ConfigError(path, "expected a number > 0");
  return v;
}

long long get_integer(const Json& j, const std::string& path, long long min_value) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < min_value) throw ConfigError(path, "expected an integer >= " + std::to_string(min_value));
  return v;
}

std::vector<double> get_number_list(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], index_path(path, i)));
  return out;
}

Matrix get_matrix(const Json& j, const std::string& path, int dim) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of rows");
  if (static_cast<int>(j.size()) != dim) {
    throw ConfigError(path, "expected " + std::to_string(dim) + " rows, found " + std::to_string(j.size()));
  }
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::string row_path = index_path(path, i);
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ConfigError(row_path, "expected a row of " + std::to_string(dim) + " numbers");
    }
    for (int k = 0; k < dim; ++k) m(i, k) = get_number(row[k], index_path(row_path, k));
  }
  return m;
}

StateSpace parse_space(const Json& j) {
  const std::string path = "space";
  if (j.is_string()) {
    if (j.get<std::string>() == "qubit") return StateSpace::qubit();
    throw ConfigError(path, "expected \"qubit\" or {\"classical\": {\"n\": ...}}");
  }
  require_object(j, path);
  if (j.size() != 1) throw ConfigError(path, "expected exactly one of 'classical', 'qubit'");
  if (j.contains("qubit")) return StateSpace::qubit();
  if (j.contains("classical")) {
    const std::string cpath = "space.classical";
    const Json& c = j.at("classical");
    require_object(c, cpath);
    allow_keys(c, cpath, {"n"});
    const long long n = get_integer(require_key(c, "n", cpath), key_path(cpath, "n"), 1);
    if (n > 4096) throw ConfigError(key_path(cpath, "n"), "dimension guard: n must be <= 4096");
    return StateSpace::classical(static_cast<int>(n));
  }
  throw ConfigError(path, "expected exactly one of 'classical', 'qubit'");
}

template <class F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

SemigroupSpec parse_semigroup(const Json& j, const std::string& path, const StateSpace& space,
                              double tol) {
  require_object(j, path);
  if (j.size() != 1) {
    throw ConfigError(path,
                      "expected exactly one of 'rate_matrix', 'discrete_operator', 'pauli', 'perturbation'");
  }
  const auto& [kind, body] = *j.items().begin();
  const std::string bpath = key_path(path, kind);
  if (kind == "rate_matrix") {
    Matrix a = get_matrix(body, bpath, space.dim());
    return wrap(bpath, [&] {
      Semigroup s = Semigroup::continuous(space, std::move(a));
      const GeneratorReport rep = validate_generator(s, space.is_classical() ? 1e-12 : tol);
      if (!rep.passed) {
        throw ConfigError(bpath, rep.issues.empty() ? "not a Markov generator" : rep.issues.front());
      }
      return SemigroupSpec{s, "continuous, generator " + bpath, std::nullopt};
    });
  }
  if (kind == "discrete_operator") {
    Matrix m = get_matrix(body, bpath, space.dim());
    return wrap(bpath, [&] {
      MarkovOperator op(space, std::move(m));
      if (!validate_markov(op, tol).is_markov()) throw ConfigError(bpath, "not a Markov operator");
      return SemigroupSpec{Semigroup::discrete(op), "discrete, step " + bpath, std::nullopt};
    });
  }
  if (kind == "pauli") {
    if (!space.is_qubit()) throw ConfigError(bpath, "Pauli channels need the qubit space");
    const std::vector<double> v = get_number_list(body, bpath);
    if (v.size() != 3) throw ConfigError(bpath, "expected [lambda, mu, kappa]");
    return wrap(bpath, [&] {
      const PauliChannel phi(v[0], v[1], v[2]);
      std::ostringstream os;
      os << "discrete, Pauli channel (" << v[0] << ", " << v[1] << ", " << v[2] << ")";
      return SemigroupSpec{Semigroup::discrete(phi.op()), os.str(), std::nullopt};
    });
  }
  if (kind == "perturbation") {
    require_object(body, bpath);
    allow_keys(body, bpath, {"base", "q_operator", "lambda"});
    SemigroupSpec base =
        parse_semigroup(require_key(body, "base", bpath), key_path(bpath, "base"), space, tol);
    if (!base.semigroup.is_continuous()) {
      throw ConfigError(key_path(bpath, "base"), "perturbation needs a continuous base");
    }
    const std::string qpath = key_path(bpath, "q_operator");
    Matrix q = get_matrix(require_key(body, "q_operator", bpath), qpath, space.dim());
    const std::string lpath = key_path(bpath, "lambda");
    const double lambda = get_positive(require_key(body, "lambda", bpath), lpath);
    return wrap(bpath, [&] {
      MarkovOperator qop(space, std::move(q));
      if (!validate_markov(qop, tol).is_markov()) throw ConfigError(qpath, "not a Markov operator");
      PerturbedSemigroup p = perturb(base.semigroup, qop, lambda);
      return SemigroupSpec{p.semigroup(), "continuous, perturbation of " + base.description,
                           base.semigroup};
    });
  }
  throw ConfigError(path, "unknown semigroup kind '" + kind + "'");
}

MarkovProjection parse_projection(const Json& j, const std::string& path, const StateSpace& space,
                                  double tol) {
  require_object(j, path);
  if (j.contains("blocks") || j.contains("weights")) {
    allow_keys(j, path, {"blocks", "weights"});
    if (!space.is_classical()) throw ConfigError(path, "block projections need a classical space");
    const std::string bpath = key_path(path, "blocks");
    const std::string wpath = key_path(path, "weights");
    const Json& blocks = require_key(j, "blocks", path);
    const Json& weights = require_key(j, "weights", path);
    if (!blocks.is_array() || blocks.empty()) throw ConfigError(bpath, "expected a non-empty array of blocks");
    if (!weights.is_array() || weights.size() != blocks.size()) {
      throw ConfigError(wpath, "expected one weight vector per block");
    }
    const int n = space.dim();
    std::vector<std::vector<int>> parts;
    std::vector<Vector> ws;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::string bp = index_path(bpath, b);
      if (!blocks[b].is_array() || blocks[b].empty()) throw ConfigError(bp, "expected a non-empty index list");
      std::vector<int> part;
      for (std::size_t k = 0; k < blocks[b].size(); ++k) {
        const long long idx = get_integer(blocks[b][k], index_path(bp, k), 0);
        if (idx >= n) throw ConfigError(index_path(bp, k), "index outside 0.." + std::to_string(n - 1));
        part.push_back(static_cast<int>(idx));
      }
      const std::string wp = index_path(wpath, b);
      const std::vector<double> w = get_number_list(weights[b], wp);
      Vector full = Vector::Zero(n);
      if (w.size() == part.size()) {
        for (std::size_t k = 0; k < part.size(); ++k) full(part[k]) = w[k];
      } else if (static_cast<int>(w.size()) == n) {
        for (int i = 0; i < n; ++i) full(i) = w[i];
      } else {
        throw ConfigError(wp, "expected " + std::to_string(part.size()) + " (block) or " +
                                  std::to_string(n) + " (full) weights");
      }
      parts.push_back(std::move(part));
      ws.push_back(std::move(full));
    }
    return wrap(path, [&] { return block_projection(space, std::move(parts), std::move(ws), tol); });
  }
  if (j.contains("pauli_p")) {
    allow_keys(j, path, {"pauli_p"});
    const std::string ppath = key_path(path, "pauli_p");
    if (!space.is_qubit()) throw ConfigError(ppath, "Pauli projections need the qubit space");
    const std::vector<double> v = get_number_list(j.at("pauli_p"), ppath);
    if (v.size() != 3) throw ConfigError(ppath, "expected [lambda, mu, kappa]");
    return wrap(ppath, [&] {
      return MarkovProjection::from_matrix(space, PauliChannel(v[0], v[1], v[2]).bloch_matrix(), tol);
    });
  }
  if (j.contains("matrix")) {
    allow_keys(j, path, {"matrix"});
    const std::string mpath = key_path(path, "matrix");
    Matrix m = get_matrix(j.at("matrix"), mpath, space.dim());
    return wrap(mpath, [&] { return MarkovProjection::from_matrix(space, m, tol); });
  }
  throw ConfigError(path, "expected 'blocks' + 'weights', 'pauli_p' or 'matrix'");
}

void check_params(const Json& params, const std::string& analysis, const StateSpace* space,
                  double tol) {
  const std::string path = "params";
  require_object(params, path);
  allow_keys(params, path,
             {"t", "t0", "t_grid", "n0", "tau", "epsilon", "r", "M", "n_max", "seed", "tol",
              "taus", "points", "metric_tol", "q_projection", "other"});
  for (const char* k : {"t", "t0", "epsilon", "r", "tol", "metric_tol"}) {
    if (params.contains(k)) get_positive(params.at(k), key_path(path, k));
  }
  if (params.contains("t")) {
    const double t = get_number(params.at("t"), "params.t");
    if (t < 0.0) throw ConfigError("params.t", "expected a number >= 0");
  }
  if (params.contains("tau")) {
    const double tau = get_number(params.at("tau"), "params.tau");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("params.tau", "expected 0 < tau <= 1");
  }
  if (params.contains("t_grid")) {
    const std::vector<double> g = get_number_list(params.at("t_grid"), "params.t_grid");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(g[i] > 0.0)) throw ConfigError(index_path("params.t_grid", i), "expected a time > 0");
    }
  }
  if (params.contains("taus")) {
    const std::vector<double> g = get_number_list(params.at("taus"), "params.taus");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(g[i] > 0.0 && g[i] < 1.0)) throw ConfigError(index_path("params.taus", i), "expected 0 < tau < 1");
    }
  }
  if (params.contains("n0")) get_integer(params.at("n0"), "params.n0", 1);
  if (params.contains("M")) get_integer(params.at("M"), "params.M", 1);
  if (params.contains("n_max")) {
    get_integer(params.at("n_max"), "params.n_max", analysis == "qubit_example" ? 2 : 1);
  }
  if (params.contains("seed")) get_integer(params.at("seed"), "params.seed", 0);
  if (params.contains("points")) get_integer(params.at("points"), "params.points", 2);
  if (params.contains("q_projection")) {
    if (!space) throw ConfigError("params.q_projection", "needs a space");
    parse_projection(params.at("q_projection"), "params.q_projection", *space, tol);
  }
  if (params.contains("other")) {
    if (!space) throw ConfigError("params.other", "needs a space");
    parse_semigroup(params.at("other"), "params.other", *space, tol);
  }
  auto need = [&](const char* key) {
    if (!params.contains(key)) {
      throw ConfigError(path, "analysis '" + analysis + "' requires '" + key + "'");
    }
  };
  if (analysis == "weak_mean") {
    need("t0");
    need("n0");
  } else if (analysis == "doeblin") {
    need("tau");
    need("t0");
  } else if (analysis == "ergodize") {
    need("epsilon");
  }
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// ---------------------------------------------------------------- running

struct Context {
  ScenarioConfig cfg;
  std::uint64_t seed;
  double tol;
  bool oracle;
  DeltaFn delta;
};

bool is_diagonal_pair(const Matrix& t, const Matrix& p) {
  auto diag = [](const Matrix& m) {
    Matrix off = m;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= 1e-14;
  };
  return diag(t) && diag(p);
}

double param_or(const Json& params, const char* key, double fallback) {
  return params.contains(key) ? params.at(key).get<double>() : fallback;
}

long long param_int_or(const Json& params, const char* key, long long fallback) {
  return params.contains(key) ? params.at(key).get<long long>() : fallback;
}

std::vector<double> param_list(const Json& params, const char* key) {
  std::vector<double> out;
  if (params.contains(key)) {
    for (const Json& v : params.at(key)) out.push_back(v.get<double>());
  }
  return out;
}

const Semigroup& require_semigroup(const Context& c) {
  if (!c.cfg.semigroup) throw ConfigError("semigroup", "analysis '" + c.cfg.analysis + "' needs a semigroup");
  return c.cfg.semigroup->semigroup;
}

const MarkovProjection& require_projection(const Context& c) {
  if (!c.cfg.projection) {
    throw ConfigError("projection", "analysis '" + c.cfg.analysis + "' needs a projection");
  }
  return *c.cfg.projection;
}

std::string curve_text(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  write_curve_csv(os, curve);
  return os.str();
}

void no_certificate(Artifacts& a, const CertifyOutcome& o) {
  a.exit_code = 2;
  Json scanned = Json::array();
  for (const GridValue& g : o.scanned) {
    scanned.push_back(Json{{"t", g.t}, {"lower", g.delta.lower}, {"upper", g.delta.upper}});
  }
  a.report["status"] = "no_certificate";
  a.report["result"] = Json{{"reason", o.reason}, {"scanned", scanned}};
  a.message = o.reason;
}

void run_delta(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& p = require_projection(c);
  const double t = param_or(c.cfg.params, "t", 1.0);
  const Matrix tt = s.evaluate(t).matrix();
  const DeltaResult d = c.delta(tt, p);
  Json result;
  result["t"] = t;
  result["delta"] = to_json(d);
  if (c.oracle) {
    Json oracle;
    if (p.space().is_classical() && p.space().dim() <= kVertexEnumMaxDim) {
      const DeltaResult v = delta_vertex_enum(tt, p.matrix());
      const double diff = std::abs(v.value() - d.value());
      oracle["method"] = to_string(v.method);
      oracle["value"] = v.value();
      oracle["abs_diff"] = diff;
      oracle["agrees"] = diff <= 1e-10;
      if (p.has_blocks()) {
        const DeltaResult pf = delta_pair_formula(tt, p);
        oracle["pair_formula"] = pf.value();
        oracle["pair_formula_abs_diff"] = std::abs(pf.value() - d.value());
      }
    } else {
      const DeltaResult b = delta_bracket(p.space(), tt, p.matrix(), {16, c.seed});
      oracle["method"] = to_string(b.method);
      oracle["lower"] = b.lower;
      oracle["upper"] = b.upper;
      oracle["agrees"] = b.lower <= d.upper + 1e-9 && d.lower <= b.upper + 1e-9;
    }
    result["oracle"] = oracle;
  }
  a.report["status"] = "ok";
  a.report["result"] = result;
}

void run_certify(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& p = require_projection(c);
  const CertifyOutcome o = certify_uniform(s, p, param_list(c.cfg.params, "t_grid"), c.delta);
  if (!o.certified()) return no_certificate(a, o);
  ErgodicityCertificate cert = *o.certificate;
  cert.measured_curve = uniform_curve(s, p, cert, static_cast<int>(param_int_or(c.cfg.params, "points", 200)));
  a.curve_csv = curve_text(cert.measured_curve);
  a.report["status"] = "certified";
  a.report["result"] = Json{{"certificate", to_json(cert)}};
}

void run_mean(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& q = require_projection(c);
  const CertifyOutcome o = certify_mean(s, q, param_list(c.cfg.params, "t_grid"), c.delta);
  if (!o.certified()) return no_certificate(a, o);
  ErgodicityCertificate cert = *o.certificate;
  cert.measured_curve = mean_curve(s, q, cert, static_cast<int>(param_int_or(c.cfg.params, "points", 200)));
  a.curve_csv = curve_text(cert.measured_curve);
  a.report["status"] = "certified";
  a.report["result"] = Json{{"certificate", to_json(cert)}};
}

void run_weak_mean(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& p = require_projection(c);
  const WeakMeanReport r = weak_mean_check(s, p, c.cfg.params.at("t0").get<double>(),
                                           static_cast<int>(c.cfg.params.at("n0").get<long long>()),
                                           c.delta);
  Json result = to_json(r);
  result["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  a.report["status"] = r.certifies ? "certified" : "no_certificate";
  a.report["result"] = result;
  if (!r.certifies) a.exit_code = 2;
}

void run_doeblin(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& p = require_projection(c);
  const MarkovProjection q = c.cfg.params.contains("q_projection")
                                 ? parse_projection(c.cfg.params.at("q_projection"),
                                                    "params.q_projection", p.space(), c.tol)
                                 : p;
  const DoeblinReport r = doeblin_check(s, p, q, c.cfg.params.at("tau").get<double>(),
                                        c.cfg.params.at("t0").get<double>(), c.delta);
  Json result = to_json(r);
  result["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  a.report["status"] = r.holds ? "certified" : "no_certificate";
  a.report["result"] = result;
  if (!r.holds) a.exit_code = 2;
}

void run_ergodize(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& p = require_projection(c);
  ErgodizeResult r = ergodize(s, p, c.cfg.params.at("epsilon").get<double>(),
                              param_list(c.cfg.params, "t_grid"));
  const OpennessRadius open = openness_radius(r.certificate);
  r.certificate.radius = open.radius;
  r.certificate.N = open.N;
  r.certificate.measured_curve =
      uniform_curve(r.perturbed.semigroup(), p, r.certificate,
                    static_cast<int>(param_int_or(c.cfg.params, "points", 200)));
  a.curve_csv = curve_text(r.certificate.measured_curve);
  Json result;
  result["lambda"] = r.lambda;
  result["epsilon"] = r.epsilon;
  result["closeness"] = to_json(r.closeness);
  result["closeness_ok"] = r.closeness_ok;
  result["apriori_q"] = r.apriori_q;
  result["apriori_ok"] = r.apriori_ok;
  result["perturbed_generator"] = to_json(r.perturbed.generator());
  result["certificate"] = to_json(r.certificate);
  const bool ok = r.closeness_ok && r.apriori_ok;
  a.report["status"] = ok ? "certified" : "no_certificate";
  a.report["result"] = result;
  if (!ok) a.exit_code = 2;
}

void run_rho(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  std::optional<Semigroup> other;
  if (c.cfg.params.contains("other")) {
    other = parse_semigroup(c.cfg.params.at("other"), "params.other", s.space(), c.tol).semigroup;
  } else if (c.cfg.semigroup->base) {
    other = c.cfg.semigroup->base;
  } else {
    throw ConfigError("params", "analysis 'rho' requires 'other' unless the semigroup is a perturbation");
  }
  const double r = param_or(c.cfg.params, "r", 1.0);
  const double tol = param_or(c.cfg.params, "metric_tol", 1e-7);
  Json result;
  result["rho_r"] = to_json(rho_r(s, *other, r, tol));
  if (c.cfg.params.contains("M")) {
    result["rho"] = to_json(rho_full(s, *other, static_cast<int>(c.cfg.params.at("M").get<long long>()), tol));
  }
  a.report["status"] = "ok";
  a.report["result"] = result;
}

void run_spectral(Context& c, Artifacts& a) {
  const Semigroup& s = require_semigroup(c);
  const MarkovProjection& p = require_projection(c);
  const CertifyOutcome o = certify_uniform(s, p, param_list(c.cfg.params, "t_grid"), c.delta);
  if (!o.certified()) return no_certificate(a, o);
  const SpectralReport r =
      spectral_check(s, p, *o.certificate, static_cast<int>(param_int_or(c.cfg.params, "n_max", 200)));
  Json result = to_json(r);
  result["certificate"] = to_json(*o.certificate);
  a.report["status"] = "certified";
  a.report["result"] = result;
}

void run_qubit_example(Context& c, Artifacts& a) {
  std::vector<double> taus = param_list(c.cfg.params, "taus");
  if (taus.empty()) taus = {0.25, 0.5, 0.75};
  const ExampleReport r =
      example_report(static_cast<int>(param_int_or(c.cfg.params, "n_max", 100)), taus);
  std::ostringstream csv;
  write_example_csv(r, csv);
  a.example_csv = csv.str();
  a.report["status"] = "ok";
  a.report["result"] = to_json(r);
}

}  // namespace

const std::vector<AnalysisInfo>& analyses() { return kAnalyses; }

bool is_analysis(const std::string& name) {
  return std::any_of(kAnalyses.begin(), kAnalyses.end(),
                     [&](const AnalysisInfo& a) { return a.name == name; });
}

std::string list_analyses() {
  std::ostringstream os;
  for (const AnalysisInfo& a : kAnalyses) {
    os << a.name << "\n  params: " << a.required << "\n  " << a.description << "\n";
  }
  return os.str();
}

ScenarioConfig parse_config(const std::string& text, double tol) {
  ScenarioConfig cfg;
  try {
    cfg.raw = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column), what);
  }
  const Json& root = cfg.raw;
  require_object(root, "config");
  allow_keys(root, "", {"name", "description", "space", "semigroup", "projection", "analysis", "params"});
  const Json& analysis = require_key(root, "analysis", "");
  if (!analysis.is_string() || !is_analysis(analysis.get<std::string>())) {
    throw ConfigError("analysis", "expected one of delta, certify, mean, weak_mean, doeblin, ergodize, "
                                  "rho, spectral, qubit_example");
  }
  cfg.analysis = analysis.get<std::string>();
  const bool standalone = cfg.analysis == "qubit_example";
  if (root.contains("space")) {
    cfg.space = parse_space(root.at("space"));
  } else if (!standalone) {
    throw ConfigError("config", "missing field 'space'");
  }
  if (root.contains("semigroup")) {
    if (!cfg.space) throw ConfigError("semigroup", "needs a space");
    cfg.semigroup = parse_semigroup(root.at("semigroup"), "semigroup", *cfg.space, tol);
  } else if (!standalone) {
    throw ConfigError("config", "missing field 'semigroup'");
  }
  if (root.contains("projection")) {
    if (!cfg.space) throw ConfigError("projection", "needs a space");
    cfg.projection = parse_projection(root.at("projection"), "projection", *cfg.space, tol);
  } else if (!standalone && cfg.analysis != "rho") {
    throw ConfigError("config", "missing field 'projection'");
  }
  if (root.contains("params")) cfg.params = root.at("params");
  check_params(cfg.params, cfg.analysis, cfg.space ? &*cfg.space : nullptr, tol);
  return cfg;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

Artifacts run_scenario(const std::string& config_text, const RunOptions& options) {
  Artifacts a;
  try {
    Context c;
    c.cfg = parse_config(config_text, options.tol.value_or(kDefaultTol));
    if (!options.tol && c.cfg.params.contains("tol")) {
      c.cfg = parse_config(config_text, c.cfg.params.at("tol").get<double>());
    }
    if (options.analysis_override) {
      if (!is_analysis(*options.analysis_override)) {
        throw ConfigError("analysis", "unknown analysis '" + *options.analysis_override + "'");
      }
      c.cfg.analysis = *options.analysis_override;
      check_params(c.cfg.params, c.cfg.analysis, c.cfg.space ? &*c.cfg.space : nullptr,
                   options.tol.value_or(kDefaultTol));
    }
    c.seed = options.seed.value_or(
        static_cast<std::uint64_t>(param_int_or(c.cfg.params, "seed", 1)));
    c.tol = options.tol.value_or(param_or(c.cfg.params, "tol", kDefaultTol));
    c.oracle = options.oracle;
    const std::uint64_t seed = c.seed;
    c.delta = [seed](const Matrix& t, const MarkovProjection& p) {
      if (p.space().is_qubit() && !is_diagonal_pair(t, p.matrix())) {
        return delta_bracket(p.space(), t, p.matrix(), {16, seed});
      }
      return delta_auto(t, p);
    };

    a.report = Json::object();
    a.report["schema_version"] = kReportSchemaVersion;
    a.report["analysis"] = c.cfg.analysis;
    a.report["status"] = "ok";
    a.report["provenance"] = Json{{"config_sha256", sha256_hex(config_text)},
                                  {"seed", seed},
                                  {"tol", c.tol},
                                  {"library_version", DOBRUSHIN_VERSION}};
    Json scenario;
    scenario["space"] = c.cfg.space ? Json(c.cfg.space->describe()) : Json(nullptr);
    scenario["semigroup"] = c.cfg.semigroup ? Json(c.cfg.semigroup->description) : Json(nullptr);
    scenario["projection"] = c.cfg.projection ? Json(c.cfg.projection->describe()) : Json(nullptr);
    a.report["scenario"] = scenario;
    a.report["result"] = nullptr;

    const std::string& an = c.cfg.analysis;
    if (an == "delta") run_delta(c, a);
    else if (an == "certify") run_certify(c, a);
    else if (an == "mean") run_mean(c, a);
    else if (an == "weak_mean") run_weak_mean(c, a);
    else if (an == "doeblin") run_doeblin(c, a);
    else if (an == "ergodize") run_ergodize(c, a);
    else if (an == "rho") run_rho(c, a);
    else if (an == "spectral") run_spectral(c, a);
    else run_qubit_example(c, a);
  } catch (const ConfigError& e) {
    a = Artifacts{};
    a.exit_code = 1;
    a.message = std::string("config error at ") + e.what();
  } catch (const Error& e) {
    a = Artifacts{};
    a.exit_code = 1;
    a.message = std::string("input error: ") + e.what();
  }
  return a;
}

void write_artifacts(const Artifacts& a, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (out_dir / name).string());
    f << text;
  };
  if (!a.report.is_null()) write("report.json", dump_json(a.report));
  if (a.curve_csv) write("curve.csv", *a.curve_csv);
  if (a.example_csv) write("example.csv", *a.example_csv);
}

}  // namespace dobrushin::cli
