#include "tikreg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tikreg {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("config: missing key '") + key + "'");
  }
  return j.at(key);
}

Vector vec(const Json& j, const char* key) {
  try {
    return vector_from_json(require(j, key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: bad vector '") + key + "': " + ex.what());
  }
}

Matrix mat(const Json& j, const char* key) {
  try {
    return matrix_from_json(require(j, key));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: bad matrix '") + key + "': " + ex.what());
  }
}

double num(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

double num_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

std::uint64_t nat(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(std::string("config: '") + key + "' must be a natural number");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t nat_or(const Json& j, const char* key, std::uint64_t fallback) {
  return j.contains(key) ? nat(j, key) : fallback;
}

void expect_scheme(Scheme got, std::initializer_list<Scheme> allowed, const std::string& kind) {
  if (std::find(allowed.begin(), allowed.end(), got) == allowed.end()) {
    throw ConfigError("config: problem kind '" + kind + "' does not support scheme " + to_string(got));
  }
}

}  // namespace

Scheme parse_scheme(const std::string& s) {
  if (s == "tkm") return Scheme::Tkm;
  if (s == "tfb") return Scheme::Tfb;
  if (s == "tdr") return Scheme::Tdr;
  if (s == "km") return Scheme::Km;
  throw ConfigError("config: unknown scheme '" + s + "'");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Tkm:
      return "tkm";
    case Scheme::Tfb:
      return "tfb";
    case Scheme::Tdr:
      return "tdr";
    case Scheme::Km:
      return "km";
  }
  return "unknown";
}

Vector fixed_point_oracle(const NonexpansiveOp& T, Vector start, double lambda, double tol,
                          std::uint64_t max_steps) {
  Vector x = std::move(start);
  for (std::uint64_t n = 0; n < max_steps; ++n) {
    const Vector tx = T(x);
    if (norm(tx - x) <= tol) return x;
    x = x + lambda * (tx - x);
  }
  throw std::runtime_error("fixed_point_oracle: no convergence within the step budget");
}

Problem build_problem(const Json& cfg, Scheme scheme) {
  Problem pr;
  pr.scheme = scheme;
  pr.kind = require(cfg, "kind").get<std::string>();
  pr.descriptor = cfg;
  const std::string& kind = pr.kind;
  try {
    if (kind == "hyperplane" || kind == "halfspace") {
      expect_scheme(scheme, {Scheme::Tkm, Scheme::Km}, kind);
      const Vector a = vec(cfg, "a");
      const double c = num(cfg, "c");
      pr.T = kind == "hyperplane" ? hyperplane_projector(a, c) : halfspace_projector(a, c);
    } else if (kind == "box") {
      expect_scheme(scheme, {Scheme::Tkm, Scheme::Km}, kind);
      pr.T = box_projector(vec(cfg, "lo"), vec(cfg, "hi"));
    } else if (kind == "ball") {
      expect_scheme(scheme, {Scheme::Tkm, Scheme::Km}, kind);
      pr.T = ball_projector(vec(cfg, "center"), num(cfg, "radius"));
    } else if (kind == "constant") {
      expect_scheme(scheme, {Scheme::Tkm, Scheme::Km}, kind);
      pr.T = NonexpansiveOp::constant(vec(cfg, "c"));
    } else if (kind == "identity") {
      expect_scheme(scheme, {Scheme::Tkm, Scheme::Km}, kind);
      const std::uint64_t dim = nat(cfg, "dim");
      if (dim < 1) throw ConfigError("config: identity problem needs dim >= 1");
      pr.T = NonexpansiveOp::identity();
      pr.dim = static_cast<Eigen::Index>(dim);
    } else if (kind == "lasso" || kind == "l1_quadratic") {
      // weight * |x|_1 + 1/2 <x, Q x> - <b, x>; lasso gives Q = A^T A, b = A^T y.
      expect_scheme(scheme, {Scheme::Tfb, Scheme::Tdr}, kind);
      Matrix Q;
      Vector b;
      if (kind == "lasso") {
        const Matrix A = mat(cfg, "A");
        const Vector y = vec(cfg, "b");
        if (A.rows() != y.size()) throw ConfigError("config: lasso A and b disagree in size");
        Q = A.transpose() * A;
        b = A.transpose() * y;
      } else {
        Q = mat(cfg, "Q");
        b = vec(cfg, "b");
      }
      const double weight = num_or(cfg, "weight", 1.0);
      if (scheme == Scheme::Tfb) {
        const CocoerciveOp T2 = CocoerciveOp::affine_gradient(Q, b);
        pr.gamma = num_or(cfg, "gamma", T2.delta);
        const ResolventOp J1 = soft_threshold_resolvent(pr.gamma, weight);
        const AveragedOp fb = compose_fb(J1, T2, pr.gamma);
        pr.T = fb.inner;
        pr.lambda_scale = fb.alpha;
        pr.ell_factor = 2;
        pr.J1 = J1;
        pr.T2 = T2;
      } else {
        pr.gamma = num_or(cfg, "gamma", 1.0);
        pr.J1 = soft_threshold_resolvent(pr.gamma, weight);
        pr.J2 = resolvent_affine(Q, b, pr.gamma);
        pr.T = compose_dr(*pr.J1, *pr.J2);
        pr.lambda_scale = 0.5;
        pr.ell_factor = 2;
      }
      pr.dim = Q.rows();
    } else {
      throw ConfigError("config: unknown problem kind '" + kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }

  if (pr.dim == 0) {
    for (const char* key : {"a", "lo", "center", "c"}) {
      if (cfg.contains(key) && cfg.at(key).is_array()) {
        pr.dim = static_cast<Eigen::Index>(cfg.at(key).size());
        break;
      }
    }
  }
  if (cfg.contains("p")) {
    pr.p = vec(cfg, "p");
  } else if (pr.J1 || pr.T2) {
    // Fix T is a singleton for the strictly convex problems used here.
    const double lambda = scheme == Scheme::Tdr ? 0.5 : 1.0;
    try {
      pr.p = fixed_point_oracle(pr.T, Vector::Zero(pr.dim), lambda, 1e-13, 10'000'000);
    } catch (const std::runtime_error& ex) {
      throw ConfigError(std::string("config: ") + ex.what() + "; supply 'p' explicitly");
    }
  } else {
    // Projections (and constants) map 0 to the nearest point of Fix T.
    pr.p = pr.T(Vector::Zero(pr.dim));
  }
  if (pr.p.size() != pr.dim) throw ConfigError("config: reference point has the wrong dimension");
  return pr;
}

CounterexampleFn parse_f_spec(const std::string& spec) {
  auto numbers = [&](std::string body) {
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    std::vector<BigInt> out;
    std::string tok;
    while (in >> tok) {
      try {
        out.push_back(parse_big_natural(tok));
      } catch (const std::exception&) {
        throw ConfigError("f-spec: bad natural '" + tok + "'");
      }
    }
    return out;
  };
  auto strip = [&](std::size_t prefix, char open, char close) {
    std::string body = spec.substr(prefix);
    if (!body.empty() && (body.front() == open || body.front() == ':')) body.erase(0, 1);
    if (!body.empty() && body.back() == close) body.pop_back();
    return body;
  };
  if (spec == "identity") return NatFunction::identity();
  if (spec.rfind("affine", 0) == 0) {
    const auto v = numbers(strip(6, '(', ')'));
    if (v.size() != 2) throw ConfigError("f-spec: affine needs two naturals a,b");
    return NatFunction::affine(v[0], v[1]);
  }
  if (spec.rfind("table", 0) == 0) {
    auto v = numbers(strip(5, '[', ']'));
    if (v.empty()) throw ConfigError("f-spec: empty table");
    return NatFunction::table(std::move(v));
  }
  throw ConfigError("f-spec: expected identity, affine:a,b or table:v0,v1,...");
}

QuantitativeModuli Experiment::km_moduli() const {
  if (!moduli) throw ConfigError("config: no moduli for rate evaluation");
  return moduli->with_ell_scaled(problem.ell_factor);
}

void load_parameters(const Json& cfg, Experiment& e) {
  try {
    if (cfg.contains("instance")) {
      const std::string name = cfg.at("instance").get<std::string>();
      std::optional<StockInstance> found;
      for (auto& s : stock_instances()) {
        if (s.name == name) found = s;
      }
      if (!found) throw ConfigError("config: unknown instance '" + name + "'");
      e.schedule = found->schedule;
      e.moduli = found->moduli;
      e.lambda_max = found->lambda_max;
    }
    if (cfg.contains("schedule")) e.schedule = Schedule::from_json(cfg.at("schedule"));
    if (cfg.contains("moduli")) e.moduli = QuantitativeModuli::from_json(cfg.at("moduli"));
    if (!cfg.contains("instance") && !cfg.contains("schedule")) {
      throw ConfigError("config: need 'instance' or 'schedule'");
    }
    if (cfg.contains("lambda_max")) e.lambda_max = num(cfg, "lambda_max");
    if (cfg.contains("N")) {
      const std::uint64_t N = nat(cfg, "N");
      if (N < 1) throw ConfigError("config: N must be >= 1");
      e.N = static_cast<double>(N);
      if (e.moduli) e.moduli->N = N;
    } else if (e.moduli) {
      e.N = static_cast<double>(e.moduli->N);
    }
    if (e.moduli) e.moduli->check_shape();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
}

Experiment load_experiment(const Json& cfg, std::optional<std::uint64_t> seed_override) {
  Experiment e;
  e.raw = cfg;
  try {
    e.name = require(cfg, "experiment").get<std::string>();
    e.scheme = parse_scheme(require(cfg, "scheme").get<std::string>());
    load_parameters(cfg, e);
    e.problem = build_problem(require(cfg, "problem"), e.scheme);
    e.n_max = nat(cfg, "n_max");
    if (e.n_max < 1) throw ConfigError("config: n_max must be >= 1");
    e.k_max = nat_or(cfg, "k_max", 2);
    e.tolerance = num_or(cfg, "tolerance", 1e-3);

    switch (e.scheme) {
      case Scheme::Tkm:
      case Scheme::Km:
        e.lambda_max = 1.0;
        break;
      case Scheme::Tfb:
        e.lambda_max = 2.0 - e.problem.gamma / (2.0 * e.problem.T2->delta);
        break;
      case Scheme::Tdr:
        e.lambda_max = 2.0;
        break;
    }
    if (e.scheme == Scheme::Km) {
      e.schedule.beta = RealSequence::constant(1.0);
    }
    e.schedule.validate_range(e.n_max, e.lambda_max);

    const Json x0 = cfg.contains("x0") ? cfg.at("x0") : Json::object();
    e.seed = seed_override.value_or(nat_or(x0, "seed", kDefaultSeed));
    if (x0.is_array()) {
      e.x0 = vec(cfg, "x0");
    } else {
      const double radius = num_or(x0, "radius", 0.9 * e.N);
      Rng rng(e.seed);
      e.x0 = rng.in_ball(e.problem.p, radius);
    }
    if (e.x0.size() != e.problem.dim) throw ConfigError("config: x0 has the wrong dimension");

    e.target = cfg.contains("target") ? vec(cfg, "target") : e.problem.p;
    if (cfg.contains("checks")) {
      e.checks = cfg.at("checks").get<std::vector<std::string>>();
    } else if (e.scheme == Scheme::Km) {
      e.checks = {"boundedness"};
    } else {
      e.checks = {"boundedness", "asymptotic_regularity", "strong_convergence"};
      e.checks.push_back(e.scheme == Scheme::Tdr ? "dr_gap" : "metastability");
    }
    if (cfg.contains("metastability")) {
      const Json& m = cfg.at("metastability");
      e.meta_k = nat_or(m, "k", e.meta_k);
      if (m.contains("f")) e.meta_f = m.at("f").get<std::string>();
    }
    parse_f_spec(e.meta_f);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
  return e;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + ex.what());
  }
}

bool RunOutcome::failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.failed(); });
}

RunOutcome run_experiment(const Experiment& e, const BigInt& cap) {
  RunOutcome out;
  const Problem& pr = e.problem;
  switch (e.scheme) {
    case Scheme::Tkm:
      out.trajectory = run_tkm(pr.T, e.schedule, e.x0, e.n_max);
      break;
    case Scheme::Tfb:
      out.trajectory = run_tfb(*pr.J1, *pr.T2, pr.gamma, e.schedule, e.x0, e.n_max);
      break;
    case Scheme::Tdr:
      out.trajectory = run_tdr(*pr.J1, *pr.J2, e.schedule, e.x0, e.n_max);
      break;
    case Scheme::Km:
      out.trajectory = run_km(pr.T, e.schedule.lambda, e.x0, e.n_max);
      break;
  }
  out.trajectory.problem = pr.descriptor;
  const Trajectory& traj = out.trajectory;
  const bool rated = e.moduli.has_value() && e.scheme != Scheme::Km;
  const CounterexampleFn f = parse_f_spec(e.meta_f);

  for (const std::string& name : e.checks) {
    if (name == "boundedness") {
      out.checks.push_back(check_boundedness(traj, pr.T, e.schedule, pr.p, e.N));
    } else if (name == "asymptotic_regularity") {
      if (!rated) throw ConfigError("config: asymptotic_regularity needs moduli and a Tikhonov scheme");
      out.checks.push_back(check_asymptotic_regularity(traj, pr.T, e.km_moduli(), e.k_max));
    } else if (name == "asymptotic_regularity_streaming") {
      if (!rated) throw ConfigError("config: streaming check needs moduli and a Tikhonov scheme");
      const std::uint64_t n_end = e.raw.value("stream_to", e.n_max);
      out.checks.push_back(check_asymptotic_regularity_streaming(pr.T, e.schedule, e.x0, e.km_moduli(),
                                                                 e.k_max, n_end, pr.lambda_scale));
    } else if (name == "strong_convergence") {
      out.checks.push_back(check_strong_convergence(traj, e.target, e.tolerance));
    } else if (name == "metastability") {
      std::optional<BoundedNat> mu_val;
      if (rated) mu_val = mu(e.km_moduli(), BoundedNat(BigInt(e.meta_k), cap), f);
      const WitnessReport w = find_metastability_witness(traj, e.meta_k, f, mu_val);
      CheckResult c;
      c.name = "metastability";
      c.details = Json{{"k", e.meta_k}, {"f", e.meta_f}, {"scanned", w.scanned}};
      if (w.mu) c.details["mu"] = *w.mu;
      if (w.found) {
        c.witness = Json{{"n", w.n}, {"f_n", w.f_n}};
        if (w.witness_le_mu) c.details["witness_le_mu"] = *w.witness_le_mu;
        c.status = w.witness_le_mu.value_or(true) ? CheckStatus::Pass : CheckStatus::Fail;
        if (c.failed()) c.violation = Json{{"quantity", "witness <= mu"}, {"n", w.n}, {"mu", *w.mu}};
      } else {
        c.status = CheckStatus::Unverifiable;
      }
      out.checks.push_back(std::move(c));
    } else if (name == "dr_gap") {
      if (e.scheme != Scheme::Tdr || !e.moduli) throw ConfigError("config: dr_gap needs a tdr run with moduli");
      out.checks.push_back(check_dr_gap(traj, e.schedule, *e.moduli, e.k_max));
    } else {
      throw ConfigError("config: unknown check '" + name + "'");
    }
  }

  Json report;
  report["experiment"] = e.name;
  report["scheme"] = to_string(e.scheme);
  report["seed"] = e.seed;
  report["n_max"] = e.n_max;
  report["N"] = e.N;
  report["x0"] = to_json(e.x0);
  report["p"] = to_json(pr.p);
  report["schedule"] = e.schedule.to_json();
  if (e.moduli) {
    report["moduli"] = e.moduli->to_json();
    if (rated) report["bounds"] = rate_bounds(e.km_moduli(), e.k_max, f, cap);
  }
  Json checks = Json::array();
  for (const auto& c : out.checks) checks.push_back(c.to_json());
  report["checks"] = std::move(checks);
  report["status"] = out.failed() ? "fail" : "pass";
  out.report = std::move(report);
  return out;
}

}  // namespace tikreg
