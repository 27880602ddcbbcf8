#pragma once

// Experiment configs: one JSON document describing the scheme, the problem,
// the parameter sequences with their moduli, the run length and the checks.
// The schema is documented in configs/README.md.

#include "tikreg/core_ops.hpp"
#include "tikreg/iterations.hpp"
#include "tikreg/moduli.hpp"
#include "tikreg/rates.hpp"
#include "tikreg/verify.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tikreg {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { Tkm, Tfb, Tdr, Km };

Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

/// Operators of a configured problem together with the T-KM form of the
/// scheme: x_{n+1} = b_n x_n + (lambda_scale * l_n)(T(b_n x_n) - b_n x_n).
struct Problem {
  std::string kind;
  Scheme scheme = Scheme::Tkm;
  Eigen::Index dim = 0;
  NonexpansiveOp T;
  double lambda_scale = 1.0;
  /// Factor applied to ell for the rates of the T-KM form.
  std::uint64_t ell_factor = 1;
  std::optional<ResolventOp> J1, J2;
  std::optional<CocoerciveOp> T2;
  double gamma = 0.0;
  /// A fixed point of T; the projection of 0 onto Fix T when that is known
  /// in closed form or Fix T is a singleton.
  Vector p;
  Json descriptor;
};

/// Builds operators from the "problem" object. Throws ConfigError.
Problem build_problem(const Json& cfg, Scheme scheme);

/// Plain KM with constant lambda from `start` until |T(x) - x| <= tol.
/// Throws std::runtime_error if max_steps is exhausted first.
Vector fixed_point_oracle(const NonexpansiveOp& T, Vector start, double lambda, double tol,
                          std::uint64_t max_steps);

/// Counterexample function from "identity", "affine:a,b" / "affine(a,b)" or
/// "table:v0,v1,..." / "table[v0,v1,...]". Throws ConfigError.
CounterexampleFn parse_f_spec(const std::string& spec);

struct Experiment {
  std::string name;
  Scheme scheme = Scheme::Tkm;
  Problem problem;
  Schedule schedule;
  std::optional<QuantitativeModuli> moduli;
  double lambda_max = 1.0;
  Vector x0;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t n_max = 1000;
  std::uint64_t k_max = 2;
  double N = 1.0;
  std::vector<std::string> checks;
  Vector target;
  double tolerance = 1e-3;
  std::uint64_t meta_k = 9;
  std::string meta_f = "affine:2,10";
  Json raw;

  /// Moduli of the T-KM form (ell scaled for T-FB and T-DR).
  QuantitativeModuli km_moduli() const;
};

/// Reads the schedule and moduli part only ("instance" or "schedule" +
/// "moduli"). Used by the rates and validate commands as well.
void load_parameters(const Json& cfg, Experiment& e);

/// Full experiment. seed_override replaces the config seed for x0.
Experiment load_experiment(const Json& cfg, std::optional<std::uint64_t> seed_override = std::nullopt);

Json read_json_file(const std::string& path);

struct RunOutcome {
  Trajectory trajectory;
  std::vector<CheckResult> checks;
  Json report;
  bool failed() const;
};

RunOutcome run_experiment(const Experiment& e, const BigInt& cap = BoundedNat::default_cap());

}  // namespace tikreg
