#pragma once

// Checks of the certified bounds against trajectories and synthetic
// recurrences. Every inequality is tested with additive slack kSlack.

#include "tikreg/bounded_nat.hpp"
#include "tikreg/core_ops.hpp"
#include "tikreg/iterations.hpp"
#include "tikreg/moduli.hpp"
#include "tikreg/rates.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tikreg {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

enum class CheckStatus { Pass, Fail, Unverifiable };

std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::optional<Json> witness;
  std::optional<Json> violation;  // first offending instance
  Json details = Json::object();

  bool failed() const { return status == CheckStatus::Fail; }
  Json to_json() const;
};

/// Uniform doubles in [0, 1) built from the top 53 bits of mt19937_64, so the
/// stream is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  /// Uniform point in the closed ball of the given radius around center.
  Vector in_ball(const Vector& center, double radius);

 private:
  std::mt19937_64 eng_;
};

/// |x_n - p| <= N, |x_n| <= 2N, |T(beta_n x_n)| <= 3N and
/// |x_{n+1} - p| <= beta_n |x_n - p| + (1 - beta_n) |p| along the run, after
/// checking that p is fixed by T (to 1e-10) and N >= max{|x_0 - p|, |p|}.
/// T is the nonexpansive map of the T-KM form of the scheme.
CheckResult check_boundedness(const Trajectory& traj, const NonexpansiveOp& T, const Schedule& s,
                              const Vector& p, double N);

/// For k <= k_max: |x_{n+1} - x_n| <= 1/(k+1) on [nu1(k), n_max) and
/// |T(x_n) - x_n| <= 1/(k+1) on [nu2(k), n_max]. Ranges starting past n_max or
/// at a Saturated rate are reported as unverifiable at that k.
CheckResult check_asymptotic_regularity(const Trajectory& traj, const NonexpansiveOp& T,
                                        const QuantitativeModuli& m, std::uint64_t k_max);

/// The same check on a T-KM run that is regenerated step by step up to n_end
/// without storing iterates, so ranges beyond memory-sized horizons are reachable.
CheckResult check_asymptotic_regularity_streaming(const NonexpansiveOp& T, const Schedule& s,
                                                  const Vector& x0, const QuantitativeModuli& m,
                                                  std::uint64_t k_max, std::uint64_t n_end,
                                                  double lambda_scale = 1.0);

struct WitnessReport {
  bool found = false;
  std::uint64_t n = 0;
  std::uint64_t f_n = 0;
  std::uint64_t scanned = 0;  // candidates examined
  std::optional<std::string> mu;
  std::optional<bool> witness_le_mu;  // set when mu is exact and a witness exists
};

/// Least n with |x_i - x_j| <= 1/(k+1) for all i, j in [n, f(n)], found by a
/// linear scan with brute-force pairwise comparison. The scan stops once
/// f(n) exceeds n_max.
WitnessReport find_metastability_witness(const Trajectory& traj, std::uint64_t k,
                                         const CounterexampleFn& f,
                                         const std::optional<BoundedNat>& mu = std::nullopt);

/// |x_{n_max} - target| <= tol, with the distance curve sampled at n = 0, 1, 2, 4, ...
CheckResult check_strong_convergence(const Trajectory& traj, const Vector& target, double tol);

struct OracleReport {
  std::string lemma;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t checked = 0;     // (trial, k, n) triples compared against the bound
  std::uint64_t violations = 0;
  std::optional<Json> first_violation;
  bool corrupted = false;
  Json to_json() const;
};

/// Random instances of the recurrence s_{n+1} = (1 - a_n) s_n + a_n r_n + g_n
/// with exact moduli A, R, G computed from the generated data; asserts
/// s_n <= 1/(k+1) for n >= theta(k), k <= 5. With `corrupted`, G is declared
/// to be 0 while a late spike in g_n contradicts it.
OracleReport oracle_lemma_theta(std::uint64_t trials, std::uint64_t seed = kDefaultSeed,
                                bool corrupted = false);

/// Random instances of s_{i+1} = (1 - a_i)(s_i + v_i) + a_i r_i under the
/// interval hypotheses on [n, q]; asserts s_i <= 1/(k+1) on [sigma(k, n), q],
/// k <= 5. With `corrupted`, A is declared to be the identity although the
/// a_i are small.
OracleReport oracle_lemma_sigma(std::uint64_t trials, std::uint64_t seed = kDefaultSeed,
                                bool corrupted = false);

/// On a T-DR trajectory: z_n - y_n = (x_{n+1} - beta_n x_n)/lambda_n to 1e-10
/// and, for k <= k_max, |z_i - y_i| <= 1/(3(k+1)) for i >= dr_gap_start(k).
CheckResult check_dr_gap(const Trajectory& traj, const Schedule& s, const QuantitativeModuli& m,
                         std::uint64_t k_max);

/// Rate table {k: {nu1, nu2, mu?}} as decimal strings or SATURATED(cap).
Json rate_bounds(const QuantitativeModuli& m, std::uint64_t k_max,
                 const std::optional<CounterexampleFn>& f = std::nullopt,
                 const BigInt& cap = BoundedNat::default_cap());

}  // namespace tikreg
