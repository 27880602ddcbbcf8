#include <doctest.h>

#include "support.hpp"
#include "tikreg/verify.hpp"

#include <cmath>

using namespace tikreg;
using testing_support::random_psd;
using testing_support::random_vector;
using testing_support::vec;

namespace {

Trajectory synthetic(std::vector<Vector> xs) {
  Trajectory t;
  t.x = std::move(xs);
  t.scheme = "synthetic";
  return t;
}

}  // namespace

TEST_CASE("rng is reproducible") {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.uniform() != c.uniform());
  Rng d(1);
  for (int i = 0; i < 1000; ++i) {
    const Vector p = d.in_ball(vec({1.0, 2.0, 3.0}), 0.5);
    CHECK((p - vec({1.0, 2.0, 3.0})).norm() <= 0.5);
  }
  CHECK(to_string(CheckStatus::Unverifiable) == "unverifiable");
}

TEST_CASE("boundedness") {
  const Schedule s = sqrt_instance().schedule;
  const Vector x0 = vec({0.3, -0.4});
  const Trajectory id = run_tkm(NonexpansiveOp::identity(), s, x0, 1000);
  CHECK(check_boundedness(id, NonexpansiveOp::identity(), s, Vector::Zero(2), 1.0).status == CheckStatus::Pass);

  const Vector a = vec({1.0, 0.0, 0.0, 0.0, 0.0});
  const NonexpansiveOp T = hyperplane_projector(a, 1.0);
  Rng rng(kDefaultSeed);
  const Vector start = rng.in_ball(a, 0.9);
  const Trajectory h = run_tkm(T, s, start, 100000);
  const CheckResult ok = check_boundedness(h, T, s, a, 1.0);
  CHECK(ok.status == CheckStatus::Pass);
  CHECK(!ok.violation.has_value());

  // N below |p| or |x_0 - p|.
  const CheckResult small = check_boundedness(h, T, s, a, 0.5);
  CHECK(small.status == CheckStatus::Fail);
  REQUIRE(small.violation.has_value());
  // p not fixed.
  CHECK(check_boundedness(h, T, s, Vector::Zero(5), 1.0).status == CheckStatus::Fail);

  // A trajectory that drifts away is caught along the run.
  std::vector<Vector> xs;
  for (int n = 0; n <= 20; ++n) xs.push_back(vec({0.1 * n, 0.0}));
  const CheckResult drift = check_boundedness(synthetic(xs), NonexpansiveOp::identity(), s, Vector::Zero(2), 1.0);
  CHECK(drift.status == CheckStatus::Fail);
  REQUIRE(drift.violation.has_value());
  CHECK(drift.violation->dump().find("\"n\"") != std::string::npos);
}

TEST_CASE("asymptotic regularity") {
  const StockInstance si = sqrt_instance();
  // T = Id: every evaluable range passes.
  const Trajectory id = run_tkm(NonexpansiveOp::identity(), si.schedule, vec({0.5, 0.5}), 20000);
  const CheckResult r = check_asymptotic_regularity(id, NonexpansiveOp::identity(), si.moduli, 1);
  CHECK(r.status != CheckStatus::Fail);

  // Harmonic instance: nu1(0) is far beyond any run.
  const StockInstance hi = harmonic_instance();
  const Trajectory hr = run_tkm(NonexpansiveOp::identity(), hi.schedule, vec({0.5, 0.5}), 1000);
  CHECK(check_asymptotic_regularity(hr, NonexpansiveOp::identity(), hi.moduli, 0).status ==
        CheckStatus::Unverifiable);

  // A moduli set claiming regularity from n = 1 on, for a trajectory that jumps.
  QuantitativeModuli liar = si.moduli;
  liar.D = NatFunction::zero();
  liar.B = NatFunction::zero();
  liar.b = NatFunction::zero();
  std::vector<Vector> xs;
  for (int n = 0; n <= 200; ++n) xs.push_back(vec({n % 2 == 0 ? 0.0 : 2.0}));
  const CheckResult bad = check_asymptotic_regularity(synthetic(xs), NonexpansiveOp::identity(), liar, 0);
  CHECK(bad.status == CheckStatus::Fail);
  CHECK(bad.violation.has_value());
}

TEST_CASE("streaming asymptotic regularity agrees with the stored check") {
  const StockInstance si = sqrt_instance();
  QuantitativeModuli m = si.moduli;
  const NonexpansiveOp T = hyperplane_projector(vec({1.0, 0.0, 0.0}), 1.0);
  const Vector x0 = vec({0.2, 0.3, -0.1});
  const Trajectory t = run_tkm(T, si.schedule, x0, 30000);
  const CheckResult a = check_asymptotic_regularity(t, T, m, 0);
  const CheckResult b = check_asymptotic_regularity_streaming(T, si.schedule, x0, m, 0, 30000);
  CHECK(a.status == b.status);
}

TEST_CASE("metastability witness") {
  std::vector<Vector> constant(200, vec({1.0, 2.0}));
  const WitnessReport c = find_metastability_witness(synthetic(constant), 3, NatFunction::affine(2, 10));
  CHECK(c.found);
  CHECK(c.n == 0);
  CHECK(c.f_n == 10);

  std::vector<Vector> osc;
  for (int n = 0; n <= 500; ++n) osc.push_back(vec({n % 2 == 0 ? 0.0 : 0.5}));
  const WitnessReport o = find_metastability_witness(synthetic(osc), 9, NatFunction::affine(2, 10));
  CHECK(!o.found);
  CHECK(o.scanned > 0);

  // x_n = 1/(n+1): the least witness for k = 9 and f(n) = n + 5 is n = 9.
  std::vector<Vector> dec;
  for (int n = 0; n <= 100; ++n) dec.push_back(vec({1.0 / (n + 1)}));
  const WitnessReport w = find_metastability_witness(synthetic(dec), 9, NatFunction::affine(1, 5));
  REQUIRE(w.found);
  std::uint64_t least = 0;
  for (std::uint64_t n = 0;; ++n) {
    if (1.0 / (n + 1) - 1.0 / (n + 6) <= 0.1) {
      least = n;
      break;
    }
  }
  CHECK(w.n == least);

  const WitnessReport le = find_metastability_witness(synthetic(dec), 9, NatFunction::affine(1, 5), BoundedNat(100));
  CHECK(le.witness_le_mu == std::optional<bool>(true));
  CHECK(le.mu == std::optional<std::string>("100"));
  const WitnessReport gt = find_metastability_witness(synthetic(dec), 9, NatFunction::affine(1, 5), BoundedNat(1));
  CHECK(gt.witness_le_mu == std::optional<bool>(false));
  const WitnessReport sat =
      find_metastability_witness(synthetic(dec), 9, NatFunction::affine(1, 5), BoundedNat::saturated());
  CHECK(!sat.witness_le_mu.has_value());
  CHECK(sat.mu->rfind("SATURATED", 0) == 0);
}

TEST_CASE("strong convergence") {
  const Trajectory id = run_tkm(NonexpansiveOp::identity(), sqrt_instance().schedule, vec({0.5, 0.5}), 10000);
  const CheckResult r = check_strong_convergence(id, Vector::Zero(2), 1e-3);
  CHECK(r.status == CheckStatus::Pass);
  CHECK(r.details.contains("distance_curve"));
  CHECK(check_strong_convergence(id, vec({1.0, 0.0}), 1e-3).status == CheckStatus::Fail);

  const Vector a = vec({2.0, 0.0, 1.0});
  const double c = 3.0;
  const Vector target = c * a / a.squaredNorm();
  const NonexpansiveOp T = hyperplane_projector(a, c);
  const Trajectory h = run_tkm(T, sqrt_instance().schedule, vec({0.0, 1.0, 0.0}), 200000);
  CHECK(check_strong_convergence(h, target, 5e-3).status == CheckStatus::Pass);
}

TEST_CASE("theta oracle") {
  const OracleReport r = oracle_lemma_theta(60, kDefaultSeed);
  CHECK(r.trials == 60);
  CHECK(r.checked > 0);
  CHECK(r.violations == 0);
  CHECK(!r.first_violation.has_value());
  const OracleReport again = oracle_lemma_theta(60, kDefaultSeed);
  CHECK(again.checked == r.checked);

  const OracleReport bad = oracle_lemma_theta(20, kDefaultSeed, true);
  CHECK(bad.corrupted);
  CHECK(bad.violations > 0);
  CHECK(bad.first_violation.has_value());
  CHECK(bad.to_json().at("violations") == bad.violations);
}

TEST_CASE("sigma oracle") {
  const OracleReport r = oracle_lemma_sigma(60, kDefaultSeed);
  CHECK(r.checked > 0);
  CHECK(r.violations == 0);
  const OracleReport bad = oracle_lemma_sigma(20, kDefaultSeed, true);
  CHECK(bad.violations > 0);
  CHECK(bad.lemma == "sigma");
}

TEST_CASE("dr gap") {
  const StockInstance si = stock_instances().at(2);
  Rng rng(5);
  const Matrix Q = random_psd(rng, 5, 5);
  const ResolventOp J1 = soft_threshold_resolvent(1.0, 0.1);
  const ResolventOp J2 = resolvent_affine(Q, vec({0.6, -0.4, 0.5, 0.05, 0.3}), 1.0);
  const Trajectory t = run_tdr(J1, J2, si.schedule, random_vector(rng, 5, 0.3), 70000);
  const CheckResult r = check_dr_gap(t, si.schedule, si.moduli, 0);
  CHECK(r.status == CheckStatus::Pass);
  CHECK(r.details.dump().find("63505") != std::string::npos);

  // A tampered auxiliary sequence breaks the identity.
  Trajectory bad = t;
  bad.z[10] += vec({1e-6, 0.0, 0.0, 0.0, 0.0});
  CHECK(check_dr_gap(bad, si.schedule, si.moduli, 0).status == CheckStatus::Fail);

  CHECK_THROWS(check_dr_gap(run_tkm(NonexpansiveOp::identity(), si.schedule, vec({1.0}), 10), si.schedule,
                            si.moduli, 0));
}

TEST_CASE("rate table") {
  const Json j = rate_bounds(sqrt_instance().moduli, 2, NatFunction::affine(2, 10));
  CHECK(j.at("0").at("nu1") == "5626");
  CHECK(j.at("2").at("nu2") == "107588758");
  CHECK(j.at("1").at("mu").get<std::string>().rfind("SATURATED", 0) == 0);
  const Json n = rate_bounds(harmonic_instance().moduli, 0);
  CHECK(n.at("0").at("nu2").get<std::string>().rfind("SATURATED", 0) == 0);
  CHECK(!n.at("0").contains("mu"));
}
