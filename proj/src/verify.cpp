#include "tikreg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tikreg {

namespace {

constexpr std::size_t kMaxListedViolations = 1;

Json k_entry(std::uint64_t k) { return Json{{"k", k}}; }

// Exact minimal A with sum_{i=1}^{A(k)} alpha_i >= k, from the prefix sums
// of the generated alpha. Arguments whose A lies past the data throw.
NatFunction divergence_rate(const std::vector<double>& alpha) {
  auto sums = std::make_shared<std::vector<long double>>(alpha.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (i >= 1) acc += alpha[i];
    (*sums)[i] = acc;
  }
  return NatFunction::custom(
      [sums](const BoundedNat& k) -> BoundedNat {
        const long double target = static_cast<long double>(k.to_u64().value());
        const auto it = std::lower_bound(sums->begin(), sums->end(), target);
        if (it == sums->end()) throw std::out_of_range("divergence rate beyond generated data");
        return k.lift(static_cast<std::uint64_t>(it - sums->begin()));
      },
      "divergence_rate");
}

NatFunction table_fn(std::vector<std::uint64_t> values, const char* name) {
  auto data = std::make_shared<std::vector<std::uint64_t>>(std::move(values));
  return NatFunction::custom(
      [data](const BoundedNat& k) -> BoundedNat {
        const std::uint64_t i = k.to_u64().value();
        if (i >= data->size()) throw std::out_of_range("rate table exhausted");
        return k.lift((*data)[i]);
      },
      name);
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Unverifiable:
      return "unverifiable";
  }
  return "unknown";
}

Json CheckResult::to_json() const {
  Json j{{"name", name}, {"status", to_string(status)}};
  if (witness) j["witness"] = *witness;
  if (violation) j["violation"] = *violation;
  if (!details.empty()) j["details"] = details;
  return j;
}

Vector Rng::in_ball(const Vector& center, double radius) {
  const auto dim = center.size();
  Vector g(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    // Box-Muller on our own uniforms keeps the stream portable.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    g[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  const double gn = g.norm();
  if (gn == 0.0) return center;
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
  return center + (r / gn) * g;
}

CheckResult check_boundedness(const Trajectory& traj, const NonexpansiveOp& T, const Schedule& s,
                              const Vector& p, double N) {
  CheckResult res;
  res.name = "boundedness";
  const double fix_res = norm(T(p) - p);
  const double p_norm = norm(p);
  res.details["N"] = N;
  res.details["p_fixed_residual"] = fix_res;
  if (fix_res > 1e-10) {
    res.status = CheckStatus::Fail;
    res.violation = Json{{"quantity", "T(p) = p"}, {"lhs", fix_res}, {"rhs", 1e-10}};
    return res;
  }

  std::uint64_t count = 0;
  double worst_dist = 0.0, worst_norm = 0.0, worst_tbx = 0.0;
  auto report = [&](const char* quantity, std::uint64_t n, double lhs, double rhs) {
    if (lhs <= rhs + kSlack) return;
    if (count++ < kMaxListedViolations) {
      res.violation = Json{{"quantity", quantity}, {"n", n}, {"lhs", lhs}, {"rhs", rhs}};
    }
  };
  if (traj.x.empty()) throw std::invalid_argument("check_boundedness: empty trajectory");
  report("N >= |p|", 0, p_norm, N);

  const std::uint64_t n_max = traj.n_max();
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const Vector& x = traj.x[n];
    const double dist = norm(x - p);
    const double xn = norm(x);
    worst_dist = std::max(worst_dist, dist);
    worst_norm = std::max(worst_norm, xn);
    report("|x_n - p| <= N", n, dist, N);
    report("|x_n| <= 2N", n, xn, 2.0 * N);
    if (n == n_max) break;
    const double b = s.beta(n);
    const double tbx = norm(T(b * x));
    worst_tbx = std::max(worst_tbx, tbx);
    report("|T(beta_n x_n)| <= 3N", n, tbx, 3.0 * N);
    report("|x_{n+1} - p| <= beta_n |x_n - p| + (1 - beta_n)|p|", n, norm(traj.x[n + 1] - p),
           b * dist + (1.0 - b) * p_norm);
  }
  res.details["max_dist_to_p"] = worst_dist;
  res.details["max_norm"] = worst_norm;
  res.details["max_T_beta_x"] = worst_tbx;
  res.details["violations"] = count;
  res.status = count == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  return res;
}

namespace {

struct RegularityRange {
  std::uint64_t k = 0;
  BoundedNat nu1, nu2;
  std::uint64_t from1 = 0, from2 = 0;
  bool usable1 = false, usable2 = false;
  std::uint64_t checked1 = 0, checked2 = 0, bad1 = 0, bad2 = 0;
  double max1 = 0.0, max2 = 0.0;
  std::optional<Json> first_bad;
};

std::vector<RegularityRange> regularity_ranges(const QuantitativeModuli& m, std::uint64_t k_max,
                                               std::uint64_t n_max) {
  std::vector<RegularityRange> out;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    RegularityRange r;
    r.k = k;
    r.nu1 = nu1(m, BoundedNat(k));
    r.nu2 = nu2(m, BoundedNat(k));
    // Step residuals need x_{n+1}, so the step range ends at n_max - 1.
    r.usable1 = !r.nu1.is_saturated() && r.nu1.value() < n_max;
    r.usable2 = !r.nu2.is_saturated() && r.nu2.value() <= n_max;
    if (r.usable1) r.from1 = r.nu1.to_u64().value();
    if (r.usable2) r.from2 = r.nu2.to_u64().value();
    out.push_back(std::move(r));
  }
  return out;
}

void observe(RegularityRange& r, std::uint64_t n, double step, std::optional<double> fix) {
  const double bound = 1.0 / static_cast<double>(r.k + 1);
  if (r.usable1 && n >= r.from1) {
    ++r.checked1;
    r.max1 = std::max(r.max1, step);
    if (step > bound + kSlack && r.bad1++ == 0 && !r.first_bad) {
      r.first_bad = Json{{"k", r.k}, {"n", n}, {"quantity", "|x_{n+1} - x_n|"}, {"lhs", step},
                         {"rhs", bound}};
    }
  }
  if (fix && r.usable2 && n >= r.from2) {
    ++r.checked2;
    r.max2 = std::max(r.max2, *fix);
    if (*fix > bound + kSlack && r.bad2++ == 0 && !r.first_bad) {
      r.first_bad = Json{{"k", r.k}, {"n", n}, {"quantity", "|T(x_n) - x_n|"}, {"lhs", *fix},
                         {"rhs", bound}};
    }
  }
}

// Last iterate: only the fix residual exists there.
void observe_fix_only(std::vector<RegularityRange>& ranges, std::uint64_t n, double fix) {
  for (auto& r : ranges) {
    const bool u1 = r.usable1;
    r.usable1 = false;
    observe(r, n, 0.0, fix);
    r.usable1 = u1;
  }
}

CheckResult summarize_regularity(std::string name, std::vector<RegularityRange>& ranges,
                                 std::uint64_t n_max) {
  CheckResult res;
  res.name = std::move(name);
  res.details["n_max"] = n_max;
  Json per_k = Json::array();
  bool any_checked = false, any_bad = false;
  for (auto& r : ranges) {
    auto part = [](bool usable, std::uint64_t bad) {
      if (!usable) return std::string("unverifiable");
      return bad == 0 ? std::string("pass") : std::string("fail");
    };
    Json e = k_entry(r.k);
    e["nu1"] = r.nu1.to_string();
    e["nu2"] = r.nu2.to_string();
    e["step"] = part(r.usable1, r.bad1);
    e["fix"] = part(r.usable2, r.bad2);
    e["step_checked"] = r.checked1;
    e["fix_checked"] = r.checked2;
    if (r.usable1) e["max_step_residual"] = r.max1;
    if (r.usable2) e["max_fix_residual"] = r.max2;
    per_k.push_back(std::move(e));
    any_checked = any_checked || r.checked1 > 0 || r.checked2 > 0;
    if (r.bad1 + r.bad2 > 0) {
      any_bad = true;
      if (!res.violation) res.violation = r.first_bad;
    }
  }
  res.details["per_k"] = std::move(per_k);
  res.status = any_bad ? CheckStatus::Fail
                       : (any_checked ? CheckStatus::Pass : CheckStatus::Unverifiable);
  return res;
}

}  // namespace

CheckResult check_asymptotic_regularity(const Trajectory& traj, const NonexpansiveOp& T,
                                        const QuantitativeModuli& m, std::uint64_t k_max) {
  const std::uint64_t n_max = traj.n_max();
  auto ranges = regularity_ranges(m, k_max, n_max);
  std::uint64_t fix_from = n_max + 1;
  for (const auto& r : ranges) {
    if (r.usable2) fix_from = std::min(fix_from, r.from2);
  }
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const double step = norm(traj.x[n + 1] - traj.x[n]);
    std::optional<double> fix;
    if (n >= fix_from) fix = norm(T(traj.x[n]) - traj.x[n]);
    for (auto& r : ranges) observe(r, n, step, fix);
  }
  if (n_max >= fix_from) observe_fix_only(ranges, n_max, norm(T(traj.x[n_max]) - traj.x[n_max]));
  return summarize_regularity("asymptotic_regularity", ranges, n_max);
}

CheckResult check_asymptotic_regularity_streaming(const NonexpansiveOp& T, const Schedule& s,
                                                  const Vector& x0, const QuantitativeModuli& m,
                                                  std::uint64_t k_max, std::uint64_t n_end,
                                                  double lambda_scale) {
  if (n_end < 1) throw std::invalid_argument("streaming check: n_end must be >= 1");
  auto ranges = regularity_ranges(m, k_max, n_end);
  std::uint64_t fix_from = n_end + 1;
  for (const auto& r : ranges) {
    if (r.usable2) fix_from = std::min(fix_from, r.from2);
  }
  TkmStepper stepper(T, s, x0, lambda_scale);
  Vector prev = x0;
  for (std::uint64_t n = 0; n < n_end; ++n) {
    std::optional<double> fix;
    if (n >= fix_from) fix = norm(T(prev) - prev);
    const Vector& next = stepper.step();
    const double step = norm(next - prev);
    for (auto& r : ranges) observe(r, n, step, fix);
    prev = next;
  }
  if (n_end >= fix_from) observe_fix_only(ranges, n_end, norm(T(prev) - prev));
  return summarize_regularity("asymptotic_regularity_streaming", ranges, n_end);
}

WitnessReport find_metastability_witness(const Trajectory& traj, std::uint64_t k,
                                         const CounterexampleFn& f,
                                         const std::optional<BoundedNat>& mu) {
  WitnessReport rep;
  if (mu) rep.mu = mu->to_string();
  const double eps = 1.0 / static_cast<double>(k + 1);
  const std::uint64_t n_max = traj.n_max();
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const BoundedNat fn = f(BoundedNat(n));
    if (fn.is_saturated() || fn.value() > n_max) break;
    const std::uint64_t hi = std::max(fn.to_u64().value(), n);
    ++rep.scanned;
    bool ok = true;
    // Far pairs first: they are the likeliest to fail.
    for (std::uint64_t i = n; i <= hi && ok; ++i) {
      for (std::uint64_t j = hi; j > i; --j) {
        if (norm(traj.x[i] - traj.x[j]) > eps) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      rep.found = true;
      rep.n = n;
      rep.f_n = fn.to_u64().value();
      break;
    }
  }
  if (rep.found && mu && !mu->is_saturated()) rep.witness_le_mu = BigInt(rep.n) <= mu->value();
  return rep;
}

CheckResult check_strong_convergence(const Trajectory& traj, const Vector& target, double tol) {
  CheckResult res;
  res.name = "strong_convergence";
  if (traj.x.empty()) throw std::invalid_argument("check_strong_convergence: empty trajectory");
  const std::uint64_t n_max = traj.n_max();
  Json curve = Json::array();
  for (std::uint64_t n = 0;; n = n == 0 ? 1 : 2 * n) {
    if (n >= n_max) break;
    curve.push_back(Json::array({n, norm(traj.x[n] - target)}));
  }
  const double final_dist = norm(traj.x[n_max] - target);
  curve.push_back(Json::array({n_max, final_dist}));
  res.details["target"] = tikreg::to_json(target);
  res.details["tol"] = tol;
  res.details["final_distance"] = final_dist;
  res.details["distance_curve"] = std::move(curve);
  if (final_dist <= tol) {
    res.status = CheckStatus::Pass;
  } else {
    res.status = CheckStatus::Fail;
    res.violation = Json{{"n", n_max}, {"lhs", final_dist}, {"rhs", tol}};
  }
  return res;
}

Json OracleReport::to_json() const {
  Json j{{"lemma", lemma},         {"trials", trials},         {"seed", seed},
         {"checked", checked},     {"violations", violations}, {"corrupted", corrupted}};
  if (first_violation) j["first_violation"] = *first_violation;
  return j;
}

OracleReport oracle_lemma_theta(std::uint64_t trials, std::uint64_t seed, bool corrupted) {
  constexpr std::size_t H = 20000;
  constexpr std::uint64_t kTop = 5;
  OracleReport rep;
  rep.lemma = "theta";
  rep.trials = trials;
  rep.seed = seed;
  rep.corrupted = corrupted;
  Rng rng(seed);

  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t d = corrupted ? 2 + rng.below(9) : 1 + rng.below(10);
    const double dd = static_cast<double>(d);

    std::vector<double> alpha(H), r(H), gamma(H);
    const std::uint64_t family = rng.below(3);
    const double a_lo = rng.uniform(0.05, 0.5);
    const double a_c = rng.uniform(0.5, 1.0);
    for (std::size_t n = 0; n < H; ++n) {
      switch (family) {
        case 0:
          alpha[n] = rng.uniform(a_lo, 1.0);
          break;
        case 1:
          alpha[n] = rng.uniform() < 0.7 ? 0.0 : rng.uniform(0.1, 1.0);
          break;
        default:
          alpha[n] = a_c / std::sqrt(static_cast<double>(n + 1));
          break;
      }
    }
    // r_n <= min{d/2, r0/(n+1)^q}.
    const double r0 = rng.uniform(0.0, 5.0 * dd);
    const double q = rng.uniform(1.0, 2.0);
    for (std::size_t n = 0; n < H; ++n) {
      const double env = r0 / std::pow(static_cast<double>(n + 1), q);
      r[n] = std::min(dd / 2.0, env * (1.0 - std::pow(rng.uniform(), 3.0)));
    }
    // gamma_n = c * u_n / (n+1)^p plus rare spikes; total mass <= d/2 (or
    // d/20 in the corrupted runs, leaving room for the planted spike).
    const double p = rng.uniform(1.5, 3.0);
    double mass = 0.0;
    for (std::size_t n = 0; n < H; ++n) {
      gamma[n] = rng.uniform() / std::pow(static_cast<double>(n + 1), p);
      if (rng.uniform() < 1e-3) gamma[n] += rng.uniform(0.0, 0.05);
      mass += gamma[n];
    }
    const double tail_unit = std::pow(static_cast<double>(H), 1.0 - p) / (p - 1.0);
    const double budget = (corrupted ? 0.1 : rng.uniform(0.05, 1.0)) * dd / 2.0;
    const double scale = budget / (mass + tail_unit);
    for (auto& g : gamma) g *= scale;
    const double tail = scale * tail_unit;  // bound on sum_{n >= H} gamma_n

    // Exact minimal moduli over the generated data.
    std::vector<std::uint64_t> R_tab(3 * kTop + 3), G_tab(3 * kTop + 3);
    std::vector<double> suffix(H + 1);
    suffix[H] = tail;
    for (std::size_t n = H; n-- > 0;) suffix[n] = suffix[n + 1] + gamma[n];
    for (std::uint64_t j = 0; j < R_tab.size(); ++j) {
      const double bound = 1.0 / static_cast<double>(j + 1);
      std::uint64_t last = 0;
      for (std::size_t n = H; n-- > 0;) {
        if (r[n] > bound) {
          last = n + 1;
          break;
        }
      }
      R_tab[j] = last;
      // sum_{i=G+1}^{G+n} gamma_i <= bound for all n  <=>  suffix[G+1] <= bound.
      std::uint64_t g = 0;
      while (g + 1 <= H && suffix[g + 1] > bound) ++g;
      G_tab[j] = g;
    }
    const NatFunction A = divergence_rate(alpha);
    const NatFunction R = table_fn(R_tab, "R");
    const NatFunction G = corrupted ? NatFunction::zero() : table_fn(G_tab, "G");

    std::vector<std::optional<std::uint64_t>> th(kTop + 1);
    for (std::uint64_t k = 0; k <= kTop; ++k) {
      try {
        const BoundedNat v = theta(A, R, G, d, BoundedNat(k));
        if (!v.is_saturated() && v.value() < H) th[k] = v.to_u64().value();
      } catch (const std::out_of_range&) {
      }
    }
    if (corrupted) {
      if (!th[1]) continue;
      gamma[*th[1]] += 0.9 * dd / 2.0;
    }

    std::vector<double> s(H + 1);
    s[0] = rng.uniform(0.0, dd / 2.0);
    for (std::size_t n = 0; n < H; ++n) {
      s[n + 1] = (1.0 - alpha[n]) * s[n] + alpha[n] * r[n] + gamma[n];
      if (s[n + 1] > dd + kSlack) throw std::logic_error("theta oracle: generated s exceeds d");
    }
    for (std::uint64_t k = 0; k <= kTop; ++k) {
      if (!th[k]) continue;
      const double bound = 1.0 / static_cast<double>(k + 1);
      for (std::size_t n = *th[k]; n <= H; ++n) {
        ++rep.checked;
        if (s[n] > bound + kSlack) {
          if (rep.violations++ == 0) {
            rep.first_violation =
                Json{{"trial", t}, {"k", k}, {"n", n}, {"theta", *th[k]}, {"s", s[n]}, {"bound", bound}};
          }
        }
      }
    }
  }
  return rep;
}

OracleReport oracle_lemma_sigma(std::uint64_t trials, std::uint64_t seed, bool corrupted) {
  constexpr std::size_t H = 40000;
  constexpr std::uint64_t kTop = 5;
  OracleReport rep;
  rep.lemma = "sigma";
  rep.trials = trials;
  rep.seed = seed;
  rep.corrupted = corrupted;
  Rng rng(seed);

  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t d = corrupted ? 2 + rng.below(9) : 1 + rng.below(10);
    const double dd = static_cast<double>(d);
    std::vector<double> alpha(H);
    const std::uint64_t family = corrupted ? 0 : rng.below(2);
    const double a_lo = corrupted ? 0.001 : rng.uniform(0.02, 0.5);
    const double a_hi = corrupted ? 0.01 : rng.uniform(a_lo, 0.999);
    const double a_c = rng.uniform(0.3, 0.999);
    for (std::size_t i = 0; i < H; ++i) {
      alpha[i] = family == 0 ? rng.uniform(a_lo, a_hi)
                             : a_c / std::pow(static_cast<double>(i + 1), 0.3);
    }
    const NatFunction A = corrupted ? NatFunction::identity() : divergence_rate(alpha);
    const std::uint64_t n0 = rng.below(301);

    for (std::uint64_t k = 0; k <= kTop; ++k) {
      std::uint64_t sig = 0;
      try {
        const BoundedNat v = sigma(A, d, BoundedNat(k), BoundedNat(n0));
        if (v.is_saturated() || v.value() + 2000 >= H) continue;
        sig = v.to_u64().value();
      } catch (const std::out_of_range&) {
        continue;
      }
      const std::uint64_t q = sig + rng.below(2000);
      const double kk = static_cast<double>(k + 1);
      const double v_max = 1.0 / (3.0 * kk * static_cast<double>(q + 1));
      const double r_max = 1.0 / (3.0 * kk);

      double s = corrupted ? dd : rng.uniform(0.0, dd);
      for (std::uint64_t i = 0; i <= q; ++i) {
        if (i >= sig) {
          ++rep.checked;
          if (s > 1.0 / kk + kSlack && rep.violations++ == 0) {
            rep.first_violation =
                Json{{"trial", t}, {"k", k}, {"i", i}, {"sigma", sig}, {"s", s}, {"bound", 1.0 / kk}};
          }
        }
        double v, r;
        if (i < n0) {
          // Keep s near its bound d before the hypotheses start.
          const double u = corrupted ? 1.0 : 1.0 - std::pow(rng.uniform(), 3.0);
          v = (dd - s) * u;
          r = corrupted ? dd : dd * u;
        } else {
          v = std::min(v_max * (1.0 - std::pow(rng.uniform(), 3.0)), std::max(0.0, dd - s));
          r = r_max * (1.0 - std::pow(rng.uniform(), 3.0));
        }
        s = (1.0 - alpha[i]) * (s + v) + alpha[i] * r;
        if (s > dd + kSlack) throw std::logic_error("sigma oracle: generated s exceeds d");
      }
    }
  }
  return rep;
}

CheckResult check_dr_gap(const Trajectory& traj, const Schedule& s, const QuantitativeModuli& m,
                         std::uint64_t k_max) {
  CheckResult res;
  res.name = "dr_gap";
  if (!traj.has_auxiliary() || traj.y.size() != traj.n_max() || traj.z.size() != traj.n_max()) {
    throw std::invalid_argument("check_dr_gap: trajectory lacks y, z sequences");
  }
  const std::uint64_t n_max = traj.n_max();
  std::vector<double> gap(n_max);
  double worst_identity = 0.0;
  std::uint64_t identity_bad = 0;
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const Vector zy = traj.z[n] - traj.y[n];
    gap[n] = norm(zy);
    const Vector rhs = (traj.x[n + 1] - s.beta(n) * traj.x[n]) / s.lambda(n);
    const double dev = norm(zy - rhs);
    worst_identity = std::max(worst_identity, dev);
    if (dev > 1e-10 && identity_bad++ == 0) {
      res.violation = Json{{"quantity", "z_n - y_n = (x_{n+1} - beta_n x_n)/lambda_n"},
                           {"n", n},
                           {"deviation", dev}};
    }
  }
  res.details["identity_max_deviation"] = worst_identity;
  res.details["identity_violations"] = identity_bad;

  Json per_k = Json::array();
  bool any_checked = false;
  std::uint64_t gap_bad = 0;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const BoundedNat n1 = dr_gap_start(m, BoundedNat(k));
    Json e = k_entry(k);
    e["n1"] = n1.to_string();
    if (n1.is_saturated() || n1.value() >= n_max) {
      e["status"] = "unverifiable";
      per_k.push_back(std::move(e));
      continue;
    }
    const double bound = 1.0 / (3.0 * static_cast<double>(k + 1));
    double worst = 0.0;
    std::uint64_t bad = 0;
    for (std::uint64_t i = n1.to_u64().value(); i < n_max; ++i) {
      worst = std::max(worst, gap[i]);
      if (gap[i] > bound + kSlack && bad++ == 0 && !res.violation) {
        res.violation = Json{{"quantity", "|z_i - y_i| <= 1/(3(k+1))"}, {"k", k}, {"i", i},
                             {"lhs", gap[i]}, {"rhs", bound}};
      }
    }
    any_checked = true;
    gap_bad += bad;
    e["status"] = bad == 0 ? "pass" : "fail";
    e["checked"] = n_max - n1.to_u64().value();
    e["max_gap"] = worst;
    per_k.push_back(std::move(e));
  }
  res.details["per_k"] = std::move(per_k);
  res.details["final_gap"] = n_max > 0 ? gap.back() : 0.0;
  if (identity_bad + gap_bad > 0) {
    res.status = CheckStatus::Fail;
  } else {
    res.status = any_checked ? CheckStatus::Pass : CheckStatus::Unverifiable;
  }
  return res;
}

Json rate_bounds(const QuantitativeModuli& m, std::uint64_t k_max,
                 const std::optional<CounterexampleFn>& f, const BigInt& cap) {
  Json out = Json::object();
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const BoundedNat kb(BigInt(k), cap);
    Json e{{"nu1", nu1(m, kb).to_string()}, {"nu2", nu2(m, kb).to_string()}};
    if (f) e["mu"] = mu(m, kb, *f).to_string();
    out[std::to_string(k)] = std::move(e);
  }
  return out;
}

}  // namespace tikreg
