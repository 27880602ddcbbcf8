#pragma once

// Certified rates of asymptotic regularity and metastability for the
// Tikhonov-regularized Krasnoselskii-Mann iteration and its forward-backward
// and Douglas-Rachford instances. Every function evaluates its formula over
// saturating naturals: results are exact until they pass the cap of the
// argument k, then Saturated.

#include "tikreg/bounded_nat.hpp"
#include "tikreg/moduli.hpp"

#include <cstdint>
#include <functional>

namespace tikreg {

/// Counterexample functions f in the metastability statement.
using CounterexampleFn = NatFunction;

/// f applied `times` times to `start`. Stops early at a fixed point or on
/// saturation. If the exact iteration would need more than `budget` steps
/// without settling, the result is reported as Saturated.
BoundedNat iterate_fn(const NatFunction& f, const BoundedNat& times, const BoundedNat& start,
                      std::uint64_t budget = 100'000'000);

/// theta[A, R, G, d](k) = A(M - 1 + ceil(ln(3d(k+1)))) + 1 with
/// M = max{R(3k+2), G(3k+2) + 1}: past theta(k) the recurrence
/// s_{n+1} <= (1 - a_n) s_n + a_n r_n + g_n stays below 1/(k+1).
BoundedNat theta(const NatFunction& A, const NatFunction& R, const NatFunction& G,
                 std::uint64_t d, const BoundedNat& k);

/// sigma[A, d](k, n) = A(n + ceil(ln(3d(k+1)))) + 1.
BoundedNat sigma(const NatFunction& A, std::uint64_t d, const BoundedNat& k, const BoundedNat& n);

/// 24N (fc^{(R)}(0) + 1)^2 with R = 4 N^4 (k+1)^2 and
/// fc(m) = max{f(24N(m+1)^2), 24N(m+1)^2}.
BoundedNat projection_bound(std::uint64_t N, const BoundedNat& k, const CounterexampleFn& f);

/// G(k) = max{B(4N(k+1) - 1), L(10N(k+1) - 1)}.
BoundedNat rate_G(std::uint64_t N, const NatFunction& B, const NatFunction& L, const BoundedNat& k);

/// Rate for |x_{n+1} - x_n| <= 1/(k+1): theta[D, 0, G, 2N](k).
BoundedNat nu1(const QuantitativeModuli& m, const BoundedNat& k);
/// Rate for |T x_n - x_n| <= 1/(k+1): max{b(4N ell (k+1) - 1), nu1(2 ell (k+1) - 1)}.
BoundedNat nu2(const QuantitativeModuli& m, const BoundedNat& k);

/// psi(k, f) = nu2(48N (gc^{(R)}(0) + 1)^2) with g = f o nu2,
/// R = 64 N^4 (k+1)^2 and gc(m) = max{g(48N(m+1)^2), 48N(m+1)^2}.
BoundedNat psi(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f);

struct MuOptions {
  /// Replaces psi inside mu. Test hook only: mu with psi forced to 0 is a
  /// lower bound of the certified mu.
  std::function<BoundedNat(const BoundedNat& k, const CounterexampleFn& f)> psi_override;
};

/// Metastability rate of T-KM:
///   mu(k, f) = sigma(kt, max{psi(12(kt+1) - 1, ft), n1})
/// with kt = 4(k+1)^2 - 1, n1 = b(54N^2(kt+1) - 1), sigma = sigma[D, 9N^2],
/// fb(m) = f(sigma(kt, max{m, n1})), ft(m) = 3(10N+1)(kt+1)(fb(m)+1) h(fb(m)) - 1.
BoundedNat mu(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
              const MuOptions& opts = {});

/// mu with ell replaced by a * ell (T alpha-averaged with alpha >= 1/a).
BoundedNat mu1(std::uint64_t a, const QuantitativeModuli& m, const BoundedNat& k,
               const CounterexampleFn& f, const MuOptions& opts = {});
/// Forward-backward: mu1 with a = 2.
BoundedNat mu2(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts = {});

// Douglas-Rachford, with m.ell bounding the raw lambda_n in (0, 2] from below.
/// Metastability of (x_n): mu with 2 ell.
BoundedNat mu3(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts = {});
/// Metastability of (y_n): max{mu3(2k+1, g1), b(8N(k+1) - 1)}, g1(m) = f(max{m, b(8N(k+1) - 1)}).
BoundedNat mu4(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts = {});
/// Metastability of (z_n): max{mu4(3k+2, g2), dr_gap_start(k)}, g2(m) = f(max{m, dr_gap_start(k)}).
BoundedNat mu5(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts = {});

/// max{nu1(6 ell (k+1) - 1), b(12 ell N (k+1) - 1)}: from here on
/// |z_i - y_i| <= 1/(3(k+1)) along a T-DR run.
BoundedNat dr_gap_start(const QuantitativeModuli& m, const BoundedNat& k);

}  // namespace tikreg
