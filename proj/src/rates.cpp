#include "tikreg/rates.hpp"

#include <utility>

namespace tikreg {

namespace {

// Values like 4N(k+1) - 1 are >= 0 whenever the product is >= 1.
BoundedNat pred(const BoundedNat& x) { return x.monus(1); }

BoundedNat succ(const BoundedNat& x) { return x + 1; }

// c * N * (m+1)^2
BoundedNat scaled_square(std::uint64_t c, std::uint64_t N, const BoundedNat& m) {
  return (c * m.lift(N)) * square(succ(m));
}

// max{f(c N (m+1)^2), c N (m+1)^2}
NatFunction check_majorant(std::uint64_t c, std::uint64_t N, CounterexampleFn f) {
  return NatFunction::custom(
      [c, N, f = std::move(f)](const BoundedNat& m) {
        const BoundedNat q = scaled_square(c, N, m);
        return max(f(q), q);
      },
      "check_majorant");
}

BoundedNat n_power4(const BoundedNat& k, std::uint64_t N) {
  const BoundedNat n = k.lift(N);
  return square(square(n));
}

}  // namespace

BoundedNat iterate_fn(const NatFunction& f, const BoundedNat& times, const BoundedNat& start,
                      std::uint64_t budget) {
  BoundedNat v = start;
  if (times.is_saturated()) {
    for (std::uint64_t i = 0; i < budget; ++i) {
      if (v.is_saturated()) return v;
      BoundedNat next = f(v);
      if (next == v) return v;
      v = std::move(next);
    }
    return BoundedNat::saturated(start.cap());
  }
  const BigInt& r = times.value();
  for (BigInt i = 0; i < r; ++i) {
    if (v.is_saturated()) return v;
    if (i >= budget) return BoundedNat::saturated(start.cap());
    BoundedNat next = f(v);
    if (next == v) return v;
    v = std::move(next);
  }
  return v;
}

BoundedNat theta(const NatFunction& A, const NatFunction& R, const NatFunction& G,
                 std::uint64_t d, const BoundedNat& k) {
  const BoundedNat j = 3 * k + 2;
  const BoundedNat M = max(R(j), succ(G(j)));
  const BoundedNat log_term = ceil_ln_upper((3 * k.lift(d)) * succ(k));
  return succ(A(pred(M) + log_term));
}

BoundedNat sigma(const NatFunction& A, std::uint64_t d, const BoundedNat& k, const BoundedNat& n) {
  const BoundedNat log_term = ceil_ln_upper((3 * k.lift(d)) * succ(k));
  return succ(A(n + log_term));
}

BoundedNat projection_bound(std::uint64_t N, const BoundedNat& k, const CounterexampleFn& f) {
  const BoundedNat R = (4 * n_power4(k, N)) * square(succ(k));
  const BoundedNat top = iterate_fn(check_majorant(24, N, f), R, k.lift(0));
  return (24 * k.lift(N)) * square(succ(top));
}

BoundedNat rate_G(std::uint64_t N, const NatFunction& B, const NatFunction& L, const BoundedNat& k) {
  const BoundedNat kk = succ(k);
  return max(B(pred((4 * k.lift(N)) * kk)), L(pred((10 * k.lift(N)) * kk)));
}

BoundedNat nu1(const QuantitativeModuli& m, const BoundedNat& k) {
  const NatFunction G = NatFunction::custom(
      [N = m.N, B = m.B, L = m.L](const BoundedNat& j) { return rate_G(N, B, L, j); }, "G");
  return theta(m.D, NatFunction::zero(), G, 2 * m.N, k);
}

BoundedNat nu2(const QuantitativeModuli& m, const BoundedNat& k) {
  const BoundedNat kk = succ(k);
  const BoundedNat from_beta = m.b(pred((4 * k.lift(m.N) * m.ell) * kk));
  const BoundedNat from_steps = nu1(m, pred((2 * k.lift(m.ell)) * kk));
  return max(from_beta, from_steps);
}

BoundedNat psi(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f) {
  const NatFunction g = NatFunction::custom(
      [m, f](const BoundedNat& x) { return f(nu2(m, x)); }, "f_after_nu2");
  const BoundedNat R = (64 * n_power4(k, m.N)) * square(succ(k));
  const BoundedNat top = iterate_fn(check_majorant(48, m.N, g), R, k.lift(0));
  return nu2(m, (48 * k.lift(m.N)) * square(succ(top)));
}

BoundedNat mu(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
              const MuOptions& opts) {
  const std::uint64_t N = m.N;
  const BoundedNat kt = pred(4 * square(succ(k)));
  const BoundedNat n1 = m.b(pred((54 * k.lift(N) * N) * succ(kt)));
  const std::uint64_t d = 9 * N * N;

  const NatFunction f_bar = NatFunction::custom(
      [D = m.D, f, kt, n1, d](const BoundedNat& x) { return f(sigma(D, d, kt, max(x, n1))); },
      "f_bar");
  const NatFunction f_tilde = NatFunction::custom(
      [h = m.h, f_bar, kt, N](const BoundedNat& x) {
        const BoundedNat fb = f_bar(x);
        return pred((((3 * x.lift(10 * N + 1)) * succ(kt)) * succ(fb)) * h(fb));
      },
      "f_tilde");

  const BoundedNat psi_arg = pred(12 * succ(kt));
  const BoundedNat n0 = opts.psi_override ? opts.psi_override(psi_arg, f_tilde) : psi(m, psi_arg, f_tilde);
  return sigma(m.D, d, kt, max(n0, n1));
}

BoundedNat mu1(std::uint64_t a, const QuantitativeModuli& m, const BoundedNat& k,
               const CounterexampleFn& f, const MuOptions& opts) {
  return mu(m.with_ell_scaled(a), k, f, opts);
}

BoundedNat mu2(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts) {
  return mu1(2, m, k, f, opts);
}

BoundedNat mu3(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts) {
  return mu(m.with_ell_scaled(2), k, f, opts);
}

BoundedNat mu4(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts) {
  const BoundedNat floor_n = m.b(pred((8 * k.lift(m.N)) * succ(k)));
  const NatFunction g1 = NatFunction::custom(
      [f, floor_n](const BoundedNat& x) { return f(max(x, floor_n)); }, "g1");
  return max(mu3(m, 2 * k + 1, g1, opts), floor_n);
}

BoundedNat dr_gap_start(const QuantitativeModuli& m, const BoundedNat& k) {
  const BoundedNat kk = succ(k);
  return max(nu1(m, pred((6 * k.lift(m.ell)) * kk)), m.b(pred((12 * k.lift(m.ell) * m.N) * kk)));
}

BoundedNat mu5(const QuantitativeModuli& m, const BoundedNat& k, const CounterexampleFn& f,
               const MuOptions& opts) {
  const BoundedNat floor_n = dr_gap_start(m, k);
  const NatFunction g2 = NatFunction::custom(
      [f, floor_n](const BoundedNat& x) { return f(max(x, floor_n)); }, "g2");
  return max(mu4(m, 3 * k + 2, g2, opts), floor_n);
}

}  // namespace tikreg
