#pragma once

// Quantitative witnesses for the convergence conditions on the parameter
// sequences of the regularized iterations:
//
//   (Q1) beta_n >= 1/h(n)
//   (Q2) n >= b(k)  =>  |1 - beta_n| <= 1/(k+1)
//   (Q3) sum_{i=1}^{D(k)} (1 - beta_i) >= k
//   (Q4) sum_{i=B(k)+1}^{B(k)+n} |beta_i - beta_{i-1}| <= 1/(k+1)
//   (Q5) lambda_n >= 1/ell
//   (Q6) sum_{i=L(k)+1}^{L(k)+n} |lambda_i - lambda_{i-1}| <= 1/(k+1)

#include "tikreg/bounded_nat.hpp"
#include "tikreg/core_ops.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tikreg {

/// Monotone function N -> N evaluated over saturating naturals.
///
/// Every representation is monotone by construction (tables are replaced by
/// their running maximum). Applied to Saturated, any NatFunction returns
/// Saturated.
class NatFunction {
 public:
  struct Affine {
    BigInt a, b;
  };
  /// ceil(P(n) / divisor) with natural coefficients, lowest degree first.
  struct Polynomial {
    std::vector<BigInt> coeffs;
    BigInt divisor = 1;
  };
  /// ceil(e^{n + shift}), shift may be negative.
  struct ExpCeil {
    std::int64_t shift = 0;
  };
  /// values[n] for n < size, tail afterwards.
  struct Table {
    std::vector<BigInt> values;
    BigInt tail;
  };
  struct Compose {
    std::shared_ptr<const NatFunction> outer, inner;
  };
  struct Custom {
    std::function<BoundedNat(const BoundedNat&)> fn;
    std::string name;
  };
  using Repr = std::variant<Affine, Polynomial, ExpCeil, Table, Compose, Custom>;

  NatFunction() : NatFunction(zero()) {}

  static NatFunction zero() { return affine(0, 0); }
  static NatFunction identity() { return affine(1, 0); }
  static NatFunction constant(const BigInt& c) { return affine(0, c); }
  static NatFunction affine(const BigInt& a, const BigInt& b);
  static NatFunction polynomial(std::vector<BigInt> coeffs, const BigInt& divisor = 1);
  static NatFunction exp_ceil(std::int64_t shift);
  /// The table is monotonized; the tail defaults to the last (monotonized) value
  /// and is raised to it if smaller.
  static NatFunction table(std::vector<BigInt> values, std::optional<BigInt> tail = std::nullopt);
  static NatFunction compose(const NatFunction& outer, const NatFunction& inner);
  /// Wraps an arbitrary callable. The caller vouches for monotonicity and for
  /// mapping Saturated to Saturated; the wrapper enforces the latter.
  static NatFunction custom(std::function<BoundedNat(const BoundedNat&)> fn, std::string name);

  BoundedNat operator()(const BoundedNat& n) const;
  /// Evaluation under the default cap.
  BoundedNat operator()(std::uint64_t n) const { return (*this)(BoundedNat(n)); }

  /// Evaluates at n and returns the exact value; throws if the result exceeds
  /// 2^64 - 1. Intended for small moduli arguments.
  std::uint64_t at(std::uint64_t n) const;

  /// Scans [0, upto] for a descent.
  bool monotone_on(std::uint64_t upto) const;

  const Repr& repr() const { return repr_; }
  bool serializable() const;
  /// {kind, params}; throws std::logic_error for custom functions.
  Json to_json() const;
  static NatFunction from_json(const Json& j);

 private:
  explicit NatFunction(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

/// f^maj(n) = max{f(i) : i <= n} of a finite table.
std::vector<BigInt> monotonize(const std::vector<BigInt>& values);
/// f^maj of an arbitrary function, evaluated by a prefix scan. Arguments
/// beyond max_scan yield Saturated.
NatFunction monotonize(std::function<BigInt(std::uint64_t)> f, std::uint64_t max_scan = 10'000'000);

/// Real sequence n -> value used as beta or lambda.
class RealSequence {
 public:
  enum class Kind {
    Constant,     // value
    OneMinusInv,  // 1 - scale / (n + offset)
    OneMinusInvSqrt,  // 1 - scale / sqrt(n + offset)
  };

  RealSequence() : RealSequence(Kind::Constant, 1.0, 0.0) {}

  static RealSequence constant(double value);
  static RealSequence one_minus_inv(double scale, double offset);
  static RealSequence one_minus_inv_sqrt(double scale, double offset);

  double operator()(std::uint64_t n) const;
  Kind kind() const { return kind_; }
  Json to_json() const;
  static RealSequence from_json(const Json& j);

 private:
  RealSequence(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
  Kind kind_;
  double a_, b_;
};

/// Parameter sequences (beta_n), (lambda_n). For T-DR the raw lambda_n in (0, 2]
/// is stored; the halving happens when the scheme is rewritten as T-KM.
struct Schedule {
  RealSequence beta;
  RealSequence lambda;
  std::string name;

  /// Throws std::invalid_argument unless 0 < beta(n) <= 1 and
  /// 0 < lambda(n) <= lambda_max for all n <= horizon.
  void validate_range(std::uint64_t horizon, double lambda_max = 1.0) const;

  Json to_json() const;
  static Schedule from_json(const Json& j);
};

struct QuantitativeModuli {
  NatFunction h, b, D, B, L;
  std::uint64_t ell = 1;
  std::uint64_t N = 1;

  /// Checks ell, N >= 1, h >= 1 and monotonicity of h, b, D, B, L on
  /// [0, scan]. Throws std::invalid_argument.
  void check_shape(std::uint64_t scan = 1000) const;

  /// Same moduli with ell replaced by factor * ell.
  QuantitativeModuli with_ell_scaled(std::uint64_t factor) const;

  Json to_json() const;
  static QuantitativeModuli from_json(const Json& j);
};

struct ConditionViolation {
  std::uint64_t k = 0;  // unused for Q1 / Q5
  std::uint64_t n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConditionReport {
  explicit ConditionReport(std::string n = {}) : name(std::move(n)) {}

  std::string name;  // "Q1".."Q6"
  std::uint64_t instances = 0;
  std::uint64_t unchecked = 0;  // instances whose modulus exceeds the horizon
  std::vector<ConditionViolation> violations;  // first few only
  std::uint64_t violation_count = 0;
  bool passed() const { return violation_count == 0; }
};

struct ValidationReport {
  std::vector<ConditionReport> conditions;
  bool passed() const;
  Json to_json() const;
};

/// Brute-force check of (Q1)-(Q6) for every n <= horizon and k <= k_max.
/// lambda_max is the admissible upper end of lambda (1 for T-KM, 2 for T-DR).
ValidationReport validate_q(const Schedule& schedule, const QuantitativeModuli& moduli,
                            std::uint64_t horizon, std::uint64_t k_max, double lambda_max = 1.0);

struct StockInstance {
  std::string name;
  Schedule schedule;
  QuantitativeModuli moduli;
  double lambda_max = 1.0;
};

/// beta_n = lambda_n = 1 - 1/(n+2), h = 2, b = B = L = Id, D(k) = ceil(e^{k+2}), ell = 2.
StockInstance harmonic_instance(std::uint64_t N = 1);
/// beta_n = 1 - 1/(c sqrt(n+2)), lambda_n = lambda, with b = B = ceil((k+1)^2/c^2),
/// D = ceil((c k + 4)^2 / 4), L = 0, ell = ceil(1/lambda) and h = 4 for c = 1, else 2.
StockInstance sqrt_instance(std::uint64_t c = 1, double lambda = 0.5, std::uint64_t N = 1,
                            double lambda_max = 1.0);

/// The harmonic example, the sqrt example (c = 1, lambda = 1/2), and the
/// c = 100 variant with raw lambda = 1 used for T-DR runs.
std::vector<StockInstance> stock_instances();

}  // namespace tikreg
