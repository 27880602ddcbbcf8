#include "tikreg/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tikreg {

namespace {

BigInt big_from_json(const Json& j, const char* field) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw std::invalid_argument(std::string(field) + ": expected a natural number");
    return BigInt(v);
  }
  if (j.is_string()) return parse_big_natural(j.get<std::string>());
  throw std::invalid_argument(std::string(field) + ": expected a natural number");
}

Json big_to_json(const BigInt& v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return Json(static_cast<std::uint64_t>(v));
  return Json(v.str());
}

BigInt ceil_div(const BigInt& a, const BigInt& q) { return (a + q - 1) / q; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// NatFunction

NatFunction NatFunction::affine(const BigInt& a, const BigInt& b) {
  if (a < 0 || b < 0) throw std::invalid_argument("affine: coefficients must be natural");
  return NatFunction(Affine{a, b});
}

NatFunction NatFunction::polynomial(std::vector<BigInt> coeffs, const BigInt& divisor) {
  if (divisor < 1) throw std::invalid_argument("polynomial: divisor must be >= 1");
  for (const auto& c : coeffs) {
    if (c < 0) throw std::invalid_argument("polynomial: coefficients must be natural");
  }
  if (coeffs.empty()) coeffs.push_back(0);
  return NatFunction(Polynomial{std::move(coeffs), divisor});
}

NatFunction NatFunction::exp_ceil(std::int64_t shift) { return NatFunction(ExpCeil{shift}); }

NatFunction NatFunction::table(std::vector<BigInt> values, std::optional<BigInt> tail) {
  for (const auto& v : values) {
    if (v < 0) throw std::invalid_argument("table: values must be natural");
  }
  values = monotonize(values);
  BigInt last = values.empty() ? BigInt(0) : values.back();
  BigInt t = tail.value_or(last);
  if (t < last) t = last;
  return NatFunction(Table{std::move(values), std::move(t)});
}

NatFunction NatFunction::compose(const NatFunction& outer, const NatFunction& inner) {
  return NatFunction(Compose{std::make_shared<const NatFunction>(outer),
                             std::make_shared<const NatFunction>(inner)});
}

NatFunction NatFunction::custom(std::function<BoundedNat(const BoundedNat&)> fn, std::string name) {
  return NatFunction(Custom{std::move(fn), std::move(name)});
}

BoundedNat NatFunction::operator()(const BoundedNat& n) const {
  if (n.is_saturated()) return n;
  const BigInt& x = n.value();
  return std::visit(
      Overloaded{
          [&](const Affine& f) { return BoundedNat(f.a * x + f.b, n.cap()); },
          [&](const Polynomial& f) {
            BigInt acc = 0;
            for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
              acc = acc * x + *it;
              // Once the partial value exceeds cap * divisor and x >= 1 it can
              // only grow (natural coefficients).
              if (x >= 1 && acc > n.cap() * f.divisor) return BoundedNat::saturated(n.cap());
            }
            return BoundedNat(ceil_div(acc, f.divisor), n.cap());
          },
          [&](const ExpCeil& f) {
            const BigInt e = x + f.shift;
            if (e <= 0) return n.lift(1);
            return ceil_exp_upper(BoundedNat(e, n.cap()));
          },
          [&](const Table& f) {
            if (x < f.values.size()) return BoundedNat(f.values[static_cast<std::size_t>(x)], n.cap());
            return BoundedNat(f.tail, n.cap());
          },
          [&](const Compose& f) { return (*f.outer)((*f.inner)(n)); },
          [&](const Custom& f) {
            BoundedNat out = f.fn(n);
            if (out.cap() != n.cap()) {
              throw std::logic_error("custom NatFunction '" + f.name + "' changed the cap");
            }
            return out;
          },
      },
      repr_);
}

std::uint64_t NatFunction::at(std::uint64_t n) const {
  static const BigInt cap = BigInt(std::numeric_limits<std::uint64_t>::max());
  const BoundedNat out = (*this)(BoundedNat(BigInt(n), cap));
  if (out.is_saturated()) throw std::overflow_error("NatFunction::at: value exceeds 64 bits");
  return static_cast<std::uint64_t>(out.value());
}

bool NatFunction::monotone_on(std::uint64_t upto) const {
  static const BigInt cap = BigInt(1) << 256;
  BoundedNat prev = (*this)(BoundedNat(BigInt(0), cap));
  for (std::uint64_t n = 1; n <= upto; ++n) {
    BoundedNat cur = (*this)(BoundedNat(BigInt(n), cap));
    if (cur < prev) return false;
    prev = std::move(cur);
  }
  return true;
}

bool NatFunction::serializable() const {
  return std::visit(Overloaded{[](const Custom&) { return false; },
                               [](const Compose& f) {
                                 return f.outer->serializable() && f.inner->serializable();
                               },
                               [](const auto&) { return true; }},
                    repr_);
}

Json NatFunction::to_json() const {
  return std::visit(
      Overloaded{
          [](const Affine& f) -> Json {
            if (f.a == 1 && f.b == 0) return Json{{"kind", "identity"}};
            if (f.a == 0 && f.b == 0) return Json{{"kind", "zero"}};
            if (f.a == 0) return Json{{"kind", "constant"}, {"value", big_to_json(f.b)}};
            return Json{{"kind", "affine"}, {"a", big_to_json(f.a)}, {"b", big_to_json(f.b)}};
          },
          [](const Polynomial& f) -> Json {
            Json c = Json::array();
            for (const auto& v : f.coeffs) c.push_back(big_to_json(v));
            return Json{{"kind", "polynomial"}, {"coeffs", c}, {"divisor", big_to_json(f.divisor)}};
          },
          [](const ExpCeil& f) -> Json { return Json{{"kind", "exp_ceil"}, {"shift", f.shift}}; },
          [](const Table& f) -> Json {
            Json v = Json::array();
            for (const auto& x : f.values) v.push_back(big_to_json(x));
            return Json{{"kind", "table"}, {"values", v}, {"tail", big_to_json(f.tail)}};
          },
          [](const Compose& f) -> Json {
            return Json{{"kind", "compose"}, {"outer", f.outer->to_json()}, {"inner", f.inner->to_json()}};
          },
          [](const Custom& f) -> Json {
            throw std::logic_error("NatFunction '" + f.name + "' is not serializable");
          },
      },
      repr_);
}

NatFunction NatFunction::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("function: expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto field = [&](const char* name) -> const Json& {
    if (!j.contains(name)) throw std::invalid_argument("function '" + kind + "': missing '" + name + "'");
    return j[name];
  };
  if (kind == "identity") return identity();
  if (kind == "zero") return zero();
  if (kind == "constant") return constant(big_from_json(field("value"), "value"));
  if (kind == "affine") return affine(big_from_json(field("a"), "a"), big_from_json(field("b"), "b"));
  if (kind == "polynomial") {
    std::vector<BigInt> coeffs;
    for (const auto& c : field("coeffs")) coeffs.push_back(big_from_json(c, "coeffs"));
    const BigInt div = j.contains("divisor") ? big_from_json(j["divisor"], "divisor") : BigInt(1);
    return polynomial(std::move(coeffs), div);
  }
  if (kind == "exp_ceil") {
    const Json& s = field("shift");
    if (!s.is_number_integer()) throw std::invalid_argument("exp_ceil: shift must be an integer");
    return exp_ceil(s.get<std::int64_t>());
  }
  if (kind == "table") {
    std::vector<BigInt> values;
    for (const auto& v : field("values")) values.push_back(big_from_json(v, "values"));
    std::optional<BigInt> tail;
    if (j.contains("tail")) tail = big_from_json(j["tail"], "tail");
    return table(std::move(values), tail);
  }
  if (kind == "compose") return compose(from_json(field("outer")), from_json(field("inner")));
  throw std::invalid_argument("unknown function kind '" + kind + "'");
}

std::vector<BigInt> monotonize(const std::vector<BigInt>& values) {
  std::vector<BigInt> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(out.empty() ? v : std::max(out.back(), v));
  return out;
}

NatFunction monotonize(std::function<BigInt(std::uint64_t)> f, std::uint64_t max_scan) {
  return NatFunction::custom(
      [f = std::move(f), max_scan](const BoundedNat& n) {
        const auto idx = n.to_u64();
        if (!idx || *idx > max_scan) return BoundedNat::saturated(n.cap());
        BigInt best = f(0);
        for (std::uint64_t i = 1; i <= *idx; ++i) best = std::max(best, f(i));
        return BoundedNat(best, n.cap());
      },
      "majorant");
}

// ---------------------------------------------------------------------------
// RealSequence / Schedule

RealSequence RealSequence::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant sequence: non-finite value");
  return RealSequence(Kind::Constant, value, 0.0);
}

RealSequence RealSequence::one_minus_inv(double scale, double offset) {
  if (!(scale >= 0.0) || !(offset > 0.0)) {
    throw std::invalid_argument("one_minus_inv: need scale >= 0 and offset > 0");
  }
  return RealSequence(Kind::OneMinusInv, scale, offset);
}

RealSequence RealSequence::one_minus_inv_sqrt(double scale, double offset) {
  if (!(scale >= 0.0) || !(offset > 0.0)) {
    throw std::invalid_argument("one_minus_inv_sqrt: need scale >= 0 and offset > 0");
  }
  return RealSequence(Kind::OneMinusInvSqrt, scale, offset);
}

double RealSequence::operator()(std::uint64_t n) const {
  const double x = static_cast<double>(n) + b_;
  switch (kind_) {
    case Kind::Constant:
      return a_;
    case Kind::OneMinusInv:
      return 1.0 - a_ / x;
    case Kind::OneMinusInvSqrt:
      return 1.0 - a_ / std::sqrt(x);
  }
  return a_;
}

Json RealSequence::to_json() const {
  switch (kind_) {
    case Kind::Constant:
      return Json{{"kind", "constant"}, {"value", a_}};
    case Kind::OneMinusInv:
      return Json{{"kind", "one_minus_inv"}, {"scale", a_}, {"offset", b_}};
    case Kind::OneMinusInvSqrt:
      return Json{{"kind", "one_minus_inv_sqrt"}, {"scale", a_}, {"offset", b_}};
  }
  return {};
}

RealSequence RealSequence::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("sequence: expected an object with 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto num = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_number()) {
      throw std::invalid_argument("sequence '" + kind + "': missing numeric '" + name + "'");
    }
    return j[name].get<double>();
  };
  if (kind == "constant") return constant(num("value"));
  if (kind == "one_minus_inv") return one_minus_inv(num("scale"), num("offset"));
  if (kind == "one_minus_inv_sqrt") return one_minus_inv_sqrt(num("scale"), num("offset"));
  throw std::invalid_argument("unknown sequence kind '" + kind + "'");
}

void Schedule::validate_range(std::uint64_t horizon, double lambda_max) const {
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    const double b = beta(n);
    const double l = lambda(n);
    if (!(b > 0.0 && b <= 1.0)) {
      throw std::invalid_argument("schedule: beta(" + std::to_string(n) + ") outside (0,1]");
    }
    if (!(l > 0.0 && l <= lambda_max)) {
      throw std::invalid_argument("schedule: lambda(" + std::to_string(n) + ") outside (0," +
                                  std::to_string(lambda_max) + "]");
    }
  }
}

Json Schedule::to_json() const {
  return Json{{"name", name}, {"beta", beta.to_json()}, {"lambda", lambda.to_json()}};
}

Schedule Schedule::from_json(const Json& j) {
  if (!j.contains("beta") || !j.contains("lambda")) {
    throw std::invalid_argument("schedule: needs 'beta' and 'lambda'");
  }
  return Schedule{RealSequence::from_json(j["beta"]), RealSequence::from_json(j["lambda"]),
                  j.value("name", std::string{})};
}

// ---------------------------------------------------------------------------
// QuantitativeModuli

void QuantitativeModuli::check_shape(std::uint64_t scan) const {
  if (ell < 1) throw std::invalid_argument("moduli: ell must be >= 1");
  if (N < 1) throw std::invalid_argument("moduli: N must be >= 1");
  const std::pair<const char*, const NatFunction*> fns[] = {
      {"h", &h}, {"b", &b}, {"D", &D}, {"B", &B}, {"L", &L}};
  for (const auto& [name, f] : fns) {
    if (!f->monotone_on(scan)) {
      throw std::invalid_argument(std::string("moduli: ") + name + " is not monotone");
    }
  }
  if (h(0) < BoundedNat(1)) throw std::invalid_argument("moduli: h must take values >= 1");
}

QuantitativeModuli QuantitativeModuli::with_ell_scaled(std::uint64_t factor) const {
  QuantitativeModuli out = *this;
  out.ell = ell * factor;
  return out;
}

Json QuantitativeModuli::to_json() const {
  return Json{{"h", h.to_json()}, {"b", b.to_json()}, {"D", D.to_json()}, {"B", B.to_json()},
              {"L", L.to_json()}, {"ell", ell},       {"N", N}};
}

QuantitativeModuli QuantitativeModuli::from_json(const Json& j) {
  for (const char* key : {"h", "b", "D", "B", "L", "ell", "N"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("moduli: missing '") + key + "'");
  }
  QuantitativeModuli m;
  m.h = NatFunction::from_json(j["h"]);
  m.b = NatFunction::from_json(j["b"]);
  m.D = NatFunction::from_json(j["D"]);
  m.B = NatFunction::from_json(j["B"]);
  m.L = NatFunction::from_json(j["L"]);
  if (!j["ell"].is_number_unsigned() || !j["N"].is_number_unsigned()) {
    throw std::invalid_argument("moduli: ell and N must be positive integers");
  }
  m.ell = j["ell"].get<std::uint64_t>();
  m.N = j["N"].get<std::uint64_t>();
  m.check_shape();
  return m;
}

// ---------------------------------------------------------------------------
// validate_q

namespace {

constexpr std::size_t kMaxListed = 10;

void record(ConditionReport& rep, ConditionViolation v) {
  ++rep.violation_count;
  if (rep.violations.size() < kMaxListed) rep.violations.push_back(v);
}

std::optional<std::uint64_t> small_value(const NatFunction& f, std::uint64_t k) {
  try {
    return f.at(k);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

// Cauchy-rate condition for sum |s_i - s_{i-1}| starting after modulus(k).
ConditionReport check_cauchy(const char* name, const std::vector<double>& s, const NatFunction& modulus,
                             std::uint64_t horizon, std::uint64_t k_max) {
  ConditionReport rep{name};
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const auto start = small_value(modulus, k);
    if (!start || *start >= horizon) {
      ++rep.unchecked;
      continue;
    }
    const double bound = 1.0 / static_cast<double>(k + 1);
    double sum = 0.0;
    for (std::uint64_t i = *start + 1; i <= horizon; ++i) {
      sum += std::abs(s[i] - s[i - 1]);
      ++rep.instances;
      if (sum > bound + kSlack) record(rep, {k, i - *start, sum, bound});
    }
  }
  return rep;
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed(); });
}

Json ValidationReport::to_json() const {
  Json out = Json::array();
  for (const auto& c : conditions) {
    Json viol = Json::array();
    for (const auto& v : c.violations) {
      viol.push_back(Json{{"k", v.k}, {"n", v.n}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    }
    out.push_back(Json{{"condition", c.name},
                       {"status", c.passed() ? "pass" : "fail"},
                       {"instances", c.instances},
                       {"unchecked", c.unchecked},
                       {"violation_count", c.violation_count},
                       {"violations", viol}});
  }
  return out;
}

ValidationReport validate_q(const Schedule& schedule, const QuantitativeModuli& moduli,
                            std::uint64_t horizon, std::uint64_t k_max, double lambda_max) {
  if (horizon < 1) throw std::invalid_argument("validate_q: horizon must be >= 1");
  std::vector<double> beta(horizon + 1), lambda(horizon + 1);
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    beta[n] = schedule.beta(n);
    lambda[n] = schedule.lambda(n);
  }

  ValidationReport report;

  ConditionReport range{"range"};
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    ++range.instances;
    if (!(beta[n] > 0.0 && beta[n] <= 1.0)) record(range, {0, n, beta[n], 1.0});
    if (!(lambda[n] > 0.0 && lambda[n] <= lambda_max)) record(range, {1, n, lambda[n], lambda_max});
  }
  report.conditions.push_back(std::move(range));

  ConditionReport q1{"Q1"};
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    ++q1.instances;
    const auto hn = small_value(moduli.h, n);
    const double rhs = hn ? 1.0 / static_cast<double>(*hn) : 0.0;
    if (!hn || *hn == 0 || beta[n] + kSlack < rhs) record(q1, {0, n, beta[n], rhs});
  }
  report.conditions.push_back(std::move(q1));

  ConditionReport q2{"Q2"};
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    const auto start = small_value(moduli.b, k);
    if (!start || *start > horizon) {
      ++q2.unchecked;
      continue;
    }
    const double bound = 1.0 / static_cast<double>(k + 1);
    for (std::uint64_t n = *start; n <= horizon; ++n) {
      ++q2.instances;
      const double lhs = std::abs(1.0 - beta[n]);
      if (lhs > bound + kSlack) record(q2, {k, n, lhs, bound});
    }
  }
  report.conditions.push_back(std::move(q2));

  ConditionReport q3{"Q3"};
  {
    std::vector<long double> prefix(horizon + 1, 0.0L);  // prefix[m] = sum_{i=1}^m (1 - beta_i)
    for (std::uint64_t i = 1; i <= horizon; ++i) prefix[i] = prefix[i - 1] + (1.0L - beta[i]);
    for (std::uint64_t k = 0; k <= k_max; ++k) {
      const auto d = small_value(moduli.D, k);
      if (!d || *d > horizon) {
        ++q3.unchecked;
        continue;
      }
      ++q3.instances;
      const double lhs = static_cast<double>(prefix[*d]);
      if (lhs + kSlack < static_cast<double>(k)) record(q3, {k, *d, lhs, static_cast<double>(k)});
    }
  }
  report.conditions.push_back(std::move(q3));

  report.conditions.push_back(check_cauchy("Q4", beta, moduli.B, horizon, k_max));

  ConditionReport q5{"Q5"};
  const double lam_min = 1.0 / static_cast<double>(moduli.ell);
  for (std::uint64_t n = 0; n <= horizon; ++n) {
    ++q5.instances;
    if (lambda[n] + kSlack < lam_min) record(q5, {0, n, lambda[n], lam_min});
  }
  report.conditions.push_back(std::move(q5));

  report.conditions.push_back(check_cauchy("Q6", lambda, moduli.L, horizon, k_max));
  return report;
}

// ---------------------------------------------------------------------------
// Stock instances

StockInstance harmonic_instance(std::uint64_t N) {
  StockInstance s;
  s.name = "harmonic";
  s.schedule = Schedule{RealSequence::one_minus_inv(1.0, 2.0), RealSequence::one_minus_inv(1.0, 2.0),
                        "harmonic"};
  s.moduli.h = NatFunction::constant(2);
  s.moduli.b = NatFunction::identity();
  s.moduli.B = NatFunction::identity();
  s.moduli.L = NatFunction::identity();
  s.moduli.D = NatFunction::exp_ceil(2);
  s.moduli.ell = 2;
  s.moduli.N = N;
  return s;
}

StockInstance sqrt_instance(std::uint64_t c, double lambda, std::uint64_t N, double lambda_max) {
  if (c < 1) throw std::invalid_argument("sqrt_instance: c must be >= 1");
  if (!(lambda > 0.0 && lambda <= lambda_max)) {
    throw std::invalid_argument("sqrt_instance: lambda out of range");
  }
  StockInstance s;
  s.name = c == 1 ? "sqrt" : "sqrt" + std::to_string(c);
  s.schedule = Schedule{RealSequence::one_minus_inv_sqrt(1.0 / static_cast<double>(c), 2.0),
                        RealSequence::constant(lambda), s.name};
  const BigInt cc = BigInt(c);
  s.moduli.h = NatFunction::constant(c == 1 ? 4 : 2);
  s.moduli.b = NatFunction::polynomial({1, 2, 1}, cc * cc);
  s.moduli.B = s.moduli.b;
  s.moduli.D = NatFunction::polynomial({16, 8 * cc, cc * cc}, 4);
  s.moduli.L = NatFunction::zero();
  s.moduli.ell = static_cast<std::uint64_t>(std::ceil(1.0 / lambda - 1e-12));
  s.moduli.N = N;
  s.lambda_max = lambda_max;
  return s;
}

std::vector<StockInstance> stock_instances() {
  StockInstance dr = sqrt_instance(100, 1.0, 1, 2.0);
  dr.name = "sqrt100-dr";
  dr.schedule.name = dr.name;
  return {harmonic_instance(), sqrt_instance(), std::move(dr)};
}

}  // namespace tikreg
