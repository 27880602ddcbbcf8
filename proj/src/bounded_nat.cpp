#include "tikreg/bounded_nat.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <stdexcept>

namespace tikreg {

namespace {

// Rational enclosure of e: lower = P/Q from the Taylor series truncated after
// 1/terms!, upper adds the tail bound 1/(terms! * terms).
struct EBounds {
  BigInt lo_num, lo_den, hi_num, hi_den;
};

EBounds make_e_bounds(unsigned terms) {
  BigInt fact = 1;
  for (unsigned i = 2; i <= terms; ++i) fact *= i;
  BigInt num = 0;
  BigInt partial = fact;
  for (unsigned i = 0; i <= terms; ++i) {
    num += partial;
    if (i < terms) partial /= (i + 1);
  }
  return EBounds{num, fact, num * terms + 1, fact * terms};
}

// 40 terms resolve arguments below ~2^128 exactly; larger ones get 150.
const EBounds& e_bounds(std::size_t bits) {
  static const EBounds coarse = make_e_bounds(40);
  static const EBounds fine = make_e_bounds(150);
  return bits <= 128 ? coarse : fine;
}

BigInt pow_big(const BigInt& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

}  // namespace

const BigInt& BoundedNat::default_cap() {
  static const BigInt cap = BigInt(1000000000000000000ULL);
  return cap;
}

BoundedNat::BoundedNat(const BigInt& v, const BigInt& cap) : cap_(cap) {
  if (v < 0) throw std::invalid_argument("BoundedNat: negative value");
  if (cap < 0) throw std::invalid_argument("BoundedNat: negative cap");
  if (v > cap) {
    saturated_ = true;
  } else {
    value_ = v;
  }
}

BoundedNat BoundedNat::saturated(const BigInt& cap) {
  BoundedNat out(0, cap);
  out.saturated_ = true;
  return out;
}

const BigInt& BoundedNat::value() const {
  if (saturated_) throw std::logic_error("BoundedNat: value of a saturated natural");
  return value_;
}

std::optional<std::uint64_t> BoundedNat::to_u64() const {
  if (saturated_ || value_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(value_);
}

std::string BoundedNat::to_string() const {
  if (saturated_) return "SATURATED(" + cap_.str() + ")";
  return value_.str();
}

BoundedNat BoundedNat::monus(std::uint64_t s) const {
  if (saturated_) return *this;
  if (value_ <= s) return lift(0);
  return lift(value_ - s);
}

namespace {

void require_same_cap(const BoundedNat& a, const BoundedNat& b) {
  if (a.cap() != b.cap()) throw std::invalid_argument("BoundedNat: operands use different caps");
}

}  // namespace

BoundedNat operator+(const BoundedNat& a, const BoundedNat& b) {
  require_same_cap(a, b);
  if (a.saturated_ || b.saturated_) return BoundedNat::saturated(a.cap_);
  return BoundedNat(a.value_ + b.value_, a.cap_);
}

BoundedNat operator*(const BoundedNat& a, const BoundedNat& b) {
  require_same_cap(a, b);
  // 0 * Saturated is exactly 0.
  if ((!a.saturated_ && a.value_ == 0) || (!b.saturated_ && b.value_ == 0)) return a.lift(0);
  if (a.saturated_ || b.saturated_) return BoundedNat::saturated(a.cap_);
  return BoundedNat(a.value_ * b.value_, a.cap_);
}

bool operator==(const BoundedNat& a, const BoundedNat& b) {
  if (a.saturated_ || b.saturated_) return a.saturated_ == b.saturated_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const BoundedNat& a, const BoundedNat& b) {
  if (a.saturated_ && b.saturated_) return std::strong_ordering::equal;
  if (a.saturated_) return std::strong_ordering::greater;
  if (b.saturated_) return std::strong_ordering::less;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BoundedNat max(const BoundedNat& a, const BoundedNat& b) {
  require_same_cap(a, b);
  return a < b ? b : a;
}

BoundedNat square(const BoundedNat& a) { return a * a; }

BoundedNat ceil_ln_upper(const BoundedNat& x) {
  if (x.is_saturated()) return x;
  const BigInt& v = x.value();
  if (v == 0) throw std::domain_error("ceil_ln_upper: argument must be >= 1");
  if (v == 1) return x.lift(0);
  // e_lo^m >= v  <=>  lo_num^m >= v * lo_den^m. Start below the answer:
  // ln v >= (bits - 1) ln 2 > 0.69 (bits - 1).
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
  const EBounds& e = e_bounds(bits);
  unsigned m = bits > 1 ? static_cast<unsigned>(0.69 * (bits - 1)) : 0;
  while (pow_big(e.lo_num, m) < v * pow_big(e.lo_den, m)) ++m;
  while (m > 0 && pow_big(e.lo_num, m - 1) >= v * pow_big(e.lo_den, m - 1)) --m;
  return x.lift(m);
}

BoundedNat ceil_exp_upper(const BoundedNat& x) {
  if (x.is_saturated()) return x;
  const BigInt& v = x.value();
  // e^v > 2^v >= 2^bitlength(cap) > cap once v reaches the bit length of cap.
  const BigInt cap_bits = x.cap() == 0 ? BigInt(1) : BigInt(boost::multiprecision::msb(x.cap()) + 1);
  if (v >= cap_bits) return BoundedNat::saturated(x.cap());
  const unsigned m = static_cast<unsigned>(v);
  const EBounds& e = e_bounds(static_cast<std::size_t>(cap_bits));
  const BigInt num = pow_big(e.hi_num, m);
  const BigInt den = pow_big(e.hi_den, m);
  return x.lift((num + den - 1) / den);
}

BigInt parse_big_natural(const std::string& text) {
  auto all_digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  const auto exp_form = [&](std::size_t pos, std::size_t skip) -> BigInt {
    const std::string mant = text.substr(0, pos);
    const std::string ex = text.substr(pos + skip);
    if (!all_digits(mant) || !all_digits(ex) || ex.size() > 6) {
      throw std::invalid_argument("not a natural number: '" + text + "'");
    }
    const auto e = static_cast<unsigned>(std::stoul(ex));
    if (text.compare(pos, skip, "^") == 0) return pow_big(BigInt(mant), e);
    return BigInt(mant) * pow_big(BigInt(10), e);
  };
  if (all_digits(text)) return BigInt(text);
  if (auto p = text.find_first_of("eE"); p != std::string::npos) return exp_form(p, 1);
  if (auto p = text.find('^'); p != std::string::npos) return exp_form(p, 1);
  throw std::invalid_argument("not a natural number: '" + text + "'");
}

}  // namespace tikreg
