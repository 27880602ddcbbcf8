#pragma once

// Saturating arbitrary-size naturals.
//
// A BoundedNat is either an exact natural not exceeding its cap, or the
// marker Saturated, which stands for "some value above the cap". Saturated is
// the top element: every operation is monotone and absorbs it, so a formula
// built from these operations is an upper bound whenever it saturates.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace tikreg {

using BigInt = boost::multiprecision::cpp_int;

class BoundedNat {
 public:
  /// 10^18.
  static const BigInt& default_cap();

  BoundedNat() : BoundedNat(0) {}
  BoundedNat(std::uint64_t v) : BoundedNat(BigInt(v), default_cap()) {}  // NOLINT(implicit)
  BoundedNat(const BigInt& v, const BigInt& cap);

  static BoundedNat saturated(const BigInt& cap = default_cap());

  bool is_saturated() const { return saturated_; }
  /// Throws std::logic_error when saturated.
  const BigInt& value() const;
  const BigInt& cap() const { return cap_; }

  /// Constant with the same cap as *this.
  BoundedNat lift(const BigInt& v) const { return BoundedNat(v, cap_); }
  std::optional<std::uint64_t> to_u64() const;

  /// Decimal value, or "SATURATED(<cap>)".
  std::string to_string() const;

  /// Truncated subtraction of a constant: max(v - s, 0); Saturated stays Saturated.
  BoundedNat monus(std::uint64_t s) const;

  friend BoundedNat operator+(const BoundedNat& a, const BoundedNat& b);
  friend BoundedNat operator*(const BoundedNat& a, const BoundedNat& b);
  friend BoundedNat operator+(const BoundedNat& a, std::uint64_t b) { return a + a.lift(b); }
  friend BoundedNat operator*(std::uint64_t a, const BoundedNat& b) { return b.lift(a) * b; }
  friend BoundedNat operator*(const BoundedNat& a, std::uint64_t b) { return a * a.lift(b); }

  friend bool operator==(const BoundedNat& a, const BoundedNat& b);
  friend std::strong_ordering operator<=>(const BoundedNat& a, const BoundedNat& b);

 private:
  BigInt value_;
  BigInt cap_;
  bool saturated_ = false;
};

BoundedNat max(const BoundedNat& a, const BoundedNat& b);
BoundedNat square(const BoundedNat& a);

/// Smallest m with e^m >= x. Uses a certified lower bound on e, so any
/// precision ambiguity resolves to the larger m. Throws std::domain_error for
/// x = 0.
BoundedNat ceil_ln_upper(const BoundedNat& x);

/// ceil(e^x), rounded upward, saturating.
BoundedNat ceil_exp_upper(const BoundedNat& x);

/// Parses a decimal natural, also accepting "1eK" and "10^K".
BigInt parse_big_natural(const std::string& text);

}  // namespace tikreg
