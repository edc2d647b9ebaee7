#pragma once

// Exact rational arithmetic with p-adic valuation, digit expansion and the
// integral/fractional part split  x = [x] + <x>.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "padic_cf/error.hpp"

namespace padic_cf {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator_of(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Integer denominator_of(const Rational& x) { return boost::multiprecision::denominator(x); }

/// num/den for any nonzero den. Boost 1.74 rejects negative denominators for
/// unbounded integers, so the sign is moved to the numerator first.
inline Rational ratio(Integer num, Integer den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

/// A validated prime. Values are kept below 2^31 so residues multiply in 64 bits.
class Prime {
 public:
  explicit Prime(std::int64_t value) : value_(checked(value)) {}

  std::uint32_t value() const noexcept { return value_; }
  Integer integer() const { return Integer(value_); }

  friend bool operator==(Prime, Prime) = default;
  friend auto operator<=>(Prime, Prime) = default;

  static bool is_prime(std::int64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }

 private:
  static std::uint32_t checked(std::int64_t n) {
    if (n >= (std::int64_t{1} << 31) || !is_prime(n)) throw InvalidPrime(std::to_string(n));
    return static_cast<std::uint32_t>(n);
  }

  std::uint32_t value_;
};

/// p-adic valuation; the zero element has the distinguished value Infinity.
class Valuation {
 public:
  constexpr explicit Valuation(std::int64_t v) : value_(v) {}
  static constexpr Valuation infinity() { return Valuation(); }

  constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
  std::int64_t value() const {
    if (!value_) throw InvalidInput("valuation of zero is infinite");
    return *value_;
  }

  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
  friend constexpr std::strong_ordering operator<=>(const Valuation& l, const Valuation& r) {
    if (l.is_infinite() || r.is_infinite())
      return static_cast<int>(l.is_infinite()) <=> static_cast<int>(r.is_infinite());
    return *l.value_ <=> *r.value_;
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }
  friend std::ostream& operator<<(std::ostream& os, const Valuation& v) {
    return os << v.to_string();
  }

 private:
  constexpr Valuation() = default;
  std::optional<std::int64_t> value_;
};

/// Digits e_start, e_start+1, ... of a p-adic expansion, each in {0,...,p-1}.
struct DigitVector {
  std::int64_t start_index;
  std::vector<std::uint32_t> digits;
  Prime prime;

  /// The partial sum  sum_i e_i p^i.
  Rational value() const;

  friend bool operator==(const DigitVector&, const DigitVector&) = default;
};

// ---------------------------------------------------------------------------
// integer helpers

inline Integer power(Prime p, std::int64_t k) {
  if (k < 0) throw InvalidInput("negative exponent");
  return boost::multiprecision::pow(p.integer(), static_cast<unsigned>(k));
}

/// Rational p^k for any integer k.
inline Rational power_q(Prime p, std::int64_t k) {
  return k >= 0 ? Rational(power(p, k)) : Rational(Integer(1), power(p, -k));
}

/// Least nonnegative residue of a modulo m (m > 0).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

/// Inverse of a modulo m; a must be coprime to m.
inline Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer old_r = mod_floor(a, m), r = m;
  Integer old_s = 1, s = 0;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw InvalidInput("not invertible modulo " + m.str());
  return mod_floor(old_s, m);
}

inline bool is_perfect_square(const Integer& n) {
  if (n < 0) return false;
  Integer root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

/// Valuation of a nonzero integer, with the p-free part written to `unit`.
inline std::int64_t split_valuation(const Integer& n, Prime p, Integer& unit) {
  const Integer pp = p.integer();
  unit = n;
  std::int64_t v = 0;
  for (;;) {
    Integer q, r;
    boost::multiprecision::divide_qr(unit, pp, q, r);
    if (r != 0) break;
    unit = std::move(q);
    ++v;
  }
  return v;
}

inline Valuation vp(const Integer& n, Prime p) {
  if (n == 0) return Valuation::infinity();
  Integer unit;
  return Valuation(split_valuation(n, p, unit));
}

inline Valuation vp(const Rational& x, Prime p) {
  if (x == 0) return Valuation::infinity();
  Integer unit;
  const std::int64_t num = split_valuation(numerator_of(x), p, unit);
  const std::int64_t den = split_valuation(denominator_of(x), p, unit);
  return Valuation(num - den);
}

/// Integer in [0, p^count) congruent to the unit part of nonzero x.
inline Integer unit_residue(const Rational& x, Prime p, std::int64_t count) {
  Integer num_unit, den_unit;
  split_valuation(numerator_of(x), p, num_unit);
  split_valuation(denominator_of(x), p, den_unit);
  const Integer modulus = power(p, count);
  return mod_floor(num_unit * inverse_mod(den_unit, modulus), modulus);
}

// ---------------------------------------------------------------------------
// digit expansion and the [x] + <x> split

inline DigitVector digits(const Rational& x, Prime p, std::int64_t count) {
  if (count < 1) throw InvalidInput("digit count must be positive");
  DigitVector out{0, std::vector<std::uint32_t>(static_cast<std::size_t>(count), 0), p};
  if (x == 0) return out;
  out.start_index = vp(x, p).value();
  Integer r = unit_residue(x, p, count);
  const Integer pp = p.integer();
  for (auto& e : out.digits) {
    Integer q, rem;
    boost::multiprecision::divide_qr(r, pp, q, rem);
    e = rem.convert_to<std::uint32_t>();
    r = std::move(q);
  }
  return out;
}

inline Rational DigitVector::value() const {
  Rational sum = 0;
  Rational scale = power_q(prime, start_index);
  for (auto e : digits) {
    sum += scale * e;
    scale *= prime.value();
  }
  return sum;
}

/// sum_{i < precision} e_i p^i: x truncated to absolute precision `precision`.
inline Rational truncate(const Rational& x, Prime p, std::int64_t precision) {
  if (x == 0) return 0;
  const std::int64_t v = vp(x, p).value();
  if (v >= precision) return 0;
  return Rational(unit_residue(x, p, precision - v)) * power_q(p, v);
}

inline Rational integral_part(const Rational& x, Prime p) { return truncate(x, p, 1); }

inline Rational fractional_part(const Rational& x, Prime p) { return x - integral_part(x, p); }

/// True iff the nonzero x is a square in Q_p.
inline bool unit_square_test(const Rational& x, Prime p) {
  if (x == 0) throw InvalidInput("unit_square_test is undefined at 0");
  if (vp(x, p).value() % 2 != 0) return false;
  if (p.value() == 2) return unit_residue(x, p, 3) == 1;
  const Integer pp = p.integer();
  const Integer u = unit_residue(x, p, 1);
  return boost::multiprecision::powm(u, (pp - 1) / 2, pp) == 1;
}

/// Square root of a p-adic unit square, modulo p^precision.
///
/// The branch is fixed independently of precision: for odd p the root whose
/// lowest digit lies in {1,...,(p-1)/2}; for p = 2 the root congruent to 1 mod 4.
/// Results at different precisions are therefore truncations of one another.
inline Integer sqrt_unit(const Integer& unit, Prime p, std::int64_t precision) {
  if (precision < 1) throw InvalidInput("precision must be positive");
  const Integer modulus = power(p, precision);
  if (p.value() == 2) {
    if (mod_floor(unit, 8) != 1) throw NoRootInQp(unit.str() + " is not a 2-adic square");
    Integer s = 1;
    Integer bit = 4;
    for (std::int64_t i = 2; i < precision; ++i) {
      if (mod_floor(s * s - unit, bit * 4) != 0) s += bit;
      bit *= 2;
    }
    return mod_floor(s, modulus);
  }
  const std::uint64_t pv = p.value();
  const std::uint64_t target = mod_floor(unit, p.integer()).convert_to<std::uint64_t>();
  std::uint64_t s0 = 0;
  for (std::uint64_t s = 1; s <= (pv - 1) / 2; ++s) {
    if (s * s % pv == target) {
      s0 = s;
      break;
    }
  }
  if (s0 == 0) throw NoRootInQp(unit.str() + " is not a square modulo " + std::to_string(pv));
  Integer s = s0;
  std::int64_t known = 1;
  while (known < precision) {
    known = std::min(precision, 2 * known);
    const Integer m = power(p, known);
    s = mod_floor(s - (s * s - unit) * inverse_mod(2 * s, m), m);
  }
  return mod_floor(s, modulus);
}

// ---------------------------------------------------------------------------
// formatting

inline std::string to_string(const Rational& x) {
  return numerator_of(x).str() + "/" + denominator_of(x).str();
}

inline Integer parse_integer(std::string_view text) {
  std::size_t i = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (i == text.size()) throw InvalidInput("malformed integer '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw InvalidInput("malformed integer '" + std::string(text) + "'");
  Integer n(std::string(text.substr(text[0] == '+' ? 1 : 0)));
  return n;
}

/// Accepts "n" or "n/d".
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return ratio(parse_integer(text.substr(0, slash)), den);
}

}  // namespace padic_cf
