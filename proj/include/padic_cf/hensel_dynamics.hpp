#pragma once

// Quadratic Hensel roots as integer pairs (b, c): the root in pZ_p of
// X^2 + bX + c with b a p-adic unit and c in pZ. The maps T1, T2 and the
// inverse of T1 act on these pairs in closed form.

#include <cassert>
#include <cstdint>
#include <ostream>
#include <string>

#include "padic_cf/exact_arith.hpp"

namespace padic_cf {

enum class MapChoice { T1, T2 };

inline const char* to_string(MapChoice m) { return m == MapChoice::T1 ? "T1" : "T2"; }

/// One partial quotient  t p^k / (d + ...).
struct CFTerm {
  Integer t;
  std::int64_t k;
  std::uint32_t d;

  friend bool operator==(const CFTerm&, const CFTerm&) = default;
  friend std::ostream& operator<<(std::ostream& os, const CFTerm& term) {
    return os << "(" << term.t << "," << term.k << "," << term.d << ")";
  }
};

/// The unique r in {1,...,p-1} with r = b (mod p).
inline std::uint32_t residue_r(const Integer& b, Prime p) {
  const Integer r = mod_floor(b, p.integer());
  if (r == 0) throw InvalidState("b = " + b.str() + " is divisible by " + std::to_string(p.value()));
  return r.convert_to<std::uint32_t>();
}

inline bool in_S(const Integer& b, const Integer& c, Prime p) {
  const Integer pp = p.integer();
  return b % pp != 0 && c != 0 && c % pp == 0 && !is_perfect_square(b * b - 4 * c);
}

class HenselState {
 public:
  HenselState(Integer b, Integer c, Prime p) : b_(std::move(b)), c_(std::move(c)), p_(p) {
    if (!in_S(b_, c_, p_))
      throw InvalidState("(" + b_.str() + "," + c_.str() + ") is not a quadratic Hensel root for p = " +
                         std::to_string(p_.value()));
  }

  /// Construction without validation, for images of valid states.
  static HenselState trusted(Integer b, Integer c, Prime p) {
    HenselState s(std::move(b), std::move(c), p, Trusted{});
    assert(in_S(s.b_, s.c_, s.p_));
    return s;
  }

  const Integer& b() const noexcept { return b_; }
  const Integer& c() const noexcept { return c_; }
  Prime p() const noexcept { return p_; }

  std::string to_string() const { return "(" + b_.str() + "," + c_.str() + ")"; }

  friend bool operator==(const HenselState&, const HenselState&) = default;
  friend bool operator<(const HenselState& l, const HenselState& r) {
    if (l.p_ != r.p_) return l.p_ < r.p_;
    if (l.b_ != r.b_) return l.b_ < r.b_;
    return l.c_ < r.c_;
  }
  friend std::ostream& operator<<(std::ostream& os, const HenselState& s) {
    return os << s.to_string();
  }

 private:
  struct Trusted {};
  HenselState(Integer b, Integer c, Prime p, Trusted)
      : b_(std::move(b)), c_(std::move(c)), p_(p) {}

  Integer b_;
  Integer c_;
  Prime p_;
};

enum class Quadrant { S1, S2, S3, S4 };

inline const char* to_string(Quadrant q) {
  switch (q) {
    case Quadrant::S1: return "S1";
    case Quadrant::S2: return "S2";
    case Quadrant::S3: return "S3";
    case Quadrant::S4: return "S4";
  }
  return "?";
}

struct StateClass {
  Quadrant quadrant;
  bool in_R;
  bool in_R1;
  bool in_R4;
  bool in_P1;

  friend bool operator==(const StateClass&, const StateClass&) = default;
};

inline StateClass classify_state(const HenselState& s) {
  const bool b_pos = s.b() > 0;
  const bool c_pos = s.c() > 0;
  const Quadrant q = b_pos ? (c_pos ? Quadrant::S1 : Quadrant::S4)
                           : (c_pos ? Quadrant::S2 : Quadrant::S3);
  const bool in_R = s.b() >= 1 && s.b() <= s.p().value() - 1;
  StateClass out{q, in_R, q == Quadrant::S1 && in_R, q == Quadrant::S4 && in_R, false};
  if (q == Quadrant::S1 && !in_R) {
    // [b]<b> = r (b - r) for integer b
    const std::uint32_t r = residue_r(s.b(), s.p());
    out.in_P1 = s.c() < r * (s.b() - r);
  }
  return out;
}

inline HenselState t1_state(const HenselState& s) {
  const Integer shift = s.p().value() - residue_r(s.b(), s.p());
  return HenselState::trusted(s.b() + 2 * shift, shift * s.b() + s.c() + shift * shift, s.p());
}

inline HenselState t2_state(const HenselState& s) {
  const Integer r = residue_r(s.b(), s.p());
  return HenselState::trusted(-s.b() + 2 * r, -r * s.b() + s.c() + r * r, s.p());
}

inline HenselState t1_inverse_state(const HenselState& s) {
  const Integer r = residue_r(s.b(), s.p());
  return HenselState::trusted(s.b() - 2 * r, -r * s.b() + s.c() + r * r, s.p());
}

inline HenselState apply_state(const HenselState& s, MapChoice which) {
  return which == MapChoice::T1 ? t1_state(s) : t2_state(s);
}

inline Integer discriminant(const HenselState& s) { return s.b() * s.b() - 4 * s.c(); }

/// The partial quotient emitted when `which` is applied to the root of s.
/// With u = c |c|_p and r = b mod p: T1 gives (u, v_p(c), p - r), T2 gives (-u, v_p(c), r).
inline CFTerm emit_term(const HenselState& s, MapChoice which) {
  Integer u;
  const std::int64_t k = split_valuation(s.c(), s.p(), u);
  const std::uint32_t r = residue_r(s.b(), s.p());
  if (which == MapChoice::T1) return CFTerm{u, k, s.p().value() - r};
  return CFTerm{-u, k, r};
}

/// Digits e_1..e_count of the root in pZ_p, lifted one digit at a time.
inline DigitVector hensel_root_digits(const HenselState& s, std::int64_t count) {
  if (count < 1) throw InvalidInput("digit count must be positive");
  const Prime p = s.p();
  const Integer pp = p.integer();
  const Integer b_inv = inverse_mod(s.b(), pp);
  DigitVector out{1, {}, p};
  out.digits.reserve(static_cast<std::size_t>(count));
  Integer root = 0;
  Integer scale = pp;
  for (std::int64_t i = 1; i <= count; ++i) {
    // f(A + e p^i) = f(A) + e p^i f'(A)  (mod p^{i+1}),  f'(A) = b  (mod p)
    const Integer f = root * root + s.b() * root + s.c();
    assert(f % scale == 0);
    const Integer e = mod_floor(-(f / scale) * b_inv, pp);
    out.digits.push_back(e.convert_to<std::uint32_t>());
    root += e * scale;
    scale *= pp;
  }
  return out;
}

}  // namespace padic_cf
