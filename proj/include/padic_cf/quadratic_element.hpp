#pragma once

// General quadratic and rational elements of Q_p.
//
// A quadratic element is its integer minimal polynomial aX^2 + bX + c plus a
// selector (approx, m): exactly one root alpha has v_p(alpha - approx) >= m.
// Both roots are (-b +- sqrt(D)) / 2a with sqrt(D) computed p-adically, so the
// selected root is available to any precision from exact data.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padic_cf/algorithm.hpp"
#include "padic_cf/exact_arith.hpp"
#include "padic_cf/hensel_dynamics.hpp"

namespace padic_cf {

inline constexpr std::int64_t kDefaultGuard = 8;

/// Integer polynomial aX^2 + bX + c (a = 0 encodes degree 1) with positive
/// leading coefficient and coprime coefficients.
struct MinimalPolynomial {
  Integer a;
  Integer b;
  Integer c;

  static MinimalPolynomial normalized(Integer a, Integer b, Integer c) {
    if (a == 0 && b == 0) throw InvalidInput("polynomial has degree < 1");
    Integer g = boost::multiprecision::gcd(boost::multiprecision::gcd(abs(a), abs(b)), abs(c));
    if (a < 0 || (a == 0 && b < 0)) g = -g;
    return MinimalPolynomial{a / g, b / g, c / g};
  }

  int degree() const { return a == 0 ? 1 : 2; }
  Integer discriminant() const { return b * b - 4 * a * c; }

  Rational evaluate(const Rational& x) const { return (a * x + b) * x + c; }

  /// Minimal polynomial of (root - shift).
  MinimalPolynomial shifted(const Rational& shift) const {
    const Integer n = numerator_of(shift);
    const Integer d = denominator_of(shift);
    if (a == 0) return normalized(0, b * d, b * n + c * d);
    return normalized(a * d * d, 2 * a * n * d + b * d * d, a * n * n + b * n * d + c * d * d);
  }

  /// Minimal polynomial of w / root (root nonzero).
  MinimalPolynomial reciprocal_scaled(const Integer& w) const {
    if (c == 0) throw ZeroInput();
    if (a == 0) return normalized(0, c, b * w);
    return normalized(c, b * w, a * w * w);
  }

  std::string to_string() const {
    if (a == 0) return b.str() + "X + " + c.str();
    return a.str() + "X^2 + " + b.str() + "X + " + c.str();
  }

  friend bool operator==(const MinimalPolynomial&, const MinimalPolynomial&) = default;
};

enum class CaseLabel { k1A, k1B, k2A, k2B, k3A, k3B };

inline const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::k1A: return "1A";
    case CaseLabel::k1B: return "1B";
    case CaseLabel::k2A: return "2A";
    case CaseLabel::k2B: return "2B";
    case CaseLabel::k3A: return "3A";
    case CaseLabel::k3B: return "3B";
  }
  return "?";
}

/// Valuations of the two roots of aX^2 + bX + c (a, c nonzero), read off the
/// Newton polygon. First entry is the root of larger absolute value.
inline std::pair<Rational, Rational> newton_valuations(const Integer& a, const Integer& b,
                                                       const Integer& c, Prime p) {
  if (a == 0 || c == 0) throw InvalidInput("newton_valuations needs a != 0 and c != 0");
  const std::int64_t va = vp(a, p).value();
  const std::int64_t vc = vp(c, p).value();
  if (b != 0) {
    const std::int64_t vb = vp(b, p).value();
    if (2 * vb < va + vc) return {Rational(vb - va), Rational(vc - vb)};
  }
  const Rational both(Integer(vc - va), Integer(2));
  return {both, both};
}

namespace detail {

/// v_p(alpha - alpha^sigma) = v_p(D)/2 - v_p(a), for D a nonzero square in Q_p.
inline std::int64_t root_separation(const MinimalPolynomial& poly, Prime p) {
  return vp(poly.discriminant(), p).value() / 2 - vp(poly.a, p).value();
}

/// The root (-b + branch * sqrt(D)) / 2a truncated to absolute precision M.
inline Rational root_with_branch(const MinimalPolynomial& poly, Prime p, int branch,
                                 std::int64_t precision) {
  Integer unit;
  const std::int64_t w = split_valuation(poly.discriminant(), p, unit) / 2;
  const std::int64_t v2a = vp(Integer(2 * poly.a), p).value();
  const std::int64_t sqrt_precision = std::max<std::int64_t>(1, precision - w + v2a);
  const Integer s = sqrt_unit(unit, p, sqrt_precision);
  const Rational root(-poly.b + branch * power(p, w) * s, 2 * poly.a);
  return truncate(root, p, precision);
}

inline std::int64_t max_root_valuation(const MinimalPolynomial& poly, Prime p) {
  const auto [v1, v2] = newton_valuations(poly.a, poly.b, poly.c, p);
  const Rational hi = std::max(v1, v2);
  // root valuations are integers whenever both roots lie in Q_p
  return static_cast<std::int64_t>(numerator_of(hi) / denominator_of(hi));
}

inline std::int64_t branch_valuation(const MinimalPolynomial& poly, Prime p, int branch) {
  return vp(root_with_branch(poly, p, branch, max_root_valuation(poly, p) + 1), p).value();
}

/// +1 or -1 for the unique root within p^m of approx, 0 if none or both.
inline int select_branch(const MinimalPolynomial& poly, Prime p, const Rational& approx,
                         std::int64_t m) {
  int found = 0;
  for (int branch : {+1, -1}) {
    if (vp(Rational(root_with_branch(poly, p, branch, m) - approx), p) >= Valuation(m)) {
      if (found != 0) return 0;
      found = branch;
    }
  }
  return found;
}

}  // namespace detail

class QuadraticElement {
 public:
  const MinimalPolynomial& poly() const noexcept { return poly_; }
  Prime p() const noexcept { return p_; }
  const Rational& approx() const noexcept { return approx_; }
  std::int64_t precision() const noexcept { return precision_; }
  std::int64_t guard() const noexcept { return guard_; }

  /// The selected root truncated to absolute precision M.
  Rational root_approx(std::int64_t precision) const {
    return detail::root_with_branch(poly_, p_, branch_, precision);
  }
  Rational conjugate_approx(std::int64_t precision) const {
    return detail::root_with_branch(poly_, p_, -branch_, precision);
  }

  std::int64_t valuation() const noexcept { return valuation_; }
  std::int64_t conjugate_valuation() const noexcept { return conjugate_valuation_; }
  std::int64_t separation() const { return detail::root_separation(poly_, p_); }

  /// The (b, c) state when this is the root in pZ_p of a monic X^2 + bX + c
  /// with b a unit and c in pZ.
  std::optional<HenselState> as_hensel_state() const {
    if (poly_.a != 1 || valuation_ < 1 || !in_S(poly_.b, poly_.c, p_)) return std::nullopt;
    return HenselState(poly_.b, poly_.c, p_);
  }

  /// Element for a known root branch; the selector is the root truncated at
  /// separation + guard.
  static QuadraticElement from_branch(MinimalPolynomial poly, Prime p, int branch,
                                      std::int64_t guard) {
    const std::int64_t m = std::max<std::int64_t>(1, detail::root_separation(poly, p) + guard);
    Rational approx = detail::root_with_branch(poly, p, branch, m);
    return QuadraticElement(std::move(poly), p, std::move(approx), m, branch, guard);
  }

 private:
  friend QuadraticElement make_quadratic(const Integer&, const Integer&, const Integer&, Prime,
                                         const Rational&, std::int64_t, std::int64_t);

  QuadraticElement(MinimalPolynomial poly, Prime p, Rational approx, std::int64_t m, int branch,
                   std::int64_t guard)
      : poly_(std::move(poly)),
        p_(p),
        approx_(std::move(approx)),
        precision_(m),
        branch_(branch),
        guard_(guard),
        valuation_(detail::branch_valuation(poly_, p_, branch_)),
        conjugate_valuation_(detail::branch_valuation(poly_, p_, -branch_)) {}

  MinimalPolynomial poly_;
  Prime p_;
  Rational approx_;
  std::int64_t precision_;
  int branch_;
  std::int64_t guard_;
  std::int64_t valuation_;
  std::int64_t conjugate_valuation_;
};

namespace detail {

inline MinimalPolynomial validated_quadratic(const Integer& a, const Integer& b, const Integer& c,
                                             Prime p) {
  if (a == 0) throw InvalidInput("a quadratic element needs a != 0");
  MinimalPolynomial poly = MinimalPolynomial::normalized(a, b, c);
  const Integer disc = poly.discriminant();
  if (is_perfect_square(disc))
    throw ReduciblePolynomial(poly.to_string() + " factors over Q");
  if (!unit_square_test(Rational(disc), p))
    throw NoRootInQp("discriminant " + disc.str() + " is not a square in Q_" +
                     std::to_string(p.value()));
  return poly;
}

}  // namespace detail

/// Validated quadratic element: the root of aX^2 + bX + c within p^m of approx.
inline QuadraticElement make_quadratic(const Integer& a, const Integer& b, const Integer& c,
                                       Prime p, const Rational& approx, std::int64_t m,
                                       std::int64_t guard = kDefaultGuard) {
  if (m < 1) throw InvalidInput("selector precision must be positive");
  if (guard < 1) throw InvalidInput("guard must be positive");
  MinimalPolynomial poly = detail::validated_quadratic(a, b, c, p);
  const int branch = detail::select_branch(poly, p, approx, m);
  if (branch == 0)
    throw AmbiguousSelector(to_string(approx) + " mod p^" + std::to_string(m) +
                            " does not single out one root of " + poly.to_string());
  return QuadraticElement(std::move(poly), p, approx, m, branch, guard);
}

/// Default root choice: the root of larger valuation; on a tie, the root whose
/// first differing digit is smaller.
inline QuadraticElement make_quadratic(const Integer& a, const Integer& b, const Integer& c,
                                       Prime p, std::int64_t guard = kDefaultGuard) {
  const MinimalPolynomial poly = detail::validated_quadratic(a, b, c, p);
  const std::int64_t v_plus = detail::branch_valuation(poly, p, +1);
  const std::int64_t v_minus = detail::branch_valuation(poly, p, -1);
  int branch = v_plus > v_minus ? +1 : -1;
  if (v_plus == v_minus) {
    const std::int64_t m = detail::root_separation(poly, p) + 1;
    branch = detail::root_with_branch(poly, p, +1, m) < detail::root_with_branch(poly, p, -1, m)
                 ? +1
                 : -1;
  }
  return QuadraticElement::from_branch(poly, p, branch, guard);
}

/// Digits of the selected root from index v_p(root) on.
inline DigitVector refine_digits(const QuadraticElement& x, std::int64_t count) {
  if (count < 1) throw InvalidInput("digit count must be positive");
  return digits(x.root_approx(x.valuation() + count), x.p(), count);
}

inline CaseLabel classify_case(const QuadraticElement& x) {
  const std::int64_t v = x.valuation();
  const std::int64_t vs = x.conjugate_valuation();
  const bool small = v >= 1;  // |alpha|_p <= 1/p
  if (v > vs) return small ? CaseLabel::k1A : CaseLabel::k1B;
  if (v < vs) return small ? CaseLabel::k2A : CaseLabel::k2B;
  return small ? CaseLabel::k3A : CaseLabel::k3B;
}

// ---------------------------------------------------------------------------
// rational elements

class RationalElement {
 public:
  RationalElement(Rational value, Prime p)
      : value_(std::move(value)),
        poly_(MinimalPolynomial::normalized(0, denominator_of(value_), -numerator_of(value_))),
        p_(p) {}

  const Rational& value() const noexcept { return value_; }
  const MinimalPolynomial& poly() const noexcept { return poly_; }
  Prime p() const noexcept { return p_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(const RationalElement&, const RationalElement&) = default;

 private:
  Rational value_;
  MinimalPolynomial poly_;
  Prime p_;
};

template <class Element>
struct StepResult {
  CFTerm term;
  Element y;
};

struct FractionalStep {
  Rational d0;
  QuadraticElement y;
};

namespace detail {

/// Branch of `target` matching the image of x's root under `image`, where an
/// approximation of x to absolute precision M maps to one of the target to
/// absolute precision M - loss. The working precision doubles while the
/// comparison is inconclusive.
template <class Image>
int transport_branch(const QuadraticElement& x, const MinimalPolynomial& target,
                     std::int64_t loss, Image&& image) {
  std::int64_t m = std::max<std::int64_t>(1, root_separation(target, x.p()) + 1 + x.guard());
  for (int attempt = 0; attempt < 16; ++attempt, m *= 2) {
    const int branch = select_branch(target, x.p(), image(x.root_approx(m + loss)), m);
    if (branch != 0) return branch;
  }
  throw AmbiguousSelector("could not separate the roots of " + target.to_string());
}

/// x -> t p^k / x - d with k = v_p(x), d = [t p^k / x]; emits (t, k, d).
inline StepResult<QuadraticElement> reciprocal_step(const QuadraticElement& x, const Integer& t) {
  const Prime p = x.p();
  const std::int64_t k = x.valuation();
  if (k < 1) throw InvalidInput("the maps act on pZ_p; v_p(x) = " + std::to_string(k));
  const Integer w = t * power(p, k);
  const Rational lead = Rational(w) / x.root_approx(k + 1);
  const Rational d = integral_part(lead, p);
  MinimalPolynomial target = x.poly().reciprocal_scaled(w).shifted(d);
  const int branch = transport_branch(x, target, k, [&](const Rational& root) {
    return Rational(w) / root - d;
  });
  return {CFTerm{t, k, numerator_of(d).convert_to<std::uint32_t>()},
          QuadraticElement::from_branch(std::move(target), p, branch, x.guard())};
}

inline StepResult<RationalElement> reciprocal_step(const RationalElement& x, const Integer& t) {
  if (x.is_zero()) throw ZeroInput();
  const Prime p = x.p();
  const std::int64_t k = vp(x.value(), p).value();
  if (k < 1) throw InvalidInput("the maps act on pZ_p; v_p(x) = " + std::to_string(k));
  const Rational z = Rational(t * power(p, k)) / x.value();
  const Rational d = integral_part(z, p);
  return {CFTerm{t, k, numerator_of(d).convert_to<std::uint32_t>()}, RationalElement(z - d, p)};
}

/// u(x) = c |c|_p from the constant term of the minimal polynomial.
inline Integer u_of(const MinimalPolynomial& poly, Prime p) {
  if (poly.c == 0) throw ZeroInput();
  Integer u;
  split_valuation(poly.c, p, u);
  return u;
}

}  // namespace detail

/// [x] and the element <x> = x - [x], whose polynomial comes from substituting X + [x].
inline FractionalStep fractional_step(const QuadraticElement& x) {
  Rational d0 = x.root_approx(1);
  if (d0 == 0) return {0, x};
  MinimalPolynomial target = x.poly().shifted(d0);
  const int branch = detail::transport_branch(x, target, 0, [&](const Rational& root) {
    return root - d0;
  });
  return {std::move(d0), QuadraticElement::from_branch(std::move(target), x.p(), branch, x.guard())};
}

inline StepResult<QuadraticElement> apply_T_general(const QuadraticElement& x, MapChoice which) {
  const Integer u = detail::u_of(x.poly(), x.p());
  return detail::reciprocal_step(x, which == MapChoice::T1 ? u : Integer(-u));
}

inline StepResult<RationalElement> apply_T_rational(const RationalElement& x, MapChoice which) {
  if (x.is_zero()) throw ZeroInput();
  const Integer u = detail::u_of(x.poly(), x.p());
  return detail::reciprocal_step(x, which == MapChoice::T1 ? u : Integer(-u));
}

/// One step of the t(x) = 1 map  x -> p^{v(x)} / x - d.
inline StepResult<QuadraticElement> apply_T_schneider(const QuadraticElement& x) {
  return detail::reciprocal_step(x, Integer(1));
}
inline StepResult<RationalElement> apply_T_schneider(const RationalElement& x) {
  return detail::reciprocal_step(x, Integer(1));
}

struct HenselReduction {
  std::vector<CFTerm> prefix;
  HenselState state;
};

/// Step budget for reaching a Hensel root: 64 + 4 * separation exponent.
inline std::int64_t default_reduction_cap(const QuadraticElement& x) {
  return 64 + 4 * std::max<std::int64_t>(0, x.separation());
}

/// Applies the algorithm's map until the element is a quadratic Hensel root.
inline HenselReduction reduce_to_hensel(const QuadraticElement& x, AlgorithmId algorithm,
                                        std::int64_t cap) {
  if (x.valuation() < 1) throw InvalidInput("reduce_to_hensel needs v_p(x) >= 1");
  std::vector<CFTerm> prefix;
  QuadraticElement current = x;
  for (std::int64_t steps = 0;; ++steps) {
    if (auto state = current.as_hensel_state()) return {std::move(prefix), std::move(*state)};
    if (steps >= cap) throw CapExceeded(cap, current.poly().to_string());
    const MapChoice which = choose_map(algorithm, current.poly().b, current.poly().c);
    auto step = apply_T_general(current, which);
    prefix.push_back(std::move(step.term));
    current = std::move(step.y);
  }
}

}  // namespace padic_cf
