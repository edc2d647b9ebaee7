#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "padic_cf/algorithm.hpp"
#include "padic_cf/exact_arith.hpp"
#include "padic_cf/hensel_dynamics.hpp"
#include "padic_cf/quadratic_element.hpp"

namespace padic_cf {

inline constexpr std::int64_t kDefaultExpandCap = 10000;
inline constexpr std::int64_t kDefaultSchneiderCap = 256;
inline constexpr std::int64_t kVerifyGuard = 8;

using Element = std::variant<RationalElement, QuadraticElement>;

inline Prime prime_of(const Element& x) {
  return std::visit([](const auto& e) { return e.p(); }, x);
}

struct Finite {
  friend bool operator==(const Finite&, const Finite&) = default;
};
struct EventuallyPeriodic {
  std::int64_t preperiod;
  std::int64_t period;
  friend bool operator==(const EventuallyPeriodic&, const EventuallyPeriodic&) = default;
};
struct Truncated {
  std::int64_t cap;
  friend bool operator==(const Truncated&, const Truncated&) = default;
};
using ExpansionStatus = std::variant<Finite, EventuallyPeriodic, Truncated>;

/// d0 + t1 p^k1 / (d1 + t2 p^k2 / (d2 + ...)).
///
/// An eventually periodic expansion stores the preperiod followed by one
/// period; term() unrolls it.
struct CFExpansion {
  Prime p;
  AlgorithmId algorithm;
  Rational d0;
  std::vector<CFTerm> terms;
  ExpansionStatus status;
  /// First quadratic Hensel root reached, for quadratic inputs under A/B/C.
  std::optional<HenselState> hensel_entry;

  bool is_finite() const { return std::holds_alternative<Finite>(status); }
  bool is_periodic() const { return std::holds_alternative<EventuallyPeriodic>(status); }

  /// Whether term n (1-based) exists.
  bool has_term(std::int64_t n) const {
    if (n < 1) return false;
    return is_periodic() || n <= static_cast<std::int64_t>(terms.size());
  }

  const CFTerm& term(std::int64_t n) const {
    if (!has_term(n)) throw InvalidInput("term " + std::to_string(n) + " is not available");
    if (const auto* per = std::get_if<EventuallyPeriodic>(&status)) {
      if (n > per->preperiod)
        n = per->preperiod + 1 + (n - per->preperiod - 1) % per->period;
    }
    return terms[static_cast<std::size_t>(n - 1)];
  }

  bool is_purely_periodic() const {
    const auto* per = std::get_if<EventuallyPeriodic>(&status);
    return per != nullptr && per->preperiod == 0 && d0 == 0;
  }

  friend bool operator==(const CFExpansion&, const CFExpansion&) = default;
};

// ---------------------------------------------------------------------------
// Hensel-phase orbits

struct HenselOrbit {
  /// s_0 .. s_{preperiod + period - 1}; the next image is s_preperiod.
  std::vector<HenselState> states;
  std::vector<MapChoice> maps;
  std::vector<CFTerm> terms;
  std::int64_t preperiod = 0;
  std::int64_t period = 0;
};

/// Iterates the algorithm's map on (b, c) until a state repeats. The reported
/// (preperiod, period) is minimal: the first repeated state and its first visit.
inline HenselOrbit hensel_orbit(const HenselState& start, AlgorithmId algorithm,
                                std::int64_t cap) {
  HenselOrbit orbit;
  std::map<HenselState, std::int64_t> first_visit;
  HenselState current = start;
  for (std::int64_t i = 0;; ++i) {
    const auto [it, inserted] = first_visit.emplace(current, i);
    if (!inserted) {
      orbit.preperiod = it->second;
      orbit.period = i - it->second;
      return orbit;
    }
    if (i >= cap) throw CapExceeded(cap, current.to_string());
    const MapChoice which = choose_map(algorithm, current.b(), current.c());
    orbit.terms.push_back(emit_term(current, which));
    orbit.maps.push_back(which);
    HenselState next = apply_state(current, which);
    orbit.states.push_back(std::move(current));
    current = std::move(next);
  }
}

/// Closed-form reduced sets: A -> all of S; B -> R; C -> P1 u R1 u S3 u S4.
inline bool classify_pure_periodicity(const HenselState& s, AlgorithmId algorithm) {
  const StateClass cls = classify_state(s);
  switch (algorithm) {
    case AlgorithmId::A: return true;
    case AlgorithmId::B: return cls.in_R;
    case AlgorithmId::C:
      return cls.in_P1 || cls.in_R1 || cls.quadrant == Quadrant::S3 ||
             cls.quadrant == Quadrant::S4;
    case AlgorithmId::Schneider: break;
  }
  throw InvalidAlgorithm("no reduced set is known for Schneider's algorithm");
}

// ---------------------------------------------------------------------------
// expansion drivers

inline CFExpansion schneider_expand(const RationalElement& x,
                                    std::int64_t cap = kDefaultSchneiderCap) {
  const Prime p = x.p();
  CFExpansion e{p, AlgorithmId::Schneider, integral_part(x.value(), p), {}, Finite{}, std::nullopt};
  RationalElement current(x.value() - e.d0, p);
  while (!current.is_zero()) {
    if (static_cast<std::int64_t>(e.terms.size()) >= cap) {
      e.status = Truncated{cap};
      return e;
    }
    auto step = apply_T_schneider(current);
    e.terms.push_back(std::move(step.term));
    current = std::move(step.y);
  }
  return e;
}

/// No periodicity is claimed for t(x) = 1 expansions of quadratics; the
/// result is always Truncated(cap).
inline CFExpansion schneider_expand(const QuadraticElement& x,
                                    std::int64_t cap = kDefaultSchneiderCap) {
  auto [d0, current] = fractional_step(x);
  CFExpansion e{x.p(), AlgorithmId::Schneider, std::move(d0), {}, Truncated{cap}, std::nullopt};
  for (std::int64_t i = 0; i < cap; ++i) {
    auto step = apply_T_schneider(current);
    e.terms.push_back(std::move(step.term));
    current = std::move(step.y);
  }
  return e;
}

inline CFExpansion schneider_expand(const Element& x, std::int64_t cap = kDefaultSchneiderCap) {
  return std::visit([cap](const auto& e) { return schneider_expand(e, cap); }, x);
}

inline CFExpansion expand(const RationalElement& x, AlgorithmId algorithm,
                          std::int64_t cap = kDefaultExpandCap) {
  if (algorithm == AlgorithmId::Schneider) return schneider_expand(x, cap);
  const Prime p = x.p();
  CFExpansion e{p, algorithm, integral_part(x.value(), p), {}, Finite{}, std::nullopt};
  RationalElement current(x.value() - e.d0, p);
  while (!current.is_zero()) {
    if (static_cast<std::int64_t>(e.terms.size()) >= cap)
      throw CapExceeded(cap, to_string(current.value()));
    const MapChoice which = choose_map(algorithm, current.poly().b, current.poly().c);
    auto step = apply_T_rational(current, which);
    e.terms.push_back(std::move(step.term));
    current = std::move(step.y);
  }
  return e;
}

inline CFExpansion expand(const QuadraticElement& x, AlgorithmId algorithm,
                          std::int64_t cap = kDefaultExpandCap) {
  if (algorithm == AlgorithmId::Schneider) return schneider_expand(x, cap);
  auto [d0, fractional] = fractional_step(x);
  const std::int64_t reduction_cap = std::min(cap, default_reduction_cap(fractional));
  HenselReduction reduction = reduce_to_hensel(fractional, algorithm, reduction_cap);
  const auto prefix_length = static_cast<std::int64_t>(reduction.prefix.size());
  HenselOrbit orbit = hensel_orbit(reduction.state, algorithm, cap - prefix_length);

  CFExpansion e{x.p(), algorithm, std::move(d0), std::move(reduction.prefix),
                EventuallyPeriodic{prefix_length + orbit.preperiod, orbit.period},
                std::move(reduction.state)};
  e.terms.insert(e.terms.end(), std::make_move_iterator(orbit.terms.begin()),
                 std::make_move_iterator(orbit.terms.end()));
  return e;
}

inline CFExpansion expand(const Element& x, AlgorithmId algorithm,
                          std::int64_t cap = kDefaultExpandCap) {
  return std::visit([&](const auto& e) { return expand(e, algorithm, cap); }, x);
}

// ---------------------------------------------------------------------------
// convergents and evaluation

struct Convergent {
  Integer numerator;
  Integer denominator;
  std::int64_t index;

  Rational value() const { return ratio(numerator, denominator); }
  friend bool operator==(const Convergent&, const Convergent&) = default;
};

/// Convergents 0..upto of the part after d0 (fewer if a finite expansion ends):
///   P_-1 = 1, P_0 = 0, P_n = d_n P_{n-1} + t_n p^{k_n} P_{n-2}
///   Q_-1 = 0, Q_0 = 1, Q_n = d_n Q_{n-1} + t_n p^{k_n} Q_{n-2}
inline std::vector<Convergent> convergents(const CFExpansion& e, std::int64_t upto) {
  std::vector<Convergent> out{{Integer(0), Integer(1), 0}};
  Integer p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  for (std::int64_t n = 1; n <= upto && e.has_term(n); ++n) {
    const CFTerm& term = e.term(n);
    const Integer scaled = term.t * power(e.p, term.k);
    Integer p_next = term.d * p_cur + scaled * p_prev;
    Integer q_next = term.d * q_cur + scaled * q_prev;
    p_prev = std::exchange(p_cur, std::move(p_next));
    q_prev = std::exchange(q_cur, std::move(q_next));
    out.push_back({p_cur, q_cur, n});
  }
  return out;
}

/// Bottom-up value of the first n terms, without d0.
inline Rational evaluate_prefix(const CFExpansion& e, std::int64_t n) {
  Rational tail = 0;
  for (std::int64_t i = n; i >= 1; --i) {
    const CFTerm& term = e.term(i);
    const Rational denom = Rational(term.d) + tail;
    if (denom == 0)
      throw MalformedExpansion("zero denominator at term " + std::to_string(i));
    tail = Rational(term.t * power(e.p, term.k)) / denom;
  }
  return tail;
}

inline Rational evaluate_finite(const CFExpansion& e) {
  if (!e.is_finite()) throw MalformedExpansion("evaluate_finite needs a finite expansion");
  return e.d0 + evaluate_prefix(e, static_cast<std::int64_t>(e.terms.size()));
}

// ---------------------------------------------------------------------------
// convergence verification

struct ConvergenceRow {
  std::int64_t n;
  /// Sum of k_1..k_{n+1}; infinite at the last step of a finite expansion.
  Valuation predicted;
  Valuation computed;
  /// `computed` only bounds the true valuation from below (precision ran out).
  bool computed_is_lower_bound;
  bool truncation_matches;   // bottom-up value of n terms == P_n / Q_n
  bool determinant_matches;  // P_{n-1} Q_n - P_n Q_{n-1} == prod(-t_i p^{k_i})
  bool denominator_is_unit;  // v_p(Q_n) == 0

  bool passed() const {
    return predicted == computed && !computed_is_lower_bound && truncation_matches &&
           determinant_matches && denominator_is_unit;
  }
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.passed(); });
  }
};

class VerificationFailed : public Error {
 public:
  VerificationFailed(ConvergenceReport report, const ConvergenceRow& row)
      : Error("VerificationFailed at n = " + std::to_string(row.n) + ": predicted " +
              row.predicted.to_string() + ", computed " + row.computed.to_string()),
        report_(std::move(report)),
        index_(row.n) {}

  const ConvergenceReport& report() const noexcept { return report_; }
  std::int64_t index() const noexcept { return index_; }

 private:
  ConvergenceReport report_;
  std::int64_t index_;
};

/// Returns the element truncated to absolute precision M, or its exact value.
struct RootOracle {
  std::function<Rational(std::int64_t)> approx;
  bool exact = false;
};

/// Checks |alpha - (d0 + P_n/Q_n)|_p = p^-(k_1 + ... + k_{n+1}) for n = 1..upto,
/// plus the truncation, determinant and unit-denominator identities.
/// Throws VerificationFailed, carrying the full report, on any mismatch.
inline ConvergenceReport verify_convergence(const RootOracle& root, const CFExpansion& e,
                                            std::int64_t upto,
                                            std::int64_t guard = kVerifyGuard) {
  const std::vector<Convergent> conv = convergents(e, upto);
  const auto last = static_cast<std::int64_t>(conv.size()) - 1;
  ConvergenceReport report;
  Integer det_product = 1;
  std::int64_t k_sum = 0;  // k_1 + ... + k_n
  for (std::int64_t n = 1; n <= last; ++n) {
    const CFTerm& term = e.term(n);
    det_product *= -term.t * power(e.p, term.k);
    k_sum += term.k;
    const Convergent& cur = conv[static_cast<std::size_t>(n)];
    const Convergent& prev = conv[static_cast<std::size_t>(n - 1)];

    const bool terminal = !e.has_term(n + 1);
    const Valuation predicted = terminal ? Valuation::infinity() : Valuation(k_sum + e.term(n + 1).k);
    const std::int64_t working = (terminal ? k_sum + 1 : predicted.value()) + guard;
    const Rational diff = root.approx(working) - e.d0 - cur.value();
    Valuation computed = vp(diff, e.p);
    bool lower_bound = false;
    if (!root.exact && computed >= Valuation(working)) {
      computed = Valuation(working);
      lower_bound = true;
    }
    const Integer det_lhs = prev.numerator * cur.denominator - cur.numerator * prev.denominator;
    report.rows.push_back({n, predicted, computed, lower_bound,
                           evaluate_prefix(e, n) == cur.value(), det_lhs == det_product,
                           vp(cur.denominator, e.p) == Valuation(0)});
  }
  for (const auto& row : report.rows)
    if (!row.passed()) {
      const ConvergenceRow failing = row;
      throw VerificationFailed(std::move(report), failing);
    }
  return report;
}

inline RootOracle root_oracle(const Element& x) {
  if (const auto* r = std::get_if<RationalElement>(&x)) {
    Rational value = r->value();
    return {[value](std::int64_t) { return value; }, true};
  }
  QuadraticElement q = std::get<QuadraticElement>(x);
  return {[q](std::int64_t m) { return q.root_approx(m); }, false};
}

inline ConvergenceReport verify_convergence(const Element& x, const CFExpansion& e,
                                            std::int64_t upto,
                                            std::int64_t guard = kVerifyGuard) {
  return verify_convergence(root_oracle(x), e, upto, guard);
}

}  // namespace padic_cf
