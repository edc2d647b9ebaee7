#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace padic_cf;

namespace {

const Prime P5(5);

Rational q(std::int64_t n, std::int64_t d = 1) { return ratio(n, d); }

Element hensel(std::int64_t b, std::int64_t c, const Prime& p = P5) {
  return make_quadratic(1, b, c, p);
}

std::vector<CFTerm> unrolled(const CFExpansion& e, std::int64_t n) {
  std::vector<CFTerm> out;
  for (std::int64_t i = 1; i <= n && e.has_term(i); ++i) out.push_back(e.term(i));
  return out;
}

TEST(ChooseMap, Examples) {
  EXPECT_EQ(choose_map(AlgorithmId::A, -7, -25), MapChoice::T2);
  EXPECT_EQ(choose_map(AlgorithmId::B, -7, -25), MapChoice::T1);
  EXPECT_EQ(choose_map(AlgorithmId::C, 3, -5), MapChoice::T1);
  EXPECT_EQ(choose_map(AlgorithmId::C, 3, 5), MapChoice::T2);
  EXPECT_EQ(choose_map(AlgorithmId::B, 0, 5), MapChoice::T2);
  EXPECT_THROW(choose_map(AlgorithmId::Schneider, 1, 5), InvalidAlgorithm);
}

TEST(ParseAlgorithm, AcceptsNamesOnly) {
  EXPECT_EQ(parse_algorithm("A"), AlgorithmId::A);
  EXPECT_EQ(parse_algorithm("c"), AlgorithmId::C);
  EXPECT_EQ(parse_algorithm("schneider"), AlgorithmId::Schneider);
  EXPECT_THROW(parse_algorithm("D"), InvalidAlgorithm);
}

TEST(Expand, RationalExamples) {
  const CFExpansion a = expand(RationalElement(q(5, 3), P5), AlgorithmId::A);
  EXPECT_EQ(a.d0, 0);
  EXPECT_EQ(a.terms, (std::vector<CFTerm>{{1, 1, 3}}));
  EXPECT_TRUE(a.is_finite());
  const CFExpansion c = expand(RationalElement(q(5, 3), P5), AlgorithmId::C);
  EXPECT_EQ(c.d0, 0);
  EXPECT_EQ(c.terms, (std::vector<CFTerm>{{-1, 1, 2}, {-1, 1, 1}}));
  EXPECT_TRUE(c.is_finite());
}

TEST(Expand, RationalWithIntegralPart) {
  const CFExpansion e = expand(RationalElement(q(2), P5), AlgorithmId::A);
  EXPECT_EQ(e.d0, 2);
  EXPECT_TRUE(e.terms.empty());
  EXPECT_TRUE(e.is_finite());
  EXPECT_EQ(evaluate_finite(e), 2);
}

TEST(Expand, HenselRootFixedPoint) {
  const CFExpansion e = expand(hensel(3, 5), AlgorithmId::A);
  EXPECT_EQ(e.d0, 0);
  EXPECT_EQ(e.status, ExpansionStatus(EventuallyPeriodic{0, 1}));
  EXPECT_EQ(e.terms, (std::vector<CFTerm>{{-1, 1, 3}}));
  EXPECT_TRUE(e.is_purely_periodic());
  EXPECT_EQ(e.term(7), (CFTerm{-1, 1, 3}));
}

TEST(Expand, AlgorithmBPreperiodThree) {
  const CFExpansion e = expand(hensel(13, 5), AlgorithmId::B);
  EXPECT_EQ(e.status, ExpansionStatus(EventuallyPeriodic{3, 1}));
  const HenselOrbit o = hensel_orbit(HenselState(13, 5, P5), AlgorithmId::B, 100);
  const std::vector<HenselState> expected{
      {13, 5, P5}, {-7, -25, P5}, {-3, -35, P5}, {3, -35, P5}};
  EXPECT_EQ(o.states, expected);
  for (std::size_t i = 0; i < o.states.size(); ++i)
    EXPECT_EQ(e.terms[i], emit_term(o.states[i], o.maps[i]));
}

TEST(Expand, AlgorithmCThreeCycle) {
  const CFExpansion e = expand(hensel(3, -5), AlgorithmId::C);
  EXPECT_EQ(e.status, ExpansionStatus(EventuallyPeriodic{0, 3}));
  EXPECT_TRUE(e.is_purely_periodic());
  const HenselOrbit o = hensel_orbit(HenselState(3, -5, P5), AlgorithmId::C, 100);
  const std::vector<HenselState> expected{{3, -5, P5}, {7, 5, P5}, {-3, -5, P5}};
  EXPECT_EQ(o.states, expected);
}

TEST(Expand, AlgorithmAOnTwoCycle) {
  const HenselOrbit o = hensel_orbit(HenselState(13, 5, P5), AlgorithmId::A, 100);
  EXPECT_EQ(o.preperiod, 0);
  EXPECT_EQ(o.period, 2);
}

TEST(Expand, ConjugateRootOfXSquaredPlus3XPlus5) {
  const Element x = make_quadratic(1, 3, 5, P5, q(2), 1);
  const CFExpansion e = expand(x, AlgorithmId::A);
  EXPECT_EQ(e.d0, 2);
  EXPECT_EQ(e.hensel_entry, HenselState(7, 15, P5));
  EXPECT_TRUE(e.is_periodic());
  EXPECT_FALSE(e.is_purely_periodic());
}

TEST(Expand, CapExceeded) {
  EXPECT_THROW(expand(hensel(13, 5), AlgorithmId::B, 2), CapExceeded);
  EXPECT_NO_THROW(expand(hensel(13, 5), AlgorithmId::B, 4));
}

TEST(Expand, ZeroIsFinite) {
  const CFExpansion e = expand(RationalElement(q(0), P5), AlgorithmId::B);
  EXPECT_TRUE(e.is_finite());
  EXPECT_TRUE(e.terms.empty());
  EXPECT_EQ(e.d0, 0);
}

TEST(Expand, RationalsRoundTripWithAtMostThreeTerms) {
  oracle::Rng rng(51);
  for (std::int64_t p : {2, 3, 5, 7})
    for (int i = 0; i < 150; ++i) {
      const Rational x = oracle::random_rational(rng, 1000000);
      for (auto alg : {AlgorithmId::A, AlgorithmId::B, AlgorithmId::C}) {
        const CFExpansion e = expand(RationalElement(x, Prime(p)), alg);
        EXPECT_TRUE(e.is_finite());
        EXPECT_LE(e.terms.size(), 3u);
        EXPECT_EQ(evaluate_finite(e), x);
        EXPECT_EQ(oracle::evaluate(e.d0, e.terms, p), x);
      }
    }
}

TEST(Convergents, Examples) {
  const CFExpansion e = expand(hensel(3, 5), AlgorithmId::A);
  const auto c = convergents(e, 3);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].numerator, 0);
  EXPECT_EQ(c[0].denominator, 1);
  EXPECT_EQ(c[1].numerator, -5);
  EXPECT_EQ(c[1].denominator, 3);
  EXPECT_EQ(c[2].numerator, -15);
  EXPECT_EQ(c[2].denominator, 4);
}

TEST(Convergents, MatchDirectEvaluation) {
  oracle::Rng rng(52);
  for (std::int64_t p : {2, 3, 5, 7})
    for (int i = 0; i < 40; ++i) {
      const HenselState s = oracle::random_state(rng, p, 300);
      for (auto alg : {AlgorithmId::A, AlgorithmId::B, AlgorithmId::C}) {
        const CFExpansion e = expand(make_quadratic(1, s.b(), s.c(), Prime(p)), alg);
        const auto conv = convergents(e, 10);
        for (std::int64_t n = 1; n <= 10; ++n) {
          const Rational direct = oracle::evaluate(0, unrolled(e, n), p);
          EXPECT_EQ(conv[static_cast<std::size_t>(n)].value(), direct);
          EXPECT_EQ(evaluate_prefix(e, n), direct);
        }
      }
    }
}

TEST(EvaluateFinite, Examples) {
  CFExpansion e{P5, AlgorithmId::A, 0, {{1, 1, 3}}, Finite{}, std::nullopt};
  EXPECT_EQ(evaluate_finite(e), q(5, 3));
  e.terms = {{-1, 1, 2}, {-1, 1, 1}};
  EXPECT_EQ(evaluate_finite(e), q(5, 3));
  e.d0 = 2;
  e.terms.clear();
  EXPECT_EQ(evaluate_finite(e), 2);
}

TEST(EvaluateFinite, ZeroDenominatorIsMalformed) {
  // the second term is -5/5 = -1, which cancels d_1 = 1
  const CFExpansion e{P5, AlgorithmId::A, 0, {{1, 1, 1}, {-5, 0, 5}}, Finite{}, std::nullopt};
  EXPECT_THROW(evaluate_finite(e), MalformedExpansion);
}

TEST(VerifyConvergence, Examples) {
  const Element x = hensel(3, 5);
  const CFExpansion e = expand(x, AlgorithmId::A);
  const ConvergenceReport r = verify_convergence(x, e, 5);
  ASSERT_EQ(r.rows.size(), 5u);
  for (std::int64_t n = 1; n <= 5; ++n) {
    EXPECT_EQ(r.rows[n - 1].predicted, Valuation(n + 1));
    EXPECT_EQ(r.rows[n - 1].computed, Valuation(n + 1));
  }
  // alpha = 15 mod 25 and -5/3 = 15 mod 25 differ mod 125
  EXPECT_EQ(vp(make_quadratic(1, 3, 5, P5).root_approx(10) - q(-5, 3), P5), Valuation(2));
  EXPECT_EQ(vp(make_quadratic(1, 3, 5, P5).root_approx(10) - q(-15, 4), P5), Valuation(3));

  const Element five_thirds = RationalElement(q(5, 3), P5);
  const ConvergenceReport t = verify_convergence(five_thirds, expand(five_thirds, AlgorithmId::A), 1);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_TRUE(t.rows[0].predicted.is_infinite());
  EXPECT_TRUE(t.rows[0].computed.is_infinite());
}

TEST(VerifyConvergence, AlgorithmBPreperiodicRoot) {
  const Element x = hensel(13, 5);
  const CFExpansion e = expand(x, AlgorithmId::B);
  const ConvergenceReport r = verify_convergence(x, e, 4);
  std::int64_t sum = 0;
  for (std::int64_t n = 1; n <= 4; ++n) {
    sum += e.term(n).k;
    EXPECT_EQ(r.rows[n - 1].computed, Valuation(sum + e.term(n + 1).k));
  }
}

TEST(VerifyConvergence, DetectsWrongExpansion) {
  const Element x = hensel(3, 5);
  CFExpansion e = expand(x, AlgorithmId::A);
  e.terms[0].d = 4;
  try {
    verify_convergence(x, e, 3);
    FAIL() << "expected VerificationFailed";
  } catch (const VerificationFailed& f) {
    EXPECT_EQ(f.index(), 1);
    EXPECT_FALSE(f.report().passed());
  }
}

TEST(VerifyConvergence, GeneralElementsAllAlgorithms) {
  oracle::Rng rng(53);
  for (std::int64_t p : {3, 5, 7})
    for (int i = 0; i < 15; ++i) {
      const auto f = oracle::random_quadratic(rng, p, 200);
      const Element x = make_quadratic(f.a, f.b, f.c, Prime(p));
      for (auto alg : {AlgorithmId::A, AlgorithmId::B, AlgorithmId::C})
        EXPECT_TRUE(verify_convergence(x, expand(x, alg), 6).passed());
    }
}

TEST(ClassifyPurePeriodicity, Examples) {
  EXPECT_TRUE(classify_pure_periodicity(HenselState(13, 5, P5), AlgorithmId::A));
  EXPECT_FALSE(classify_pure_periodicity(HenselState(13, 5, P5), AlgorithmId::B));
  EXPECT_TRUE(classify_pure_periodicity(HenselState(3, 5, P5), AlgorithmId::B));
  EXPECT_FALSE(classify_pure_periodicity(HenselState(8, 25, P5), AlgorithmId::C));
  EXPECT_TRUE(classify_pure_periodicity(HenselState(8, 5, P5), AlgorithmId::C));
  EXPECT_TRUE(classify_pure_periodicity(HenselState(3, -5, P5), AlgorithmId::C));
  EXPECT_THROW(classify_pure_periodicity(HenselState(3, 5, P5), AlgorithmId::Schneider),
               InvalidAlgorithm);
}

TEST(HenselOrbit, PeriodIsMinimal) {
  oracle::Rng rng(54);
  for (std::int64_t p : {2, 3, 5, 7})
    for (int i = 0; i < 100; ++i) {
      const HenselState s = oracle::random_state(rng, p, 300);
      for (auto alg : {AlgorithmId::A, AlgorithmId::B, AlgorithmId::C}) {
        const HenselOrbit o = hensel_orbit(s, alg, kDefaultExpandCap);
        // states are pairwise distinct and the successor of the last is states[preperiod]
        std::set<HenselState> distinct(o.states.begin(), o.states.end());
        EXPECT_EQ(distinct.size(), o.states.size());
        EXPECT_EQ(apply_state(o.states.back(), o.maps.back()),
                  o.states[static_cast<std::size_t>(o.preperiod)]);
      }
    }
}

TEST(Schneider, Examples) {
  const Element five_thirds = RationalElement(q(5, 3), P5);
  const CFExpansion e = schneider_expand(five_thirds);
  ASSERT_FALSE(e.terms.empty());
  EXPECT_EQ(e.terms[0].k, 1);
  EXPECT_EQ(e.terms[0].t, 1);
  EXPECT_GE(e.terms[0].d, 1u);
  EXPECT_LE(e.terms[0].d, 4u);
  if (e.is_finite()) EXPECT_EQ(evaluate_finite(e), q(5, 3));

  const CFExpansion z = schneider_expand(Element(RationalElement(q(0), P5)));
  EXPECT_TRUE(z.terms.empty());
  EXPECT_TRUE(z.is_finite());

  const CFExpansion h = schneider_expand(hensel(3, 25), 12);
  EXPECT_EQ(h.terms[0].k, 2);
  EXPECT_EQ(h.status, ExpansionStatus(Truncated{12}));
  EXPECT_EQ(h.terms.size(), 12u);
}

TEST(Schneider, StepIdentityOnRationals) {
  oracle::Rng rng(55);
  for (std::int64_t p : {3, 5, 7})
    for (int i = 0; i < 100; ++i) {
      const Rational x = oracle::random_rational(rng, 10000);
      const CFExpansion e = schneider_expand(Element(RationalElement(x, Prime(p))), 256);
      for (const auto& t : e.terms) EXPECT_EQ(t.t, 1);
      if (e.is_finite()) EXPECT_EQ(oracle::evaluate(e.d0, e.terms, p), x);
    }
}

TEST(Schneider, ConvergenceOnQuadratics) {
  const Element x = hensel(3, 5);
  const CFExpansion e = schneider_expand(x, 10);
  EXPECT_TRUE(verify_convergence(x, e, 8).passed());
}

}  // namespace
