#include "support.hpp"

#include <gtest/gtest.h>

using namespace hjt;

TEST(Rational, CanonicalForm) {
  Rational q = parse_rational("6/-4");
  EXPECT_EQ(to_string(q), "-3/2");
  EXPECT_EQ(to_string(parse_rational("0/5")), "0/1");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
  EXPECT_EQ(rational_mod(Rational(1, 2), 7), 4u);
}

TEST(Tower, InvertAlpha7) {
  auto t = tower7();
  NF a = NF::generator(t, "a");
  NF expect = -(a + NF(t, 1L)) * Rational(1, 2);
  EXPECT_EQ(a.inv(), expect);
  EXPECT_EQ(NF(t, 1L).inv(), NF(t, 1L));
  EXPECT_THROW(NF(t, 0L).inv(), DivisionByZero);
}

TEST(Tower, InvertAlpha15) {
  auto t = tower15();
  NF a = NF::generator(t, "a");
  NF r = a.inv();
  EXPECT_TRUE((a * r).is_one());
  EXPECT_EQ(r, (NF(t, 1L) - a) * Rational(1, 4));
}

TEST(Tower, Conjugation) {
  auto t7 = tower7();
  NF a = NF::generator(t7, "a");
  EXPECT_EQ(a.conj(), -(a + NF(t7, 1L)));
  EXPECT_EQ(a.conj(), NF(t7, 2L) / a);
  EXPECT_EQ(NF(t7, Rational(3, 7)).conj(), NF(t7, Rational(3, 7)));
  auto t13 = tower13();
  NF a13 = NF::generator(t13, "a"), b13 = NF::generator(t13, "b");
  EXPECT_EQ(a13.conj(), b13 / a13);
  EXPECT_EQ(b13.conj(), b13);
}

TEST(Tower, Norms) {
  EXPECT_EQ(NF::generator(tower11(), "a").norm_relative(), NF(tower11(), 3L));
  EXPECT_EQ(NF::generator(tower15(), "a").norm_relative(), NF(tower15(), 4L));
  EXPECT_EQ(NF(tower31(), 0L).norm_absolute(), 0);
  EXPECT_EQ(NF::generator(tower7(), "a").norm_absolute(), 2);
}

TEST(Tower, RejectsBadInvolution) {
  // a -> a + 1 does not preserve a^2 + a + 2
  EXPECT_THROW(quadratic_tower(2, 1, 1, 1), InvariantViolation);
}

TEST(Tower, Cyclotomic) {
  auto t = cyclotomic_tower(5);
  NF z = NF::generator(t, "z");
  EXPECT_TRUE(z.pow(5).is_one());
  EXPECT_TRUE((z * z.conj()).is_one());
  EXPECT_EQ(cyclotomic_poly(12), (std::vector<Integer>{1, 0, -1, 0, 1}));
}

TEST(FiniteField, ModulusIsFirstIrreducible) {
  auto F = FiniteField::make(13, 2);
  // x^2 + c1 x + c0 in base-13 order: first irreducible is x^2 + 2 (c0=2)
  EXPECT_EQ(F->modulus(), (modp::Vec{2, 0, 1}));
  auto G = FiniteField::make(2, 3);
  EXPECT_EQ(G->modulus(), (modp::Vec{1, 1, 0, 1}));
}

TEST(FFRoots, Examples) {
  auto F31 = FiniteField::make(31, 1);
  FPoly p(F31, {FF(F31, -1L), FF(F31, 0L), FF(F31, 1L)});
  auto r = ff_roots(p);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].first.index(), 1u);
  EXPECT_EQ(r[1].first.index(), 30u);
  EXPECT_EQ(r[0].second, 1);

  FPoly q = FPoly::monomial(FF(F31, 1L), 15) + FPoly::constant(FF(F31, 1L));
  EXPECT_EQ(ff_roots(q).size(), 15u);
  EXPECT_EQ(ff_roots(q, 1, 0).size(), 15u);  // gcd path

  auto F7 = FiniteField::make(7, 1);
  FPoly l = FPoly::linear(FF(F7, 2L));
  auto r2 = ff_roots(l * l);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(r2[0].first.index(), 2u);
  EXPECT_EQ(r2[0].second, 2);
}

TEST(Reduction, Examples) {
  auto r11 = build_reduction(tower7(), 11);
  EXPECT_EQ(r11.target()->k(), 1);
  EXPECT_EQ(r11.images()[0].index(), 4u);

  auto r13 = build_reduction(tower7(), 13);
  EXPECT_EQ(r13.target()->k(), 2);
  EXPECT_TRUE(r13.verify());

  auto r31 = build_reduction(tower15(), 31);
  EXPECT_EQ(r31.target()->k(), 1);
  FF a = r31.images()[0];
  EXPECT_TRUE((a * a - a + FF(r31.target(), 4L)).is_zero());

  EXPECT_THROW(build_reduction(tower7(), 12), NoPrimeAbove);
  EXPECT_THROW(build_reduction(tower31(), 2), NoPrimeAbove);
}

TEST(Reduction, SeededChoiceStillValid) {
  for (uint64_t s = 0; s < 5; ++s) EXPECT_TRUE(build_reduction(tower13(), 29, s).verify());
}

// ---- properties ----

TEST(FieldProperties, RingAxiomsAndInverse) {
  std::mt19937_64 rng(1);
  int cases = 0;
  for (auto& t : catalog_towers()) {
    for (int i = 0; i < 25; ++i, ++cases) {
      NF a = random_nf(t, rng), b = random_nf(t, rng), c = random_nf(t, rng);
      ASSERT_EQ((a + b) + c, a + (b + c));
      ASSERT_EQ((a * b) * c, a * (b * c)) << t->size();
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ(a * (b + c), a * b + a * c);
      NF n = random_nonzero_nf(t, rng);
      ASSERT_TRUE((n * n.inv()).is_one());
    }
  }
  EXPECT_GE(cases, 200);
}

TEST(FieldProperties, InvolutionSquaredIsIdentity) {
  std::mt19937_64 rng(2);
  for (auto& t : catalog_towers())
    for (int i = 0; i < 100; ++i) {
      NF a = random_nf(t, rng), b = random_nf(t, rng);
      ASSERT_EQ(a.conj().conj(), a);
      ASSERT_EQ((a * b).conj(), a.conj() * b.conj());
    }
}

TEST(FieldProperties, ReductionIsHomomorphism) {
  std::mt19937_64 rng(3);
  int cases = 0;
  std::vector<std::pair<TowerPtr, uint64_t>> setups = {{tower7(), 11}, {tower7(), 13}, {tower13(), 29}, {tower15(), 31},
                                                       {tower21(), 29}, {tower31(), 47}, {cyclotomic_tower(7), 29}};
  for (auto& [t, p] : setups) {
    auto r = build_reduction(t, p);
    for (int i = 0; i < 40; ++i, ++cases) {
      NF a = random_nf(t, rng), b = random_nf(t, rng);
      try {
        ASSERT_EQ(r(a + b), r(a) + r(b));
        ASSERT_EQ(r(a * b), r(a) * r(b));
      } catch (const BadReduction&) {
        // denominator divisible by p: outside the local ring
      }
    }
  }
  EXPECT_GE(cases, 200);
}

TEST(FieldProperties, FiniteFieldInverse) {
  std::mt19937_64 rng(4);
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 5}, {3, 6}, {5, 4}, {13, 2}, {31, 1}, {599, 3}})
    for (int i = 0; i < 40; ++i) {
      auto F = FiniteField::make(p, k);
      FF a = random_element(F, rng);
      if (a.is_zero()) continue;
      ASSERT_TRUE((a * a.inv()).is_one());
    }
}

TEST(FieldProperties, RootsMatchBruteForce) {
  std::mt19937_64 rng(5);
  int cases = 0;
  for (auto [p, k] : std::vector<std::pair<int, int>>{{7, 1}, {31, 1}, {5, 2}, {13, 2}, {3, 4}, {101, 1}, {11, 3}}) {
    auto F = FiniteField::make(p, k);
    for (int i = 0; i < 30; ++i, ++cases) {
      // product of random linear factors times a random cofactor
      FPoly f = FPoly::constant(FF(F, 1L));
      int nl = static_cast<int>(rng() % 4);
      for (int j = 0; j < nl; ++j) f *= FPoly::linear(random_element(F, rng));
      f *= random_poly(F, 1 + static_cast<int>(rng() % 5), rng);
      if (f.is_zero() || f.deg() < 1) continue;
      auto brute = ff_roots(f);
      auto split = ff_roots(f, i, 0);
      ASSERT_EQ(brute.size(), split.size());
      int total = 0;
      for (size_t j = 0; j < brute.size(); ++j) {
        ASSERT_EQ(brute[j].first, split[j].first);
        ASSERT_EQ(brute[j].second, split[j].second);
        total += brute[j].second;
      }
      ASSERT_LE(total, f.deg());
    }
  }
  EXPECT_GE(cases, 200);
}

TEST(FFPoly, FactorAndSplittingDegree) {
  auto F = FiniteField::make(13, 1);
  // x^2 + x + 2 irreducible mod 13
  FPoly f(F, {FF(F, 2L), FF(F, 1L), FF(F, 1L)});
  EXPECT_EQ(splitting_degree(f), 2);
  auto fac = factor(f * FPoly::linear(FF(F, 3L)) * FPoly::linear(FF(F, 3L)));
  ASSERT_EQ(fac.size(), 2u);
  EXPECT_EQ(fac[0].poly.deg(), 1);
  EXPECT_EQ(fac[0].mult, 2);
  EXPECT_EQ(fac[1].poly.deg(), 2);
}

TEST(FFPoly, Embedding) {
  auto small = FiniteField::make(5, 2), big = FiniteField::make(5, 4);
  auto e = make_embedding(small, big);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 30; ++i) {
    FF a = random_element(small, rng), b = random_element(small, rng);
    ASSERT_EQ(e(a * b), e(a) * e(b));
    ASSERT_EQ(e(a + b), e(a) + e(b));
  }
}
