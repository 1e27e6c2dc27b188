#include "support.hpp"

#include <gtest/gtest.h>

using namespace hjt;

namespace {

const std::vector<FamilyRecord>& catalog() {
  static const auto cat = load_catalog(HYPERJAC_FIXTURE_DIR);
  return cat;
}

FPoly fpoly(const FieldPtr& F, std::initializer_list<long> c) {
  std::vector<FF> v;
  for (long x : c) v.push_back(FF(F, x));
  return FPoly(F, v);
}

// random squarefree odd-degree h of degree 2g+1
FPoly random_model(const FieldPtr& F, int g, std::mt19937_64& rng) {
  for (;;) {
    FPoly h = random_poly(F, 2 * g + 1, rng) + FPoly::monomial(FF(F, 1L), 2 * g + 1);
    if (gcd(h, h.derivative()).deg() == 0) return h;
  }
}

// specialization of a family construction at a prime where the tower splits
struct SplitInstance {
  FCorrespondence c;
  JacPtr JX, JY;
  MPoly<FF> dualA;
  int m = 0;
};

std::optional<SplitInstance> split_instance(const FamilyRecord& r, Construction kind, uint64_t p, std::mt19937_64& rng) {
  ReductionMap red;
  try {
    red = build_reduction(r.tower, p);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (red.target()->k() != 1) return std::nullopt;
  auto q = build_construction(r, kind);
  std::vector<Var> vars = r.params();
  for (Var v : kind == Construction::Linear ? std::vector<Var>{S} : std::vector<Var>{S1, S2}) vars.push_back(v);
  for (int tries = 0; tries < 20; ++tries) {
    std::vector<std::pair<Var, Rational>> vals;
    for (Var v : vars) vals.emplace_back(v, Rational(static_cast<long>(rng() % p)));
    try {
      SplitInstance s;
      s.c = specialize(q, vals, red);
      s.JX = JacobianCtx::make(s.c.X.h);
      s.JY = JacobianCtx::make(s.c.Y.h);
      s.dualA = s.c.A.swap_vars(X1, X2);
      s.m = *(kind == Construction::Linear ? r.m_linear : r.m_quadratic);
      return s;
    } catch (const OnDiscriminantLocus&) {
    } catch (const BadReduction&) {
    }
  }
  return std::nullopt;
}

}  // namespace

TEST(Jacobian, RejectsEvenAndSingularModels) {
  auto F = FiniteField::make(7, 1);
  EXPECT_THROW(JacobianCtx::make(fpoly(F, {1, 0, 0, 0, 0, 0, 1})), EvenDegreeModel);
  // (x - 1)^2 (x^3 + 1)
  FPoly sq = fpoly(F, {-1, 1}) * fpoly(F, {-1, 1}) * fpoly(F, {1, 0, 0, 1});
  EXPECT_THROW(JacobianCtx::make(sq), OnDiscriminantLocus);
}

TEST(Jacobian, OrderOfX5Plus1OverF7) {
  auto F = FiniteField::make(7, 1);
  auto J = JacobianCtx::make(fpoly(F, {1, 0, 0, 0, 0, 1}));
  Integer n = jacobian_order_bruteforce(J->h());
  // x^5 permutes F7 and F49: N1 = 8, N2 = 50, so the L-polynomial is 1 + 49 T^4
  EXPECT_EQ(count_points(J->h()), 8u);
  EXPECT_EQ(n, 50);
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto D = random_divisor(*J, seed);
    ASSERT_TRUE(J->is_valid(D));
    EXPECT_TRUE(J->scalar_mul(D, n).is_identity()) << D.str();
  }
}

TEST(Jacobian, GroupAxioms) {
  std::mt19937_64 rng(7);
  int cases = 0;
  for (uint64_t p : {7, 11, 31})
    for (int g : {1, 2, 3}) {
      auto F = FiniteField::make(p, 1);
      auto J = JacobianCtx::make(random_model(F, g, rng));
      for (int k = 0; k < 10; ++k) {
        auto a = random_divisor(*J, rng), b = random_divisor(*J, rng), c = random_divisor(*J, rng);
        ASSERT_TRUE(J->is_valid(a));
        EXPECT_EQ(J->add(a, J->identity()), a);
        EXPECT_TRUE(J->add(a, J->negate(a)).is_identity());
        EXPECT_EQ(J->add(a, b), J->add(b, a));
        EXPECT_EQ(J->add(J->add(a, b), c), J->add(a, J->add(b, c)));
        EXPECT_EQ(J->scalar_mul(a, 3), J->add(a, J->add(a, a)));
        EXPECT_EQ(J->scalar_mul(a, -2), J->negate(J->add(a, a)));
        ++cases;
      }
    }
  EXPECT_GE(cases, 90);
}

TEST(Jacobian, OrderOracleAnnihilates) {
  std::mt19937_64 rng(11);
  for (uint64_t p : {5, 7, 11, 13})
    for (int g : {1, 2}) {
      auto F = FiniteField::make(p, 1);
      auto J = JacobianCtx::make(random_model(F, g, rng));
      Integer n = jacobian_order_bruteforce(J->h());
      for (int k = 0; k < 5; ++k) EXPECT_TRUE(J->scalar_mul(random_divisor(*J, rng), n).is_identity());
    }
}

TEST(Jacobian, TwoTorsionIndependence) {
  auto F = FiniteField::make(11, 1);
  FPoly h = FPoly::constant(FF(F, 1L));
  for (int k = 0; k < 5; ++k) h = h * fpoly(F, {-k, 1});
  auto J = JacobianCtx::make(h);
  std::vector<MumfordDivisor> T;
  for (int i = 1; i <= 4; ++i) {
    T.push_back(two_torsion_class(*J, i));
    EXPECT_TRUE(J->scalar_mul(T.back(), 2).is_identity());
  }
  // all 16 subset sums are distinct
  std::vector<MumfordDivisor> sums;
  for (int mask = 0; mask < 16; ++mask) {
    auto acc = J->identity();
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) acc = J->add(acc, T[i]);
    for (auto& s : sums) EXPECT_FALSE(s == acc) << mask;
    sums.push_back(acc);
  }
  EXPECT_THROW(two_torsion_class(*JacobianCtx::make(fpoly(F, {3, 0, 0, 0, 0, 1})), 1), RequiresSplitModel);
}

TEST(Jacobian, RandomDivisorIsDeterministic) {
  auto F = FiniteField::make(31, 1);
  std::mt19937_64 rng(3);
  auto J = JacobianCtx::make(random_model(F, 3, rng));
  EXPECT_EQ(random_divisor(*J, 42), random_divisor(*J, 42));
}

TEST(Jacobian, ExtensionOrbitSumDescends) {
  auto F = FiniteField::make(7, 1);
  auto J = JacobianCtx::make(fpoly(F, {1, 2, 0, 3, 0, 1}));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    auto D = random_divisor(*J, rng);
    EXPECT_TRUE(J->is_valid(D));
    EXPECT_EQ(D.u.ctx(), F);
  }
}

TEST(Correspondence, DiagonalIsIdentity) {
  auto F = FiniteField::make(11, 1);
  std::mt19937_64 rng(9);
  auto J = JacobianCtx::make(random_model(F, 2, rng));
  MPoly<FF> A = MPoly<FF>::var(F, X1) - MPoly<FF>::var(F, X2);
  for (int k = 0; k < 10; ++k) {
    auto D = random_divisor(*J, rng);
    EXPECT_EQ(apply_correspondence(*J, *J, A, D), D);
  }
}

TEST(Correspondence, Additive) {
  std::mt19937_64 rng(13);
  auto& r = find_family(catalog(), "f7");
  std::optional<SplitInstance> inst;
  for (uint64_t p = 11; !inst && p < 200; p += 2) inst = split_instance(r, Construction::Linear, p, rng);
  ASSERT_TRUE(inst.has_value());
  for (int k = 0; k < 10; ++k) {
    auto a = random_divisor(*inst->JX, rng), b = random_divisor(*inst->JX, rng);
    auto lhs = apply_correspondence(*inst->JX, *inst->JY, inst->c.A, inst->JX->add(a, b));
    auto rhs = inst->JY->add(apply_correspondence(*inst->JX, *inst->JY, inst->c.A, a),
                             apply_correspondence(*inst->JX, *inst->JY, inst->c.A, b));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Correspondence, DualCompositeIsMultiplicationByM) {
  std::mt19937_64 rng(17);
  for (auto name : {"f7", "f11", "f13", "f21"}) {
    auto& r = find_family(catalog(), name);
    std::optional<SplitInstance> inst;
    uint64_t p = 11;
    for (; !inst && p < 400; p += 2) inst = split_instance(r, Construction::Linear, p, rng);
    ASSERT_TRUE(inst.has_value()) << name;
    for (int k = 0; k < 10; ++k) {
      auto D = random_divisor(*inst->JX, rng);
      auto img = apply_correspondence(*inst->JX, *inst->JY, inst->c.A, D);
      auto back = apply_correspondence(*inst->JY, *inst->JX, inst->dualA, img);
      EXPECT_EQ(back, inst->JX->scalar_mul(D, inst->m)) << name << " p=" << p - 2;
    }
  }
}
