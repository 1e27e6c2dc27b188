#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace hjt;

namespace {

const std::vector<FamilyRecord>& catalog() {
  static const auto cat = load_catalog(HYPERJAC_FIXTURE_DIR);
  return cat;
}

const SpecialPoint& special(const std::string& fam, Construction kind) {
  for (auto& sp : find_family(catalog(), fam).specials)
    if (sp.kind == kind) return sp;
  throw std::runtime_error("no special point for " + fam);
}

F2Matrix identity(int n) {
  F2Matrix M(n, std::vector<uint8_t>(n, 0));
  for (int i = 0; i < n; ++i) M[i][i] = 1;
  return M;
}

}  // namespace

TEST(TwoRank, Trivial) {
  EXPECT_EQ(two_rank(F2Matrix(6, std::vector<uint8_t>(6, 0))), 6);
  EXPECT_EQ(two_rank(identity(8)), 0);
  F2Matrix M = {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
  EXPECT_EQ(two_rank(M), 1);
}

TEST(KernelGroup, Formula) {
  EXPECT_EQ(kernel_group(2, 3).str(), "2^3");
  EXPECT_EQ(kernel_group(3, 12).str(), "3^12");
  EXPECT_EQ(kernel_group(4, 7, 10).str(), "4^4*2^6");
  EXPECT_EQ(kernel_group(4, 9, 9).str(), "4^9");
  EXPECT_EQ(kernel_group(8, 30, 49).str(), "8^11*4^19*2^19");
  EXPECT_EQ(kernel_group(8, 15, 25).str(), "8^5*4^10*2^10");
  EXPECT_THROW(kernel_group(4, 7, 6), NuOutOfRange);
  EXPECT_THROW(kernel_group(4, 7, 15), NuOutOfRange);
  EXPECT_THROW(kernel_group(4, 7), NuOutOfRange);
  EXPECT_THROW(kernel_group(6, 3), UnsupportedM);
}

TEST(KernelGroup, OrderIsMToTheG) {
  for (int g = 1; g <= 30; ++g)
    for (int nu = g; nu <= 2 * g; ++nu)
      for (int m : {4, 8}) {
        Integer mg;
        mpz_ui_pow_ui(mg.get_mpz_t(), m, g);
        EXPECT_EQ(group_order(kernel_group(m, g, nu)), mg);
      }
}

TEST(MultiplicityMatrix, DiagonalOnEllipticCurve) {
  auto F = FiniteField::make(7, 1);
  MPoly<FF> A = MPoly<FF>::var(F, X1) - MPoly<FF>::var(F, X2);
  std::vector<FF> roots = {FF(F, 0L), FF(F, 1L), FF(F, 2L)};
  auto T = multiplicity_matrix_from_roots(A, roots, roots);
  EXPECT_EQ(T.M, identity(2));
  EXPECT_EQ(two_rank(T.M), 0);
}

TEST(FullKernelReport, SquarefreeRows) {
  std::vector<std::tuple<std::string, Construction, std::string>> rows = {
      {"f7", Construction::Linear, "2^3"},     {"f11", Construction::Linear, "3^5"},     {"f13", Construction::Linear, "3^6"},
      {"f11", Construction::Quadratic, "3^10"}, {"f13", Construction::Quadratic, "3^12"}, {"f7", Construction::Quadratic, "2^6"}};
  for (auto& [fam, kind, grp] : rows) {
    auto& r = find_family(catalog(), fam);
    auto corr = build_construction(r, kind);
    int m = static_cast<int>(rosati_product(corr).get_si());
    EXPECT_EQ(kernel_group(m, corr.X.genus).str(), grp) << fam;
  }
}

// odd-degree specializations reproduce the catalog groups exactly
TEST(FullKernelReport, OddDegreeSpecials) {
  for (auto fam : {"f15", "f21", "f31"}) {
    auto& r = find_family(catalog(), fam);
    auto& sp = special(fam, Construction::Linear);
    auto rep = full_kernel_report(r, sp);
    ASSERT_TRUE(rep.expected.has_value());
    EXPECT_EQ(rep.group, sp.group) << fam << " " << rep.group.str();
    EXPECT_TRUE(rep.matches_expected());
    EXPECT_EQ(rep.nu, rep.nu_literal);
    ASSERT_TRUE(rep.second_group.has_value()) << fam;
    EXPECT_EQ(*rep.second_group, rep.group);
  }
}

// even degree: the reference Weierstrass point is finite and its image enters every row.
// The catalog groups match the nullity with that image dropped; the full matrix has nullity one higher.
TEST(FullKernelReport, EvenDegreeSpecials) {
  std::vector<std::tuple<std::string, int, int, std::string>> rows = {
      {"f15", 20, 19, "4^8*2^12"}, {"f21", 22, 21, "4^18*2^4"}, {"f31", 50, 49, "8^10*4^20*2^20"}};
  for (auto& [fam, nu, lit, grp] : rows) {
    auto& r = find_family(catalog(), fam);
    auto& sp = special(fam, Construction::Quadratic);
    auto rep = full_kernel_report(r, sp);
    EXPECT_EQ(rep.nu, nu) << fam;
    EXPECT_EQ(rep.nu_literal, lit) << fam;
    EXPECT_EQ(rep.group.str(), grp) << fam;
    EXPECT_EQ(kernel_group(rep.m, rep.genus, *rep.nu_literal), sp.group) << fam;
    ASSERT_TRUE(rep.second_group.has_value()) << fam;
    EXPECT_EQ(*rep.second_group, rep.group);
  }
}

// m = 2 forces ker = J[2]-part of rank g; m = 3 forces no 2-torsion. Only the full even-degree matrix meets both.
TEST(MultiplicityMatrix, ForcedNullityOnEvenDegree) {
  std::mt19937_64 rng(41);
  for (auto [fam, want] : {std::pair{"f7", 6}, std::pair{"f13", 0}, std::pair{"f11", 0}}) {
    auto& r = find_family(catalog(), fam);
    auto q = build_construction(r, Construction::Quadratic);
    int found = 0, literal_wrong = 0;
    for (uint64_t p = 11; p < 400 && found < 3; p += 2) {
      if (!detail::is_prime(p)) continue;
      for (int t = 0; t < 5 && found < 3; ++t) {
        std::vector<std::pair<Var, Rational>> vals;
        for (Var v : r.params()) vals.emplace_back(v, Rational(static_cast<long>(rng() % p)));
        vals.emplace_back(S1, Rational(static_cast<long>(rng() % p)));
        vals.emplace_back(S2, Rational(static_cast<long>(rng() % p)));
        try {
          auto res = detail::nu_at(specialize(q, vals, false), p, 24);
          EXPECT_EQ(res.nu, want) << fam << " p=" << p;
          if (res.nu_literal != want) ++literal_wrong;
          ++found;
        } catch (const std::exception&) {
        }
      }
    }
    EXPECT_EQ(found, 3) << fam;
    if (std::string(fam) != "f11") EXPECT_GT(literal_wrong, 0) << fam;
  }
}

TEST(MultiplicityMatrix, NullityValues) {
  auto nu = [](const std::string& fam, Construction kind) {
    auto& r = find_family(catalog(), fam);
    auto& sp = special(fam, kind);
    return detail::nu_at(specialize(build_construction(r, kind), sp.values, false), sp.prime).nu;
  };
  EXPECT_EQ(nu("f15", Construction::Linear), 10);
  EXPECT_EQ(nu("f31", Construction::Linear), 25);
  EXPECT_EQ(nu("f21", Construction::Linear), 11);
}

// nullity does not depend on the root orderings, including the choice of closing root
TEST(MultiplicityMatrix, PermutationInvariance) {
  std::mt19937_64 rng(23);
  for (auto [fam, kind] : {std::pair{"f15", Construction::Linear}, std::pair{"f21", Construction::Linear}, std::pair{"f15", Construction::Quadratic},
                           std::pair{"f21", Construction::Quadratic}}) {
    auto& r = find_family(catalog(), fam);
    auto& sp = special(fam, kind);
    auto spec = specialize(build_construction(r, kind), sp.values, false);
    auto s = split_correspondence(reduce(spec, build_reduction(r.tower, sp.prime)));
    int base = two_rank(multiplicity_matrix_from_roots(s.A, s.gamma, s.delta).M);
    for (int k = 0; k < 6; ++k) {
      auto g = s.gamma, d = s.delta;
      std::shuffle(g.begin(), g.end(), rng);
      std::shuffle(d.begin(), d.end(), rng);
      EXPECT_EQ(two_rank(multiplicity_matrix_from_roots(s.A, g, d).M), base) << fam << " shuffle " << k;
    }
  }
}

// the matrix row i agrees with the image of the i-th 2-torsion class computed by divisor arithmetic
TEST(MultiplicityMatrix, AgreesWithJacobianImages) {
  std::mt19937_64 rng(29);
  int checked = 0;
  for (auto fam : {"f7", "f11", "f13", "f15", "f21"}) {
    auto& r = find_family(catalog(), fam);
    auto q = build_construction(r, Construction::Linear);
    bool done = false;
    for (uint64_t p = 11; p < 400 && !done; p += 2) {
      if (!detail::is_prime(p)) continue;
      ReductionMap red;
      try {
        red = build_reduction(r.tower, p);
      } catch (const std::exception&) {
        continue;
      }
      if (red.target()->k() != 1) continue;
      for (int tries = 0; tries < 10 && !done; ++tries) {
        std::vector<std::pair<Var, Rational>> vals;
        for (Var v : r.params()) vals.emplace_back(v, Rational(static_cast<long>(rng() % p)));
        vals.emplace_back(S, Rational(static_cast<long>(rng() % p)));
        SplitCorrespondence s;
        try {
          s = split_correspondence(specialize(q, vals, red), 6);
        } catch (const std::exception&) {
          continue;
        }
        auto JX = JacobianCtx::make(s.hX), JY = JacobianCtx::make(s.hY);
        auto T = multiplicity_matrix_from_roots(s.A, s.gamma, s.delta);
        for (int i = 0; i < 2 * JX->genus(); ++i) {
          MumfordDivisor Ti{FPoly::linear(s.gamma[i]), FPoly(JX->field())};
          EXPECT_EQ(apply_correspondence(*JX, *JY, s.A, Ti), predicted_two_torsion_image(*JY, T, i)) << fam << " p=" << p << " i=" << i;
        }
        done = true;
        ++checked;
      }
    }
    EXPECT_TRUE(done) << fam;
  }
  EXPECT_EQ(checked, 5);
}
