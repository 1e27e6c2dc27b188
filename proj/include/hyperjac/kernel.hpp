#pragma once

// Kernel of the correspondence homomorphism: 2-torsion matrix, its nullity, and the group structure.

#include "differential.hpp"
#include "jacobian.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hj {

struct NotSplit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RepeatedRoots : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NuOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedM : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KernelMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using F2Matrix = std::vector<std::vector<uint8_t>>;

struct TwoTorsionMatrix {
  F2Matrix M;                       // 2g_X x 2g_Y
  F2Matrix M_literal;               // same, ignoring the image of the reference point (differs for even degree)
  std::vector<FF> gamma, delta;     // root orderings actually used
  std::vector<std::vector<int>> nu; // multiplicities, rows/cols over all finite roots
  int degree_drops = 0;             // rows where A(gamma_i, x2) lost x2-degree
};

// gamma: roots of h_X, delta: roots of h_Y, all in the field of A's coefficients.
// Odd degree: the point at infinity closes the basis. Even degree: the last root is the reference point.
inline TwoTorsionMatrix multiplicity_matrix_from_roots(const MPoly<FF>& A, const std::vector<FF>& gamma, const std::vector<FF>& delta) {
  const int dX = static_cast<int>(gamma.size()), dY = static_cast<int>(delta.size());
  const int gX = (dX - 1) / 2, gY = (dY - 1) / 2;
  FieldEmbedding id{A.ctx(), A.ctx(), FF::generator(A.ctx())};
  TwoTorsionMatrix T;
  T.gamma = gamma;
  T.delta = delta;
  const int dA = A.degree(X2);
  T.nu.assign(dX, std::vector<int>(dY, 0));
  for (int i = 0; i < dX; ++i) {
    FPoly a = specialize_x1(A, gamma[i], id);
    if (a.is_zero()) throw InvariantViolation("A vanishes identically at a root of h_X");
    if (a.deg() != dA) ++T.degree_drops;
    for (int j = 0; j < dY; ++j) {
      FPoly lin = FPoly::linear(delta[j]);
      for (;;) {
        auto [q, r] = a.divrem(lin);
        if (!r.is_zero()) break;
        a = q;
        ++T.nu[i][j];
      }
    }
  }
  // coefficient vector of the image of (w_i) - (w_ref) on all 2g_Y + 1 (or + 2) points
  auto row = [&](int i) {
    std::vector<int> c(dY);
    for (int j = 0; j < dY; ++j) c[j] = T.nu[i][j] - (dX % 2 == 0 ? T.nu[dX - 1][j] : 0);
    return c;
  };
  T.M.assign(2 * gX, std::vector<uint8_t>(2 * gY, 0));
  T.M_literal = T.M;
  for (int i = 0; i < 2 * gX; ++i) {
    auto c = row(i);
    // the point with index 2g_Y + 1 equals the sum of the first 2g_Y basis elements
    for (int j = 0; j < 2 * gY; ++j) {
      T.M[i][j] = static_cast<uint8_t>(((c[j] + c[2 * gY]) % 2 + 2) % 2);
      T.M_literal[i][j] = static_cast<uint8_t>((T.nu[i][j] + T.nu[i][2 * gY]) % 2);
    }
  }
  return T;
}

// nullity over F2
inline int two_rank(const F2Matrix& M0) {
  F2Matrix M = M0;
  const int rows = static_cast<int>(M.size());
  const int cols = rows ? static_cast<int>(M[0].size()) : 0;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int p = rank;
    while (p < rows && !M[p][c]) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[rank]);
    for (int r = 0; r < rows; ++r)
      if (r != rank && M[r][c])
        for (int k = c; k < cols; ++k) M[r][k] ^= M[rank][k];
    ++rank;
  }
  return rows - rank;
}

inline GroupSpec kernel_group(int m, int g, std::optional<int> nu = std::nullopt) {
  GroupSpec G;
  auto push = [&](int o, int e) {
    if (e > 0) G.parts.push_back({o, e});
  };
  if (m == 2 || m == 3 || m == 1) {
    push(m, g);
    return G;
  }
  if (m != 4 && m != 8) throw UnsupportedM("kernel structure is only classified for m in {1, 2, 3, 4, 8}, got " + std::to_string(m));
  if (!nu) throw NuOutOfRange("m = " + std::to_string(m) + " needs the 2-torsion rank");
  if (*nu < g || *nu > 2 * g)
    throw NuOutOfRange("2-torsion rank " + std::to_string(*nu) + " outside [" + std::to_string(g) + ", " + std::to_string(2 * g) + "]");
  if (m == 4) {
    push(4, 2 * g - *nu);
    push(2, 2 * (*nu - g));
  } else {
    push(8, 2 * g - *nu);
    push(4, *nu - g);
    push(2, *nu - g);
  }
  return G;
}

inline Integer group_order(const GroupSpec& G) {
  Integer n = 1;
  for (auto& [o, e] : G.parts) {
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(o), static_cast<unsigned long>(e));
    n *= t;
  }
  return n;
}

// ---------- pipeline ----------

// correspondence over the splitting field of h_X h_Y, with sorted roots
struct SplitCorrespondence {
  FieldPtr field;
  MPoly<FF> A;
  FPoly hX, hY;
  std::vector<FF> gamma, delta;
};

inline std::vector<FF> simple_roots(const FPoly& h, const std::string& which) {
  auto r = ff_roots(h);
  for (auto& [x, mult] : r)
    if (mult != 1) throw RepeatedRoots(which + " has a repeated root");
  if (static_cast<int>(r.size()) != h.deg()) throw NotSplit(which + " does not split over " + h.ctx()->name());
  std::vector<FF> out;
  for (auto& [x, mult] : r) out.push_back(x);
  return out;
}

inline SplitCorrespondence split_correspondence(const FCorrespondence& c, int max_degree = kMaxExtension) {
  FPoly hX = c.X.h.to_upoly(X), hY = c.Y.h.to_upoly(X);
  const auto& F = hX.ctx();
  int e = std::lcm(splitting_degree(hX), splitting_degree(hY));
  if (F->k() * e > max_degree)
    throw NotSplit("splitting field has degree " + std::to_string(F->k() * e) + " over F_" + std::to_string(F->p()) + ", above the limit " +
                   std::to_string(max_degree));
  SplitCorrespondence s;
  if (e == 1) {
    s.field = F;
    s.A = c.A;
    s.hX = hX;
    s.hY = hY;
  } else {
    s.field = FiniteField::make(F->p(), F->k() * e);
    auto emb = make_embedding(F, s.field);
    auto up = [&](const FF& x) { return emb(x); };
    s.A = c.A.template convert<FF>(s.field, up);
    s.hX = hX.map(up).rebase(s.field);
    s.hY = hY.map(up).rebase(s.field);
  }
  s.gamma = simple_roots(s.hX, "h_X");
  s.delta = simple_roots(s.hY, "h_Y");
  return s;
}

inline TwoTorsionMatrix multiplicity_matrix(const FCorrespondence& c) {
  auto s = split_correspondence(c);
  return multiplicity_matrix_from_roots(s.A, s.gamma, s.delta);
}

struct KernelReport {
  std::string family;
  Construction kind = Construction::Linear;
  std::vector<std::pair<Var, Rational>> values;
  uint64_t prime = 0;
  int field_degree = 1;  // degree over F_p of the field holding all roots
  int genus = 0;
  int m = 0;
  std::optional<int> nu;
  std::optional<int> nu_literal;  // nullity when the reference point's image is dropped
  std::vector<FF> prime_images;   // generator images fixing the prime above p
  GroupSpec group;
  Integer order;
  int degree_drops = 0;
  std::optional<uint64_t> second_prime;
  std::optional<GroupSpec> second_group;
  std::optional<GroupSpec> expected;
  bool matches_expected() const { return !expected || *expected == group; }
};

namespace detail {

struct NuResult {
  int nu = 0, nu_literal = 0, field_degree = 1, drops = 0;
  std::vector<FF> images;
};

// over the prime above p (among those of smallest residue degree) with a good fibre and the smallest splitting field
inline NuResult nu_at(const QCorrespondence& spec, uint64_t p, int max_degree = kMaxExtension, bool degree_one_only = false) {
  std::optional<FCorrespondence> best;
  std::vector<FF> best_images;
  int best_e = 0;
  std::string last_error = "no prime above " + std::to_string(p);
  auto reds = reductions_above(spec.A.ctx(), p);
  if (degree_one_only && reds.front().target()->k() != 1) throw NotSplit("no degree-one prime above " + std::to_string(p));
  for (auto& red : reds) {
    try {
      auto fc = reduce(spec, red);
      int e = std::lcm(splitting_degree(fc.X.h.to_upoly(X)), splitting_degree(fc.Y.h.to_upoly(X)));
      if (!best || e < best_e) {
        best = fc;
        best_e = e;
        best_images = red.images();
      }
    } catch (const OnDiscriminantLocus& e) {
      last_error = e.what();
    } catch (const BadReduction& e) {
      last_error = e.what();
    }
  }
  if (!best) throw OnDiscriminantLocus(last_error + " (every prime above " + std::to_string(p) + ")");
  auto s = split_correspondence(*best, max_degree);
  auto T = multiplicity_matrix_from_roots(s.A, s.gamma, s.delta);
  return {two_rank(T.M), two_rank(T.M_literal), s.field->k(), T.degree_drops, best_images};
}

inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace detail

inline std::string values_text(const std::vector<std::pair<Var, Rational>>& values) {
  std::string s;
  for (auto& [v, q] : values) {
    if (!s.empty()) s += ",";
    s += std::string(kVarNames[v]) + "=" + q.get_str();
  }
  return s;
}

// m is recomputed from the differential matrices; a second prime repeats the 2-rank when one is cheap enough
inline KernelReport full_kernel_report(const FamilyRecord& r, Construction kind, const std::vector<std::pair<Var, Rational>>& values, uint64_t prime,
                                       bool second_prime = true) {
  KernelReport rep;
  rep.family = r.name;
  rep.kind = kind;
  rep.values = values;
  rep.prime = prime;
  const std::string ctx = r.name + " " + to_string(kind) + " at (" + values_text(values) + ") mod " + std::to_string(prime) + ": ";
  try {
    auto corr = build_construction(r, kind);
    rep.genus = corr.X.genus;
    rep.m = static_cast<int>(rosati_product(corr).get_si());
    auto spec = specialize(corr, values, false);
    if (rep.m == 4 || rep.m == 8) {
      auto res = detail::nu_at(spec, prime);
      rep.nu = res.nu;
      rep.nu_literal = res.nu_literal;
      rep.field_degree = res.field_degree;
      rep.degree_drops = res.drops;
      rep.prime_images = res.images;
    } else {
      // discriminant condition is still checked at some prime above p
      std::optional<std::string> err;
      for (auto& red : reductions_above(r.tower, prime)) {
        try {
          reduce(spec, red);
          err.reset();
          rep.prime_images = red.images();
          break;
        } catch (const OnDiscriminantLocus& e) {
          err = e.what();
        }
      }
      if (err) throw OnDiscriminantLocus(*err);
    }
    rep.group = kernel_group(rep.m, rep.genus, rep.nu);
    rep.order = group_order(rep.group);
    Integer mg;
    mpz_ui_pow_ui(mg.get_mpz_t(), static_cast<unsigned long>(rep.m), static_cast<unsigned long>(rep.genus));
    if (rep.order != mg) throw InvariantViolation("kernel order " + rep.order.get_str() + " != m^g");
    if (second_prime && rep.nu) {
      int scanned = 0;
      for (uint64_t q = prime + 1; scanned < 30; ++q) {
        if (!detail::is_prime(q)) continue;
        ++scanned;
        try {
          auto res = detail::nu_at(spec, q, 12, true);
          rep.second_prime = q;
          rep.second_group = kernel_group(rep.m, rep.genus, res.nu);
          break;
        } catch (const std::exception&) {
          // bad reduction, degenerate fibre or splitting field too large: try the next prime
        }
      }
      if (rep.second_group && !(*rep.second_group == rep.group))
        throw KernelMismatch("group " + rep.group.str() + " at p=" + std::to_string(prime) + " but " + rep.second_group->str() + " at p=" +
                             std::to_string(*rep.second_prime));
    }
  } catch (const KernelMismatch&) {
    throw;
  } catch (const OnDiscriminantLocus& e) {
    throw OnDiscriminantLocus(ctx + e.what());
  } catch (const NotSplit& e) {
    throw NotSplit(ctx + e.what());
  } catch (const NuOutOfRange& e) {
    throw NuOutOfRange(ctx + e.what());
  } catch (const BadReduction& e) {
    throw BadReduction(ctx + e.what());
  }
  for (auto& sp : r.specials)
    if (sp.kind == kind && sp.prime == prime && sp.values == values) rep.expected = sp.group;
  if (!rep.expected) {
    // squarefree m gives a group independent of the specialization
    auto& eg = kind == Construction::Linear ? r.group_linear : r.group_quadratic;
    if (eg && (rep.m == 2 || rep.m == 3)) rep.expected = *eg;
  }
  return rep;
}

inline KernelReport full_kernel_report(const FamilyRecord& r, const SpecialPoint& sp, bool second_prime = true) {
  return full_kernel_report(r, sp.kind, sp.values, sp.prime, second_prime);
}

// the 2-torsion image of basis element i predicted by the matrix, as a class on Y
inline MumfordDivisor predicted_two_torsion_image(const JacobianCtx& JY, const TwoTorsionMatrix& T, int i) {
  MumfordDivisor acc = JY.identity();
  for (size_t j = 0; j < T.M[i].size(); ++j)
    if (T.M[i][j]) acc = JY.add(acc, {FPoly::linear(T.delta[j]), FPoly(JY.field())});
  return acc;
}

}  // namespace hj
