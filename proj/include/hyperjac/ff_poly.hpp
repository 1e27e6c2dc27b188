#pragma once

// Roots and factorization of univariate polynomials over F_q.

#include "finite_field.hpp"
#include "upoly.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace hj {

using FPoly = UPoly<FF>;

inline constexpr uint64_t kBruteForceRootLimit = 1000000;

struct Factor {
  FPoly poly;  // monic irreducible
  int mult = 1;
};

inline FF random_element(const FieldPtr& F, std::mt19937_64& rng) {
  std::vector<uint64_t> c(F->k());
  for (auto& x : c) x = rng() % F->p();
  return FF::from_coeffs(F, c);
}

inline FPoly random_poly(const FieldPtr& F, int deg_below, std::mt19937_64& rng) {
  std::vector<FF> c;
  for (int i = 0; i < deg_below; ++i) c.push_back(random_element(F, rng));
  return FPoly(F, c);
}

// x^(q^e) mod f
inline FPoly frobenius_power_x(const FPoly& f, int e = 1) {
  FPoly r = FPoly::x(f.ctx()) % f;
  for (int i = 0; i < e; ++i) r = r.powmod(f.ctx()->order(), f);
  return r;
}

// inverse Frobenius on coefficients: c -> c^(q/p)
inline FF pth_root(const FF& c) {
  const auto& F = c.field();
  Integer e = F->order() / Integer(static_cast<unsigned long>(F->p()));
  return c.pow(e);
}

// square-free decomposition (f monic), returns (g_i, i) with f = prod g_i^i
inline std::vector<Factor> squarefree_decomposition(const FPoly& f0) {
  std::vector<Factor> out;
  FPoly f = f0.monic();
  if (f.deg() <= 0) return out;
  const auto& F = f.ctx();
  const long p = static_cast<long>(F->p());
  FPoly d = f.derivative();
  FPoly c = gcd(f, d);
  FPoly w = f / c;
  int i = 1;
  while (w.deg() > 0) {
    FPoly y = gcd(w, c);
    FPoly fac = w / y;
    if (fac.deg() > 0) out.push_back({fac.monic(), i});
    ++i;
    w = y;
    c = c / y;
  }
  if (c.deg() > 0) {
    // c is a p-th power
    std::vector<FF> rc;
    for (int k = 0; k <= c.deg(); k += static_cast<int>(p)) rc.push_back(pth_root(c.coeff(k)));
    for (auto& [g, j] : squarefree_decomposition(FPoly(F, rc))) out.push_back({g, j * static_cast<int>(p)});
  }
  return out;
}

// f squarefree monic: list of (product of all irreducible factors of degree d, d)
inline std::vector<std::pair<FPoly, int>> distinct_degree_factorization(FPoly f) {
  std::vector<std::pair<FPoly, int>> out;
  const auto ctx = f.ctx();
  FPoly x = FPoly::x(ctx);
  FPoly h = x % f;
  FPoly xq = frobenius_power_x(f);
  for (int d = 1; 2 * d <= f.deg(); ++d) {
    // compose h(xq) mod f, Horner
    FPoly nh(ctx);
    for (int i = h.deg(); i >= 0; --i) nh = (nh * xq + FPoly::constant(h.coeff(i))) % f;
    h = nh;
    FPoly g = gcd(f, h - x);
    if (g.deg() > 0) {
      out.push_back({g, d});
      f = f / g;
      h = h % f;
      xq = xq % f;
    }
  }
  if (f.deg() > 0) out.push_back({f.monic(), f.deg()});
  return out;
}

// f squarefree monic, all irreducible factors of degree d. Odd q only.
inline std::vector<FPoly> equal_degree_factorization(const FPoly& f, int d, std::mt19937_64& rng) {
  if (f.deg() == d) return {f.monic()};
  const auto& F = f.ctx();
  if (F->p() == 2) throw std::runtime_error("equal-degree splitting in characteristic 2 is not supported");
  Integer qd = 1;
  for (int i = 0; i < d; ++i) qd *= F->order();
  Integer e = (qd - 1) / 2;
  for (;;) {
    FPoly a = random_poly(F, f.deg(), rng);
    if (a.deg() <= 0) continue;
    FPoly b = a.powmod(e, f) - FPoly::constant(FF(F, 1L));
    FPoly g = gcd(f, b);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      auto l = equal_degree_factorization(g, d, rng);
      auto r = equal_degree_factorization(f / g, d, rng);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
  }
}

inline bool poly_less(const FPoly& a, const FPoly& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg();
  for (int i = a.deg(); i >= 0; --i) {
    auto x = a.coeff(i).index(), y = b.coeff(i).index();
    if (x != y) return x < y;
  }
  return false;
}

// full factorization into monic irreducibles with multiplicity, sorted
inline std::vector<Factor> factor(const FPoly& f, uint64_t seed = 0x5eed) {
  std::mt19937_64 rng(seed);
  std::vector<Factor> out;
  for (auto& [g, m] : squarefree_decomposition(f)) {
    for (auto& [h, d] : distinct_degree_factorization(g))
      for (auto& irr : equal_degree_factorization(h, d, rng)) out.push_back({irr, m});
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return poly_less(a.poly, b.poly); });
  return out;
}

inline int splitting_degree(const FPoly& f) {
  int l = 1;
  for (auto& [g, m] : squarefree_decomposition(f))
    for (auto& [h, d] : distinct_degree_factorization(g)) l = std::lcm(l, d);
  return l;
}

// roots in the coefficient field with multiplicities, sorted by element index
inline std::vector<std::pair<FF, int>> ff_roots(const FPoly& f, uint64_t seed = 0x5eed, uint64_t brute_limit = kBruteForceRootLimit) {
  if (f.is_zero()) throw std::invalid_argument("ff_roots of the zero polynomial");
  std::vector<std::pair<FF, int>> out;
  const auto& F = f.ctx();
  if (f.deg() == 0) return out;
  auto multiplicity = [&](const FF& r) {
    int m = 0;
    FPoly g = f, lin = FPoly::linear(r);
    for (;;) {
      auto [q, rem] = g.divrem(lin);
      if (!rem.is_zero()) break;
      ++m;
      g = q;
    }
    return m;
  };
  if (F->order_fits(brute_limit)) {
    const uint64_t n = F->order().get_ui();
    for (uint64_t i = 0; i < n; ++i) {
      FF x = FF::from_index(F, i);
      if (f.eval(x).is_zero()) out.push_back({x, multiplicity(x)});
    }
    return out;
  }
  FPoly m = f.monic();
  FPoly g = gcd(m, frobenius_power_x(m) - FPoly::x(F));
  std::mt19937_64 rng(seed);
  if (g.deg() > 0) {
    for (auto& lin : equal_degree_factorization(g, 1, rng)) {
      FF r = -lin.coeff(0);
      out.push_back({r, multiplicity(r)});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first.index() < b.first.index(); });
  return out;
}

// all square roots of a in F
inline std::vector<FF> ff_sqrt(const FF& a) {
  const auto& F = a.field();
  FPoly y2(F, {-a, FF(F, 0L), FF(F, 1L)});
  std::vector<FF> out;
  for (auto& [r, m] : ff_roots(y2)) out.push_back(r);
  return out;
}

// embedding of small into big (k_small | k_big): image of small's generator
struct FieldEmbedding {
  FieldPtr small, big;
  FF gen_image;
  FF operator()(const FF& x) const {
    if (small->k() == 1) return FF(big, static_cast<long>(x.coeff(0)));
    FF acc(big, 0L), pw(big, 1L);
    for (int i = 0; i < small->k(); ++i) {
      if (x.coeff(i)) acc += pw * FF(big, static_cast<long>(x.coeff(i)));
      pw *= gen_image;
    }
    return acc;
  }
};

inline FieldEmbedding make_embedding(const FieldPtr& small, const FieldPtr& big) {
  if (small->p() != big->p() || big->k() % small->k() != 0) throw InvariantViolation("no embedding " + small->name() + " -> " + big->name());
  if (small->k() == 1) return {small, big, FF(big, 0L)};
  std::vector<FF> c;
  for (auto v : small->modulus()) c.push_back(FF(big, static_cast<long>(v)));
  auto roots = ff_roots(FPoly(big, c));
  if (roots.empty()) throw InvariantViolation("modulus has no root in the larger field");
  return {small, big, roots.front().first};
}

}  // namespace hj
