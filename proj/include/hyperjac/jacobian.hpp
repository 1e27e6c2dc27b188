#pragma once

// Mumford/Cantor arithmetic on Jacobians of odd-degree models y^2 = h(x) over F_q,
// and the action of a correspondence on divisor classes.

#include "catalog.hpp"
#include "ff_poly.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>

namespace hj {

struct InvalidDivisor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LeadingDrop : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RequiresSplitModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EvenDegreeModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MumfordDivisor {
  FPoly u, v;
  bool is_identity() const { return u.deg() == 0; }
  friend bool operator==(const MumfordDivisor& a, const MumfordDivisor& b) { return a.u == b.u && a.v == b.v; }
  std::string str() const { return "(" + u.str() + ", " + v.str() + ")"; }
};

// elements of an extension fixed by the q-Frobenius pulled back to the base field
class Descent {
 public:
  Descent(FieldEmbedding emb) : emb_(std::move(emb)) {
    const int k = emb_.small->k(), K = emb_.big->k();
    const uint64_t p = emb_.small->p();
    // columns: images of 1, g, ..., g^(k-1)
    rows_.assign(K, std::vector<uint64_t>(k + 1, 0));
    FF pw(emb_.small, 1L), g = FF::generator(emb_.small);
    for (int i = 0; i < k; ++i) {
      FF img = emb_(pw);
      for (int r = 0; r < K; ++r) rows_[r][i] = img.coeff(r);
      pw *= g;
    }
    p_ = p;
    k_ = k;
  }
  const FieldEmbedding& embedding() const { return emb_; }

  FF operator()(const FF& x) const {
    const int K = emb_.big->k();
    if (k_ == 1) {
      if (!x.in_prime_field()) throw InvariantViolation("element does not descend");
      return FF(emb_.small, static_cast<long>(x.coeff(0)));
    }
    auto m = rows_;
    for (int r = 0; r < K; ++r) m[r][k_] = x.coeff(r);
    // Gaussian elimination mod p
    int row = 0;
    std::vector<int> piv;
    for (int c = 0; c < k_ && row < K; ++c) {
      int pr = row;
      while (pr < K && m[pr][c] == 0) ++pr;
      if (pr == K) continue;
      std::swap(m[pr], m[row]);
      uint64_t inv = modp::inv(m[row][c], p_);
      for (auto& e : m[row]) e = e * inv % p_;
      for (int r = 0; r < K; ++r) {
        if (r == row || m[r][c] == 0) continue;
        uint64_t f = m[r][c];
        for (int j = 0; j <= k_; ++j) m[r][j] = (m[r][j] + p_ * p_ - f * m[row][j]) % p_;
      }
      piv.push_back(c);
      ++row;
    }
    for (int r = row; r < K; ++r)
      if (m[r][k_] != 0) throw InvariantViolation("element does not descend");
    std::vector<uint64_t> c(k_, 0);
    for (int i = 0; i < row; ++i) c[piv[i]] = m[i][k_];
    return FF::from_coeffs(emb_.small, c);
  }

 private:
  FieldEmbedding emb_;
  std::vector<std::vector<uint64_t>> rows_;
  uint64_t p_ = 2;
  int k_ = 1;
};

class JacobianCtx;
using JacPtr = std::shared_ptr<const JacobianCtx>;

class JacobianCtx : public std::enable_shared_from_this<JacobianCtx> {
 public:
  static JacPtr make(const FPoly& h) {
    if (h.deg() < 3) throw InvariantViolation("genus 0 model");
    if (h.deg() % 2 == 0) throw EvenDegreeModel("even-degree models are not supported by divisor arithmetic");
    if (gcd(h, h.derivative()).deg() > 0) throw OnDiscriminantLocus("h is not squarefree");
    auto j = std::shared_ptr<JacobianCtx>(new JacobianCtx());
    j->h_ = h;
    j->g_ = (h.deg() - 1) / 2;
    return j;
  }
  static JacPtr make(const MPoly<FF>& h) { return make(h.to_upoly(X)); }

  const FPoly& h() const { return h_; }
  int genus() const { return g_; }
  const FieldPtr& field() const { return h_.ctx(); }

  MumfordDivisor identity() const { return {FPoly::constant(FF(field(), 1L)), FPoly(field())}; }

  bool is_valid(const MumfordDivisor& D) const {
    if (D.u.is_zero() || !D.u.lc().is_one()) return false;
    if (D.u.deg() > g_) return false;
    if (D.v.deg() >= std::max(D.u.deg(), 0) && !(D.u.deg() == 0 && D.v.is_zero())) return false;
    return ((D.v * D.v - h_) % D.u).is_zero();
  }

  MumfordDivisor negate(const MumfordDivisor& D) const { return {D.u, -D.v}; }

  // Cantor composition followed by reduction; works for any (u, v) with u | v^2 - h
  MumfordDivisor add(const MumfordDivisor& a, const MumfordDivisor& b) const {
    auto [d1, e1, e2] = xgcd(a.u, b.u);
    auto [d, c1, c2] = xgcd(d1, a.v + b.v);
    FPoly s1 = c1 * e1, s2 = c1 * e2, s3 = c2;
    FPoly u = (a.u * b.u) / (d * d);
    FPoly v = ((s1 * a.u * b.v + s2 * b.u * a.v + s3 * (a.v * b.v + h_)) / d) % u;
    return reduce({u, v});
  }

  MumfordDivisor reduce(MumfordDivisor D) const {
    if (D.u.is_zero()) throw InvalidDivisor("zero u");
    while (D.u.deg() > g_) {
      FPoly u2 = (h_ - D.v * D.v) / D.u;
      FPoly v2 = (-D.v) % u2;
      D = {u2, v2};
    }
    FF li = D.u.lc().inv();
    D.u = D.u.scaled(li);
    D.v = D.v % D.u;
    return D;
  }

  MumfordDivisor scalar_mul(const MumfordDivisor& D, Integer m) const {
    MumfordDivisor base = m < 0 ? negate(D) : D;
    if (m < 0) m = -m;
    MumfordDivisor acc = identity();
    size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    if (m == 0) return acc;
    for (size_t i = bits; i-- > 0;) {
      acc = add(acc, acc);
      if (mpz_tstbit(m.get_mpz_t(), i)) acc = add(acc, base);
    }
    return acc;
  }

  // same curve over an extension of degree e of the base field
  struct Extension {
    FieldPtr field;
    Descent descent;
    JacPtr jac;
  };
  const Extension& extension(int e) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = ext_.find(e);
    if (it != ext_.end()) return *it->second;
    auto F = field();
    auto big = e == 1 ? F : FiniteField::make(F->p(), F->k() * e);
    auto emb = e == 1 ? FieldEmbedding{F, F, FF::generator(F)} : make_embedding(F, big);
    JacPtr J = e == 1 ? shared_from_this() : make(h_.map([&](const FF& c) { return emb(c); }).rebase(big));
    auto x = std::make_unique<Extension>(Extension{big, Descent(emb), J});
    return *ext_.emplace(e, std::move(x)).first->second;
  }

  // coefficient-wise q-Frobenius where q is this field's size, applied in an extension
  static FPoly frobenius(const FPoly& a, const Integer& q) {
    return a.map([&](const FF& c) { return c.pow(q); });
  }

  // sum of the Galois orbit of D (defined over the degree-e extension), as a class over this field
  MumfordDivisor orbit_sum(const MumfordDivisor& D, int e) const {
    if (e == 1) return reduce(D);
    const auto& ext = extension(e);
    const Integer& q = field()->order();
    MumfordDivisor acc = ext.jac->identity(), cur = D;
    for (int k = 0; k < e; ++k) {
      acc = ext.jac->add(acc, cur);
      cur = {frobenius(cur.u, q), frobenius(cur.v, q)};
    }
    auto down = [&](const FPoly& p) {
      std::vector<FF> c;
      for (int i = 0; i <= p.deg(); ++i) c.push_back(ext.descent(p.coeff(i)));
      return FPoly(field(), c);
    };
    return {down(acc.u), down(acc.v)};
  }

 private:
  JacobianCtx() = default;
  FPoly h_;
  int g_ = 0;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Extension>> ext_;
};

// ---------- sampling ----------

inline MumfordDivisor random_divisor(const JacobianCtx& J, std::mt19937_64& rng) {
  const auto& F = J.field();
  const int g = J.genus();
  for (;;) {
    std::vector<FF> c;
    for (int i = 0; i < g; ++i) c.push_back(random_element(F, rng));
    c.push_back(FF(F, 1L));
    FPoly u(F, c);
    if (gcd(u, u.derivative()).deg() > 0) continue;
    MumfordDivisor acc = J.identity();
    bool ok = true;
    for (auto& fac : factor(u, rng())) {
      int e = fac.poly.deg();
      const auto& ext = J.extension(e);
      const auto& emb = ext.descent.embedding();
      FPoly w = fac.poly.map([&](const FF& x) { return emb(x); }).rebase(ext.field);
      auto roots = ff_roots(w, rng());
      if (roots.empty()) throw InvariantViolation("irreducible factor has no root in its splitting field");
      FF a = roots.front().first;
      FF h_a = ext.jac->h().eval(a);
      auto sq = ff_sqrt(h_a);
      if (sq.empty()) {
        ok = false;
        break;
      }
      FF b = sq[rng() % sq.size()];
      MumfordDivisor P{FPoly::linear(a), FPoly::constant(b)};
      acc = J.add(acc, J.orbit_sum(P, e));
    }
    if (ok) return acc;
  }
}

inline MumfordDivisor random_divisor(const JacobianCtx& J, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_divisor(J, rng);
}

inline MumfordDivisor two_torsion_class(const JacobianCtx& J, int i) {
  auto roots = ff_roots(J.h());
  if (static_cast<int>(roots.size()) != J.h().deg()) throw RequiresSplitModel("h does not split over " + J.field()->name());
  if (i < 1 || i > 2 * J.genus()) throw std::out_of_range("two-torsion index out of range");
  return {FPoly::linear(roots[i - 1].first), FPoly(J.field())};
}

// ---------- correspondences ----------

// A(a, x2) over the field of a, where A has coefficients in the base field
inline FPoly specialize_x1(const MPoly<FF>& A, const FF& a, const FieldEmbedding& emb) {
  const auto& big = a.field();
  std::vector<FF> c(std::max(A.degree(X2), 0) + 1, FF(big, 0L));
  for (auto& [m, k] : A.terms()) c[m[X2]] += emb(k) * a.pow(static_cast<unsigned long>(m[X1]));
  return FPoly(big, c);
}

// divisor class on Y of the pushforward of the pullback of D (= effective part minus deg(u) infinity)
inline MumfordDivisor apply_correspondence(const JacobianCtx& JX, const JacobianCtx& JY, const MPoly<FF>& A, const MumfordDivisor& D) {
  if (!JX.is_valid(D)) throw InvalidDivisor("input divisor is not valid on the domain");
  MumfordDivisor acc = JY.identity();
  if (D.is_identity()) return acc;
  const int dA = A.degree(X2);
  for (auto& fac : factor(D.u)) {
    int e = fac.poly.deg();
    const auto& extX = JX.extension(e);
    const auto& extY = JY.extension(e);
    const auto& emb = extX.descent.embedding();
    FPoly w = fac.poly.map([&](const FF& x) { return emb(x); }).rebase(extX.field);
    FF a = ff_roots(w).front().first;
    FF b = D.v.map([&](const FF& x) { return emb(x); }).rebase(extX.field).eval(a);
    FPoly ua = specialize_x1(A, a, emb);
    if (ua.deg() != dA) throw LeadingDrop("A(a, x2) drops degree at a point of the support");
    FPoly uY = ua.monic();
    MumfordDivisor img{uY, FPoly::constant(b)};
    if (!((img.v * img.v - extY.jac->h()) % img.u).is_zero()) throw InvariantViolation("image is not on the codomain curve");
    MumfordDivisor s = JY.orbit_sum(img, e);
    acc = JY.add(acc, JY.scalar_mul(s, fac.mult));
  }
  return acc;
}

inline MumfordDivisor apply_correspondence(const FCorrespondence& c, const JacobianCtx& JX, const JacobianCtx& JY, const MumfordDivisor& D) {
  return apply_correspondence(JX, JY, c.A, D);
}

// ---------- toy oracles ----------

// #X(F_q) for y^2 = h, odd degree: affine points plus one at infinity. Small fields only.
inline uint64_t count_points(const FPoly& h) {
  const auto& F = h.ctx();
  if (!F->order_fits(1u << 22)) throw std::invalid_argument("field too large for point counting");
  const uint64_t n = F->order().get_ui();
  Integer half = (F->order() - 1) / 2;
  uint64_t count = 1;
  for (uint64_t i = 0; i < n; ++i) {
    FF y2 = h.eval(FF::from_index(F, i));
    if (y2.is_zero()) count += 1;
    else if (y2.pow(half).is_one()) count += 2;
  }
  return count;
}

// #J(F_q) for genus <= 2 from point counts over F_q and F_q^2
inline Integer jacobian_order_bruteforce(const FPoly& h) {
  const auto& F = h.ctx();
  const int g = (h.deg() - 1) / 2;
  const Integer q = F->order();
  Integer N1 = count_points(h);
  Integer c1 = N1 - q - 1;
  if (g == 1) return 1 + c1 + q;
  if (g != 2) throw std::invalid_argument("oracle covers genus 1 and 2");
  auto big = FiniteField::make(F->p(), 2 * F->k());
  auto emb = make_embedding(F, big);
  Integer N2 = count_points(h.map([&](const FF& c) { return emb(c); }).rebase(big));
  Integer s2 = q * q + 1 - N2;  // sum of alpha^2
  Integer c2 = (c1 * c1 - s2) / 2;
  return 1 + c1 + c2 + q * c1 + q * q;
}

}  // namespace hj
