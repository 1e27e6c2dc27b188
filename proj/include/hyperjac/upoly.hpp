#pragma once

// Dense univariate polynomials over a field type C (NF or FF).

#include "rational.hpp"

#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace hj {

template <class C>
class UPoly {
 public:
  using ctx_type = typename C::ctx_type;

  UPoly() = default;
  explicit UPoly(ctx_type ctx) : ctx_(std::move(ctx)) {}
  UPoly(ctx_type ctx, std::vector<C> c) : ctx_(std::move(ctx)), c_(std::move(c)) { trim(); }
  static UPoly constant(const C& c) { return UPoly(c.ctx(), {c}); }
  static UPoly x(const ctx_type& ctx) { return UPoly(ctx, {C::from_int(ctx, 0), C::from_int(ctx, 1)}); }
  // x - a
  static UPoly linear(const C& a) { return UPoly(a.ctx(), {-a, C::from_int(a.ctx(), 1)}); }
  static UPoly monomial(const C& c, int d) {
    std::vector<C> v(d + 1, C::from_int(c.ctx(), 0));
    v[d] = c;
    return UPoly(c.ctx(), std::move(v));
  }

  const ctx_type& ctx() const { return ctx_; }
  int deg() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<C>& coeffs() const { return c_; }
  C coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : zero(); }
  C lc() const { return c_.empty() ? zero() : c_.back(); }
  C zero() const { return C::from_int(ctx_, 0); }
  C one() const { return C::from_int(ctx_, 1); }
  void set_coeff(int i, const C& v) {
    if (i >= static_cast<int>(c_.size())) c_.resize(i + 1, zero());
    c_[i] = v;
    trim();
  }

  UPoly& operator+=(const UPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), zero());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  UPoly& operator-=(const UPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), zero());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  UPoly operator-() const {
    UPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly(a.ctx_);
    std::vector<C> r(a.c_.size() + b.c_.size() - 1, a.zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(a.ctx_, std::move(r));
  }
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
  UPoly scaled(const C& s) const {
    UPoly r = *this;
    for (auto& x : r.c_) x *= s;
    r.trim();
    return r;
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

  // a = q b + r
  std::pair<UPoly, UPoly> divrem(const UPoly& b) const {
    if (b.is_zero()) throw DivisionByZero();
    UPoly r = *this;
    if (deg() < b.deg()) return {UPoly(ctx_), r};
    std::vector<C> q(deg() - b.deg() + 1, zero());
    C li = b.lc().inv();
    while (!r.is_zero() && r.deg() >= b.deg()) {
      int sh = r.deg() - b.deg();
      C c = r.lc() * li;
      q[sh] = c;
      for (int i = 0; i <= b.deg(); ++i) r.c_[sh + i] -= c * b.c_[i];
      r.trim();
    }
    return {UPoly(ctx_, std::move(q)), r};
  }
  UPoly operator%(const UPoly& b) const { return divrem(b).second; }
  UPoly operator/(const UPoly& b) const { return divrem(b).first; }

  UPoly monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inv());
  }
  UPoly derivative() const {
    if (c_.size() <= 1) return UPoly(ctx_);
    std::vector<C> r;
    for (size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * C::from_int(ctx_, static_cast<long>(i)));
    return UPoly(ctx_, std::move(r));
  }
  C eval(const C& x) const {
    C acc = zero();
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }
  template <class F>
  UPoly map(F&& f) const {
    std::vector<C> r;
    for (auto& x : c_) r.push_back(f(x));
    return UPoly(ctx_, std::move(r));
  }

  // same coefficients, context replaced (after map into a larger field)
  UPoly rebase(const ctx_type& ctx) const { return UPoly(ctx, c_); }

  // this^e mod m
  UPoly powmod(const Integer& e, const UPoly& m) const {
    UPoly r = UPoly::constant(one()) % m, b = *this % m;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (size_t i = bits; i-- > 0;) {
      r = (r * r) % m;
      if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b) % m;
    }
    return r;
  }

  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = deg(); i >= 0; --i) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].str() + ")";
      if (i > 0) s += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  ctx_type ctx_;
  std::vector<C> c_;
};

template <class C>
UPoly<C> gcd(UPoly<C> a, UPoly<C> b) {
  while (!b.is_zero()) {
    a = a % b;
    std::swap(a, b);
  }
  return a.monic();
}

// extended gcd: returns (g, s, t) with s a + t b = g, g monic
template <class C>
std::tuple<UPoly<C>, UPoly<C>, UPoly<C>> xgcd(UPoly<C> a, UPoly<C> b) {
  auto ctx = a.ctx();
  UPoly<C> s0 = UPoly<C>::constant(C::from_int(ctx, 1)), s1(ctx), t0(ctx), t1 = UPoly<C>::constant(C::from_int(ctx, 1));
  while (!b.is_zero()) {
    auto [q, r] = a.divrem(b);
    a = b;
    b = r;
    auto s2 = s0 - q * s1;
    auto t2 = t0 - q * t1;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  if (a.is_zero()) return {a, s0, t0};
  C li = a.lc().inv();
  return {a.scaled(li), s0.scaled(li), t0.scaled(li)};
}

}  // namespace hj
