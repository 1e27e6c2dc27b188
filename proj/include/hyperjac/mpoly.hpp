#pragma once

// Sparse multivariate polynomials over a field type C, in the fixed
// variables x, x1, x2, t, s, s1, s2. Terms kept in graded-lex order.

#include "rational.hpp"
#include "upoly.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hj {

enum Var : int { X = 0, X1, X2, T, S, S1, S2 };
inline constexpr int kNumVars = 7;
inline const std::array<const char*, kNumVars> kVarNames = {"x", "x1", "x2", "t", "s", "s1", "s2"};

inline Var parse_var(const std::string& s) {
  for (int i = 0; i < kNumVars; ++i)
    if (s == kVarNames[i]) return static_cast<Var>(i);
  throw ParseError("unknown variable '" + s + "'");
}

using Mono = std::array<uint16_t, kNumVars>;

inline int mono_degree(const Mono& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

// descending graded-lex: larger monomials first
struct GrlexGreater {
  bool operator()(const Mono& a, const Mono& b) const {
    int da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

inline Mono mono_var(Var v, int e = 1) {
  Mono m{};
  m[v] = static_cast<uint16_t>(e);
  return m;
}
inline Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r;
  for (int i = 0; i < kNumVars; ++i) r[i] = static_cast<uint16_t>(a[i] + b[i]);
  return r;
}
inline bool mono_divides(const Mono& a, const Mono& b) {
  for (int i = 0; i < kNumVars; ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline Mono mono_div(const Mono& b, const Mono& a) {
  Mono r;
  for (int i = 0; i < kNumVars; ++i) r[i] = static_cast<uint16_t>(b[i] - a[i]);
  return r;
}
inline std::string mono_str(const Mono& m) {
  std::string s;
  for (int i = 0; i < kNumVars; ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += "*";
    s += kVarNames[i];
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

struct NonUnitLeadingCoefficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MultivariateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InexactDivision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class C>
class MPoly {
 public:
  using ctx_type = typename C::ctx_type;
  using Terms = std::map<Mono, C, GrlexGreater>;

  MPoly() = default;
  explicit MPoly(ctx_type ctx) : ctx_(std::move(ctx)) {}
  MPoly(const C& c) : ctx_(c.ctx()) {  // NOLINT: constants promote
    if (!c.is_zero()) t_.emplace(Mono{}, c);
  }
  static MPoly constant(const ctx_type& ctx, long v) { return MPoly(C::from_int(ctx, v)); }
  static MPoly var(const ctx_type& ctx, Var v, int e = 1) {
    MPoly r(ctx);
    r.t_.emplace(mono_var(v, e), C::from_int(ctx, 1));
    return r;
  }
  static MPoly term(const C& c, const Mono& m) {
    MPoly r(c.ctx());
    if (!c.is_zero()) r.t_.emplace(m, c);
    return r;
  }

  const ctx_type& ctx() const { return ctx_; }
  const Terms& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && mono_degree(t_.begin()->first) == 0); }
  C constant_term() const {
    auto it = t_.find(Mono{});
    return it == t_.end() ? zero() : it->second;
  }
  C coeff(const Mono& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? zero() : it->second;
  }
  C zero() const { return C::from_int(ctx_, 0); }
  C one() const { return C::from_int(ctx_, 1); }

  void add_term(const Mono& m, const C& c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  int degree(Var v) const {
    int d = t_.empty() ? -1 : 0;
    for (auto& [m, c] : t_) d = std::max<int>(d, m[v]);
    return d;
  }
  int total_degree() const {
    int d = t_.empty() ? -1 : 0;
    for (auto& [m, c] : t_) d = std::max(d, mono_degree(m));
    return d;
  }
  bool uses(Var v) const {
    for (auto& [m, c] : t_)
      if (m[v]) return true;
    return false;
  }
  std::vector<Var> variables() const {
    std::vector<Var> out;
    for (int i = 0; i < kNumVars; ++i)
      if (uses(static_cast<Var>(i))) out.push_back(static_cast<Var>(i));
    return out;
  }

  // coefficient of v^d, as a polynomial in the other variables
  MPoly coeff_in(Var v, int d) const {
    MPoly r(ctx_);
    for (auto& [m, c] : t_)
      if (m[v] == d) {
        Mono mm = m;
        mm[v] = 0;
        r.t_.emplace(mm, c);
      }
    return r;
  }
  MPoly lc_in(Var v) const { return coeff_in(v, degree(v)); }
  // homogeneous part of total degree d in the given variables
  MPoly homogeneous_part(const std::vector<Var>& vars, int d) const {
    MPoly r(ctx_);
    for (auto& [m, c] : t_) {
      int s = 0;
      for (auto v : vars) s += m[v];
      if (s == d) r.t_.emplace(m, c);
    }
    return r;
  }

  MPoly& operator+=(const MPoly& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    if (!ctx_) ctx_ = o.ctx_;
    for (auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(a.ctx_ ? a.ctx_ : b.ctx_);
    if (a.t_.size() > b.t_.size()) return b * a;
    for (auto& [ma, ca] : a.t_) {
      MPoly part(r.ctx_);
      for (auto& [mb, cb] : b.t_) {
        C c = ca * cb;
        if (!c.is_zero()) part.t_.emplace_hint(part.t_.end(), mono_mul(ma, mb), std::move(c));
      }
      r += part;
    }
    return r;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  MPoly scaled(const C& s) const {
    MPoly r(ctx_);
    if (s.is_zero()) return r;
    for (auto& [m, c] : t_) r.t_.emplace_hint(r.t_.end(), m, c * s);
    return r;
  }
  MPoly shifted(const Mono& mono) const {
    MPoly r(ctx_);
    for (auto& [m, c] : t_) r.t_.emplace(mono_mul(m, mono), c);
    return r;
  }
  MPoly pow(unsigned e) const {
    MPoly r = constant(ctx_, 1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  MPoly derivative(Var v) const {
    MPoly r(ctx_);
    for (auto& [m, c] : t_) {
      if (!m[v]) continue;
      Mono mm = m;
      mm[v]--;
      r.add_term(mm, c * C::from_int(ctx_, m[v]));
    }
    return r;
  }

  template <class F>
  MPoly map_coeffs(F&& f) const {
    MPoly r(ctx_);
    for (auto& [m, c] : t_) r.add_term(m, f(c));
    return r;
  }
  // change of coefficient type (e.g. reduction mod p)
  template <class D, class F>
  MPoly<D> convert(const typename D::ctx_type& ctx, F&& f) const {
    MPoly<D> r(ctx);
    for (auto& [m, c] : t_) r.add_term(m, f(c));
    return r;
  }

  // rename variables: perm[i] is where variable i goes
  MPoly rename(const std::map<Var, Var>& perm) const {
    MPoly r(ctx_);
    for (auto& [m, c] : t_) {
      Mono mm{};
      for (int i = 0; i < kNumVars; ++i) {
        auto it = perm.find(static_cast<Var>(i));
        int to = it == perm.end() ? i : it->second;
        mm[to] = static_cast<uint16_t>(mm[to] + m[i]);
      }
      r.add_term(mm, c);
    }
    return r;
  }
  MPoly swap_vars(Var a, Var b) const { return rename({{a, b}, {b, a}}); }

  // simultaneous substitution
  MPoly substitute(const std::map<Var, MPoly>& bind) const {
    std::map<std::pair<int, int>, MPoly> cache;
    std::function<const MPoly&(Var, int)> power = [&](Var v, int e) -> const MPoly& {
      auto key = std::make_pair(static_cast<int>(v), e);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      MPoly val = e == 1 ? bind.at(v) : power(v, e - 1) * bind.at(v);
      return cache.emplace(key, std::move(val)).first->second;
    };
    MPoly r(ctx_);
    for (auto& [m, c] : t_) {
      Mono rest = m;
      MPoly part = term(c, Mono{});
      for (auto& [v, img] : bind) {
        if (!m[v]) continue;
        rest[v] = 0;
        part = part * power(v, m[v]);
      }
      r += part.shifted(rest);
    }
    return r;
  }
  MPoly substitute(Var v, const MPoly& img) const { return substitute(std::map<Var, MPoly>{{v, img}}); }
  MPoly substitute(Var v, const C& val) const { return substitute(v, MPoly(val)); }

  C eval_constant() const {
    if (!is_constant()) throw MultivariateInput("polynomial is not constant");
    return constant_term();
  }

  // view as univariate in v with constant coefficients
  UPoly<C> to_upoly(Var v) const {
    std::vector<C> c(std::max(degree(v) + 1, 0), zero());
    for (auto& [m, k] : t_) {
      for (int i = 0; i < kNumVars; ++i)
        if (i != v && m[i]) throw MultivariateInput("polynomial uses " + std::string(kVarNames[i]) + " besides " + kVarNames[v]);
      c[m[v]] = k;
    }
    return UPoly<C>(ctx_, std::move(c));
  }
  static MPoly from_upoly(const UPoly<C>& u, Var v) {
    MPoly r(u.ctx());
    for (int i = 0; i <= u.deg(); ++i) r.add_term(mono_var(v, i), u.coeff(i));
    return r;
  }

  // a = q b + r with deg_v r < deg_v b; lc_v(b) must be a nonzero constant
  std::pair<MPoly, MPoly> divrem(const MPoly& b, Var v) const {
    if (b.is_zero()) throw DivisionByZero();
    const int db = b.degree(v);
    MPoly lcb = b.coeff_in(v, db);
    if (!lcb.is_constant()) throw NonUnitLeadingCoefficient("leading coefficient in " + std::string(kVarNames[v]) + " is not a constant");
    C li = lcb.constant_term().inv();
    MPoly q(ctx_), r = *this;
    for (;;) {
      int dr = r.degree(v);
      if (dr < db) break;
      MPoly top = r.coeff_in(v, dr).scaled(li).shifted(mono_var(v, dr - db));
      q += top;
      r -= top * b;
    }
    return {q, r};
  }

  // exact division in K[vars] by leading-term reduction; throws if inexact
  MPoly exact_div(const MPoly& b) const {
    if (b.is_zero()) throw DivisionByZero();
    const auto& [lm, lcoef] = *b.t_.begin();
    C li = lcoef.inv();
    MPoly q(ctx_), r = *this;
    while (!r.is_zero()) {
      const auto& [rm, rc] = *r.t_.begin();
      if (!mono_divides(lm, rm)) throw InexactDivision("exact division failed at " + mono_str(rm));
      MPoly qt = term(rc * li, mono_div(rm, lm));
      q += qt;
      r -= qt * b;
    }
    return q;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto& [m, c] : t_) {
      if (!s.empty()) s += " + ";
      s += c.str();
      if (mono_degree(m)) s += "*" + mono_str(m);
    }
    return s;
  }

 private:
  ctx_type ctx_;
  Terms t_;
};

// Sylvester matrix of a, b in variable v (rows of a's coefficients then b's)
template <class R>
std::vector<std::vector<R>> sylvester(const std::vector<R>& a, const std::vector<R>& b, const R& zero) {
  // a, b given high..low
  const size_t m = a.size() - 1, n = b.size() - 1;
  std::vector<std::vector<R>> s(m + n, std::vector<R>(m + n, zero));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j <= m; ++j) s[i][i + j] = a[j];
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= n; ++j) s[n + i][i + j] = b[j];
  return s;
}

// Res_v(a, b) as det of the Sylvester matrix
template <class C>
MPoly<C> resultant(const MPoly<C>& a, const MPoly<C>& b, Var v) {
  const int da = a.degree(v), db = b.degree(v);
  if (da < 0 || db < 0) throw std::invalid_argument("resultant of zero polynomial");
  const auto& ctx = a.ctx();
  MPoly<C> zero(ctx);
  if (da == 0 && db == 0) return MPoly<C>::constant(ctx, 1);
  std::vector<MPoly<C>> ca, cb;
  for (int i = da; i >= 0; --i) ca.push_back(a.coeff_in(v, i));
  for (int i = db; i >= 0; --i) cb.push_back(b.coeff_in(v, i));
  auto s = sylvester(ca, cb, zero);
  MPoly<C> one = MPoly<C>::constant(ctx, 1);
  const size_t n = s.size();
  MPoly<C> prev = one;
  bool neg = false;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (s[k][k].is_zero()) {
      size_t piv = k + 1;
      while (piv < n && s[piv][k].is_zero()) ++piv;
      if (piv == n) return zero;
      std::swap(s[piv], s[k]);
      neg = !neg;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) s[i][j] = (s[k][k] * s[i][j] - s[i][k] * s[k][j]).exact_div(prev);
    prev = s[k][k];
  }
  MPoly<C> d = s[n - 1][n - 1];
  return neg ? -d : d;
}

// disc = (-1)^(n(n-1)/2) Res(a, a') / lc(a)
template <class C>
MPoly<C> discriminant(const MPoly<C>& a, Var v) {
  const int n = a.degree(v);
  if (n < 1) throw std::invalid_argument("discriminant needs positive degree");
  MPoly<C> lc = a.lc_in(v);
  if (!lc.is_constant()) throw NonUnitLeadingCoefficient("discriminant needs a constant leading coefficient");
  MPoly<C> r = resultant(a, a.derivative(v), v);
  r = r.scaled(lc.constant_term().inv());
  if ((static_cast<long>(n) * (n - 1) / 2) % 2) r = -r;
  return r;
}

// monic gcd of two polynomials in a single common variable
template <class C>
MPoly<C> poly_gcd(const MPoly<C>& a, const MPoly<C>& b) {
  auto va = a.variables(), vb = b.variables();
  std::vector<Var> all = va;
  for (auto v : vb)
    if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
  if (all.size() > 1) throw MultivariateInput("gcd needs univariate inputs");
  Var v = all.empty() ? X : all[0];
  return MPoly<C>::from_upoly(gcd(a.to_upoly(v), b.to_upoly(v)), v);
}

}  // namespace hj
