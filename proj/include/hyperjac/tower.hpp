#pragma once

// Number-field towers Q(g0)(g1)... kept in tower form, with an involution.

#include "rational.hpp"

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hj {

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

class FieldTower {
 public:
  struct Gen {
    std::string name;
    int degree = 1;
    std::vector<std::vector<Rational>> minpoly;  // low..deg-1, monic term implied
    std::vector<Rational> sigma;                 // image of the generator
  };

  // Two phases: declare generators, then fill minpolys/sigma, then build().
  static TowerPtr rationals() {
    auto t = std::make_shared<FieldTower>();
    t->build();
    return t;
  }

  void add_generator(std::string name, int degree) {
    if (degree < 1) throw InvariantViolation("generator degree must be >= 1");
    gens_.push_back({std::move(name), degree, {}, {}});
  }
  int size() const { return size_; }
  int num_gens() const { return static_cast<int>(gens_.size()); }
  const Gen& gen(int i) const { return gens_[i]; }
  int gen_index(const std::string& name) const {
    for (int i = 0; i < num_gens(); ++i)
      if (gens_[i].name == name) return i;
    return -1;
  }
  int declared_size() const {
    int n = 1;
    for (auto& g : gens_) n *= g.degree;
    return n;
  }
  void set_minpoly(int i, std::vector<std::vector<Rational>> coeffs) { gens_[i].minpoly = std::move(coeffs); }
  void set_sigma(int i, std::vector<Rational> img) { gens_[i].sigma = std::move(img); }

  // exponent vector of basis index
  std::vector<int> exponents(int idx) const {
    std::vector<int> e(gens_.size());
    for (size_t j = 0; j < gens_.size(); ++j) {
      e[j] = idx % gens_[j].degree;
      idx /= gens_[j].degree;
    }
    return e;
  }
  int index_of(const std::vector<int>& e) const {
    int idx = 0, mul = 1;
    for (size_t j = 0; j < gens_.size(); ++j) {
      idx += e[j] * mul;
      mul *= gens_[j].degree;
    }
    return idx;
  }

  const std::vector<std::pair<int, Rational>>& product(int i, int j) const { return mult_[i * size_ + j]; }
  const std::vector<std::vector<Rational>>& sigma_matrix() const { return sigma_mat_; }

  std::vector<Rational> generator_element(int j) const {
    std::vector<Rational> c(size_);
    if (gens_[j].degree == 1) {
      for (int b = 0; b < size_; ++b) c[b] = -gens_[j].minpoly[0][b];
      return c;
    }
    std::vector<int> e(gens_.size(), 0);
    e[j] = 1;
    c[index_of(e)] = 1;
    return c;
  }

  void build();

 private:
  std::vector<Rational> reduce_raw(std::map<std::vector<int>, Rational> raw) const;

  std::vector<Gen> gens_;
  int size_ = 1;
  std::vector<std::vector<std::pair<int, Rational>>> mult_;
  std::vector<std::vector<Rational>> sigma_mat_;  // column b = sigma(basis b)
};

// Element of a tower, coefficient vector on the monomial basis.
class NF {
 public:
  using ctx_type = TowerPtr;

  NF() = default;
  NF(TowerPtr t, long v) : t_(std::move(t)), c_(t_->size()) { c_[0] = v; }
  NF(TowerPtr t, const Rational& v) : t_(std::move(t)), c_(t_->size()) {
    c_[0] = v;
    c_[0].canonicalize();
  }
  NF(TowerPtr t, std::vector<Rational> c) : t_(std::move(t)), c_(std::move(c)) {
    if (static_cast<int>(c_.size()) != t_->size()) throw InvariantViolation("element length != tower degree");
    for (auto& x : c_) x.canonicalize();
  }
  static NF from_int(const TowerPtr& t, long v) { return NF(t, v); }
  static NF generator(const TowerPtr& t, const std::string& name) {
    int g = t->gen_index(name);
    if (g < 0) throw InvariantViolation("unknown generator " + name);
    return NF(t, t->generator_element(g));
  }

  const TowerPtr& ctx() const { return t_; }
  const TowerPtr& tower() const { return t_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& coeff(int i) const { return c_[i]; }

  bool is_zero() const {
    for (auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  NF& operator+=(const NF& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  NF& operator-=(const NF& o) {
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  NF operator-() const {
    NF r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend NF operator+(NF a, const NF& b) { return a += b; }
  friend NF operator-(NF a, const NF& b) { return a -= b; }
  friend NF operator*(const NF& a, const NF& b) {
    const int n = a.t_->size();
    NF r(a.t_, std::vector<Rational>(n));
    if (n == 1) {
      r.c_[0] = a.c_[0] * b.c_[0];
      return r;
    }
    Rational tmp;
    for (int i = 0; i < n; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (b.c_[j] == 0) continue;
        tmp = a.c_[i] * b.c_[j];
        for (auto& [k, v] : a.t_->product(i, j)) r.c_[k] += tmp * v;
      }
    }
    return r;
  }
  NF& operator*=(const NF& o) { return *this = *this * o; }
  NF& operator*=(const Rational& q) {
    for (auto& x : c_) x *= q;
    return *this;
  }
  friend NF operator*(NF a, const Rational& q) { return a *= q; }
  friend NF operator*(const Rational& q, NF a) { return a *= q; }
  friend NF operator/(const NF& a, const NF& b) { return a * b.inv(); }
  NF& operator/=(const NF& o) { return *this = *this / o; }
  friend bool operator==(const NF& a, const NF& b) { return a.c_ == b.c_; }
  friend bool operator!=(const NF& a, const NF& b) { return !(a == b); }

  // regular representation: column j = this * basis_j
  std::vector<std::vector<Rational>> mult_matrix() const {
    const int n = t_->size();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (c_[i] == 0) continue;
        for (auto& [k, v] : t_->product(i, j)) m[k][j] += c_[i] * v;
      }
    return m;
  }

  NF inv() const;
  NF conj() const {
    const int n = t_->size();
    NF r(t_, std::vector<Rational>(n));
    auto& s = t_->sigma_matrix();
    for (int b = 0; b < n; ++b) {
      if (c_[b] == 0) continue;
      for (int k = 0; k < n; ++k)
        if (s[b][k] != 0) r.c_[k] += c_[b] * s[b][k];
    }
    return r;
  }
  NF norm_relative() const { return *this * conj(); }
  Rational norm_absolute() const;

  NF pow(unsigned long e) const {
    NF r(t_, 1L), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += to_string(c_[i]);
    }
    return s + "]";
  }
  // human form, e.g. "(1/2)*b*a + 3"
  std::string pretty() const {
    std::string s;
    for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
      if (c_[i] == 0) continue;
      auto e = t_->exponents(i);
      std::string mono;
      for (int j = 0; j < t_->num_gens(); ++j) {
        if (e[j] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += t_->gen(j).name;
        if (e[j] > 1) mono += "^" + std::to_string(e[j]);
      }
      Rational v = c_[i];
      bool neg = v < 0;
      if (neg) v = -v;
      std::string term;
      if (mono.empty()) term = to_string_short(v);
      else if (v == 1) term = mono;
      else term = to_string_short(v) + "*" + mono;
      if (s.empty()) s = neg ? "-" + term : term;
      else s += neg ? " - " + term : " + " + term;
    }
    return s.empty() ? "0" : s;
  }

 private:
  TowerPtr t_;
  std::vector<Rational> c_;
};

// Solve m x = rhs over Q by Gaussian elimination. Throws if singular.
inline std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
  const size_t n = m.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw DivisionByZero();
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    Rational inv = 1 / m[col][col];
    for (size_t j = col; j < n; ++j) m[col][j] *= inv;
    rhs[col] *= inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

inline Rational det_rational(std::vector<std::vector<Rational>> m) {
  const size_t n = m.size();
  Rational d = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      d = -d;
    }
    d *= m[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return d;
}

inline NF NF::inv() const {
  if (is_zero()) throw DivisionByZero();
  const int n = t_->size();
  if (n == 1) return NF(t_, std::vector<Rational>{1 / c_[0]});
  std::vector<Rational> rhs(n);
  rhs[0] = 1;
  return NF(t_, solve_rational(mult_matrix(), rhs));
}

inline Rational NF::norm_absolute() const { return det_rational(mult_matrix()); }

// monic minimal polynomial over Q, coefficients low..high
inline std::vector<Rational> minimal_polynomial(const NF& a) {
  const int n = a.tower()->size();
  // reduced rows: (pivot column, row) with the combination of powers that produced it
  std::vector<std::vector<Rational>> rows, combos;
  std::vector<int> pivots;
  NF pw(a.tower(), 1L);
  for (int k = 0; k <= n; ++k) {
    std::vector<Rational> v = pw.coeffs(), comb(n + 1);
    comb[k] = 1;
    for (size_t r = 0; r < rows.size(); ++r) {
      Rational f = v[pivots[r]];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) v[j] -= f * rows[r][j];
      for (int j = 0; j <= n; ++j) comb[j] -= f * combos[r][j];
    }
    int piv = -1;
    for (int j = 0; j < n && piv < 0; ++j)
      if (v[j] != 0) piv = j;
    if (piv < 0) {
      comb.resize(k + 1);
      return comb;  // sum comb_j a^j = 0 with comb_k = 1
    }
    Rational inv = 1 / v[piv];
    for (auto& x : v) x *= inv;
    for (auto& x : comb) x *= inv;
    rows.push_back(v);
    combos.push_back(comb);
    pivots.push_back(piv);
    pw *= a;
  }
  throw InvariantViolation("no linear relation among powers");
}

inline std::vector<Rational> FieldTower::reduce_raw(std::map<std::vector<int>, Rational> raw) const {
  const int ng = num_gens();
  for (int j = ng - 1; j >= 0; --j) {
    const int d = gens_[j].degree;
    for (;;) {
      auto it = raw.begin();
      for (; it != raw.end(); ++it)
        if (it->first[j] >= d && it->second != 0) break;
      if (it == raw.end()) break;
      std::vector<int> e = it->first;
      Rational coef = it->second;
      raw.erase(it);
      for (int k = 0; k < d; ++k) {
        const auto& ck = gens_[j].minpoly[k];
        for (int b = 0; b < size_; ++b) {
          if (ck[b] == 0) continue;
          auto eb = exponents(b);
          std::vector<int> ne = e;
          ne[j] = e[j] - d + k;
          for (int l = 0; l < j; ++l) ne[l] += eb[l];
          raw[ne] -= coef * ck[b];
        }
      }
    }
  }
  std::vector<Rational> out(size_);
  for (auto& [e, v] : raw) {
    if (v == 0) continue;
    out[index_of(e)] += v;
  }
  return out;
}

inline void FieldTower::build() {
  size_ = declared_size();
  const int ng = num_gens();
  for (int j = 0; j < ng; ++j) {
    auto& g = gens_[j];
    if (static_cast<int>(g.minpoly.size()) != g.degree)
      throw InvariantViolation("generator " + g.name + ": minpoly needs " + std::to_string(g.degree) + " coefficients");
    for (auto& c : g.minpoly) {
      if (static_cast<int>(c.size()) != size_) throw InvariantViolation("minpoly coefficient length mismatch");
      for (int b = 0; b < size_; ++b) {
        if (c[b] == 0) continue;
        auto e = exponents(b);
        for (int l = j; l < ng; ++l)
          if (e[l] != 0) throw InvariantViolation("minpoly of " + g.name + " is not over the subtower below it");
      }
    }
    if (g.sigma.empty()) g.sigma = generator_element(j);
    if (static_cast<int>(g.sigma.size()) != size_) throw InvariantViolation("sigma image length mismatch");
  }
  mult_.assign(size_ * size_, {});
  for (int i = 0; i < size_; ++i)
    for (int k = 0; k < size_; ++k) {
      auto ei = exponents(i), ek = exponents(k);
      std::vector<int> e(ng);
      for (int l = 0; l < ng; ++l) e[l] = ei[l] + ek[l];
      std::map<std::vector<int>, Rational> raw;
      raw[e] = 1;
      auto v = reduce_raw(raw);
      for (int b = 0; b < size_; ++b)
        if (v[b] != 0) mult_[i * size_ + k].push_back({b, v[b]});
    }
  // sigma on basis monomials
  auto self = std::shared_ptr<const FieldTower>(this, [](const FieldTower*) {});
  sigma_mat_.assign(size_, std::vector<Rational>(size_));
  std::vector<NF> gimg;
  for (int j = 0; j < ng; ++j) gimg.emplace_back(self, gens_[j].sigma);
  for (int b = 0; b < size_; ++b) {
    auto e = exponents(b);
    NF acc(self, 1L);
    for (int j = 0; j < ng; ++j) acc *= gimg[j].pow(e[j]);
    sigma_mat_[b] = acc.coeffs();
  }
  // sigma must be a ring map: minpoly^sigma(sigma(gen)) == 0, and an involution
  for (int j = 0; j < ng; ++j) {
    NF val = gimg[j].pow(gens_[j].degree);
    for (int k = 0; k < gens_[j].degree; ++k) val += NF(self, gens_[j].minpoly[k]).conj() * gimg[j].pow(k);
    if (!val.is_zero()) throw InvariantViolation("involution is not a ring homomorphism at " + gens_[j].name);
    NF gj(self, generator_element(j));
    if (gimg[j].conj() != gj) throw InvariantViolation("involution does not square to identity at " + gens_[j].name);
  }
}

struct GeneratorSpec {
  std::string name;
  int degree;
  std::vector<std::vector<Rational>> minpoly;  // full-length element vectors
  std::vector<Rational> sigma;                 // empty: identity
};

inline TowerPtr make_tower(const std::vector<GeneratorSpec>& gens) {
  auto t = std::make_shared<FieldTower>();
  for (auto& g : gens) t->add_generator(g.name, g.degree);
  for (size_t i = 0; i < gens.size(); ++i) {
    t->set_minpoly(static_cast<int>(i), gens[i].minpoly);
    if (!gens[i].sigma.empty()) t->set_sigma(static_cast<int>(i), gens[i].sigma);
  }
  t->build();
  return t;
}

// Q(zeta_n): single generator with the n-th cyclotomic polynomial, sigma: zeta -> zeta^-1
TowerPtr cyclotomic_tower(int n, const std::string& name = "z");

inline std::vector<Integer> cyclotomic_poly(int n) {
  // Phi_n by repeated exact division of x^n - 1
  std::vector<Integer> num(n + 1);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    auto phi = cyclotomic_poly(d);
    // num /= phi (monic)
    std::vector<Integer> q(num.size() - phi.size() + 1);
    for (int i = static_cast<int>(num.size()) - 1; i >= static_cast<int>(phi.size()) - 1; --i) {
      Integer c = num[i];
      int qi = i - static_cast<int>(phi.size()) + 1;
      q[qi] = c;
      for (size_t k = 0; k < phi.size(); ++k) num[qi + k] -= c * phi[k];
    }
    num = q;
  }
  return num;
}

inline TowerPtr cyclotomic_tower(int n, const std::string& name) {
  auto phi = cyclotomic_poly(n);
  const int d = static_cast<int>(phi.size()) - 1;
  auto t = std::make_shared<FieldTower>();
  t->add_generator(name, d);
  std::vector<std::vector<Rational>> mp(d, std::vector<Rational>(d));
  for (int k = 0; k < d; ++k) mp[k][0] = Rational(phi[k]);
  t->set_minpoly(0, mp);
  // zeta^-1 = zeta^(n-1), reduce via a temporary tower without sigma
  auto tmp = std::make_shared<FieldTower>();
  tmp->add_generator(name, d);
  tmp->set_minpoly(0, mp);
  tmp->build();
  NF z = NF::generator(tmp, name);
  t->set_sigma(0, z.pow(n - 1).coeffs());
  t->build();
  return t;
}

}  // namespace hj
