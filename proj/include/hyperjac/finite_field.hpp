#pragma once

// F_{p^k} with a deterministic modulus. Elements are coefficient arrays
// on the power basis of the modulus root.

#include "rational.hpp"
#include "tower.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hj {

namespace modp {

using Vec = std::vector<uint64_t>;  // dense, low..high, trimmed

inline void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline uint64_t inv(uint64_t a, uint64_t p) {
  int64_t t = 0, nt = 1, r = static_cast<int64_t>(p), nr = static_cast<int64_t>(a % p);
  while (nr) {
    int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw DivisionByZero();
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}
inline Vec mul(const Vec& a, const Vec& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}
inline Vec rem(Vec a, const Vec& m, uint64_t p) {
  trim(a);
  const size_t dm = m.size() - 1;
  uint64_t li = inv(m.back(), p);
  while (a.size() > dm) {
    uint64_t c = a.back() * li % p;
    size_t sh = a.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) a[sh + i] = (a[sh + i] + (p - c) * m[i]) % p;
    trim(a);
  }
  return a;
}
inline Vec sub(Vec a, const Vec& b, uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}
inline Vec divexact(Vec a, const Vec& b, uint64_t p) {
  const size_t db = b.size() - 1;
  uint64_t li = inv(b.back(), p);
  Vec q(a.size() > db ? a.size() - db : 1, 0);
  trim(a);
  while (a.size() > db) {
    uint64_t c = a.back() * li % p;
    size_t sh = a.size() - 1 - db;
    q[sh] = c;
    for (size_t i = 0; i <= db; ++i) a[sh + i] = (a[sh + i] + (p - c) * b[i]) % p;
    trim(a);
  }
  trim(q);
  return q;
}
inline Vec gcd(Vec a, Vec b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = rem(a, b, p);
    std::swap(a, b);
  }
  if (!a.empty()) {
    uint64_t li = inv(a.back(), p);
    for (auto& x : a) x = x * li % p;
  }
  return a;
}
inline Vec powmod_x(const Integer& e, const Vec& m, uint64_t p) {
  // x^e mod m
  Vec r{1}, b{0, 1};
  b = rem(b, m, p);
  r = rem(r, m, p);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = rem(mul(r, r, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = rem(mul(r, b, p), m, p);
  }
  return r;
}
inline Vec compose_mod(const Vec& a, const Vec& b, const Vec& m, uint64_t p) {
  // a(b) mod m, Horner
  Vec r;
  for (size_t i = a.size(); i-- > 0;) {
    r = rem(mul(r, b, p), m, p);
    if (r.empty()) r.push_back(0);
    r[0] = (r[0] + a[i]) % p;
    trim(r);
  }
  return r;
}

inline std::vector<int> prime_factors(int n) {
  std::vector<int> out;
  for (int q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's test for f monic over F_p
inline bool is_irreducible(const Vec& f, uint64_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n <= 0) return false;
  if (n == 1) return true;
  // x^(p^i) by repeated Frobenius composition
  Vec xp = powmod_x(Integer(p), f, p);
  std::vector<Vec> frob(n + 1);
  frob[0] = rem(Vec{0, 1}, f, p);
  frob[1] = xp;
  for (int i = 2; i <= n; ++i) frob[i] = compose_mod(frob[i - 1], xp, f, p);
  Vec x = rem(Vec{0, 1}, f, p);
  if (!sub(frob[n], x, p).empty()) return false;
  for (int q : prime_factors(n)) {
    Vec g = gcd(f, sub(frob[n / q], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

// degrees of irreducible factors of a squarefree monic f (distinct-degree)
inline std::vector<std::pair<int, int>> distinct_degree(Vec f, uint64_t p) {
  std::vector<std::pair<int, int>> out;  // (degree, count)
  const Vec x{0, 1};
  Vec xp = powmod_x(Integer(p), f, p);
  Vec h = rem(x, f, p);
  for (int d = 1; 2 * d <= static_cast<int>(f.size()) - 1; ++d) {
    h = compose_mod(h, xp, f, p);
    Vec g = gcd(f, sub(h, x, p), p);
    if (g.size() > 1) {
      out.push_back({d, static_cast<int>(g.size() - 1) / d});
      f = divexact(f, g, p);
      xp = rem(xp, f, p);
      h = rem(h, f, p);
    }
  }
  if (f.size() > 1) out.push_back({static_cast<int>(f.size()) - 1, 1});
  return out;
}

}  // namespace modp

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

inline constexpr int kMaxExtension = 48;

class FiniteField {
 public:
  // first irreducible monic of degree k in the order of the base-p integer
  // sum c_i p^i (so c_{k-1} is most significant)
  static FieldPtr make(uint64_t p, int k) {
    if (!is_prime_u64(p)) throw InvariantViolation("characteristic " + std::to_string(p) + " is not prime");
    if (p >= (1ull << 24)) throw InvariantViolation("characteristic too large for this implementation");
    if (k < 1 || k > kMaxExtension) throw InvariantViolation("extension degree out of range");
    // one shared object per (p, k)
    static std::mutex mu;
    static std::map<std::pair<uint64_t, int>, FieldPtr> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find({p, k});
    if (it != cache.end()) return it->second;
    modp::Vec m;
    if (k == 1) {
      m = {0, 1};
    } else {
      std::vector<uint64_t> digits(k, 0);
      for (;;) {
        m.assign(digits.begin(), digits.end());
        m.push_back(1);
        if (m[0] != 0 && modp::is_irreducible(m, p)) break;
        int i = 0;
        while (i < k && ++digits[i] == p) digits[i++] = 0;
        if (i == k) throw InvariantViolation("no irreducible polynomial found");
      }
    }
    return cache[{p, k}] = make_with_modulus(p, m);
  }
  static FieldPtr make_with_modulus(uint64_t p, modp::Vec m) {
    auto f = std::make_shared<FiniteField>();
    f->p_ = p;
    f->k_ = static_cast<int>(m.size()) - 1;
    if (f->k_ > 1 && !modp::is_irreducible(m, p)) throw InvariantViolation("modulus is reducible");
    f->mod_ = std::move(m);
    f->order_ = 1;
    for (int i = 0; i < f->k_; ++i) f->order_ *= static_cast<unsigned long>(p);
    return f;
  }

  uint64_t p() const { return p_; }
  int k() const { return k_; }
  const modp::Vec& modulus() const { return mod_; }
  const Integer& order() const { return order_; }
  bool order_fits(uint64_t bound) const { return order_ <= bound; }

  std::string name() const {
    return k_ == 1 ? "F_" + std::to_string(p_) : "F_" + std::to_string(p_) + "^" + std::to_string(k_);
  }

 private:
  uint64_t p_ = 2;
  int k_ = 1;
  modp::Vec mod_;
  Integer order_;
};

class FF {
 public:
  using ctx_type = FieldPtr;

  FF() = default;
  FF(FieldPtr f, long v) : f_(std::move(f)) {
    c_.fill(0);
    long p = static_cast<long>(f_->p());
    long r = v % p;
    if (r < 0) r += p;
    c_[0] = static_cast<uint32_t>(r);
  }
  static FF from_int(const FieldPtr& f, long v) { return FF(f, v); }
  static FF from_coeffs(const FieldPtr& f, const std::vector<uint64_t>& c) {
    FF r(f, 0L);
    for (size_t i = 0; i < c.size() && i < static_cast<size_t>(f->k()); ++i) r.c_[i] = static_cast<uint32_t>(c[i] % f->p());
    if (c.size() > static_cast<size_t>(f->k())) {
      auto red = modp::rem(modp::Vec(c.begin(), c.end()), f->modulus(), f->p());
      r.c_.fill(0);
      for (size_t i = 0; i < red.size(); ++i) r.c_[i] = static_cast<uint32_t>(red[i]);
    }
    return r;
  }
  // i-th element in the fixed enumeration (base-p digits, c_0 least significant)
  static FF from_index(const FieldPtr& f, uint64_t idx) {
    FF r(f, 0L);
    for (int i = 0; i < f->k(); ++i) {
      r.c_[i] = static_cast<uint32_t>(idx % f->p());
      idx /= f->p();
    }
    return r;
  }
  uint64_t index() const {
    uint64_t idx = 0;
    for (int i = f_->k(); i-- > 0;) idx = idx * f_->p() + c_[i];
    return idx;
  }
  static FF generator(const FieldPtr& f) {
    FF r(f, 0L);
    if (f->k() == 1) {
      r.c_[0] = static_cast<uint32_t>((f->p() - f->modulus()[0]) % f->p());
      return r;
    }
    r.c_[1] = 1;
    return r;
  }

  const FieldPtr& ctx() const { return f_; }
  const FieldPtr& field() const { return f_; }
  uint32_t coeff(int i) const { return c_[i]; }
  std::vector<uint64_t> coeffs() const { return std::vector<uint64_t>(c_.begin(), c_.begin() + f_->k()); }

  bool is_zero() const {
    for (int i = 0; i < f_->k(); ++i)
      if (c_[i]) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (int i = 1; i < f_->k(); ++i)
      if (c_[i]) return false;
    return true;
  }
  bool in_prime_field() const {
    for (int i = 1; i < f_->k(); ++i)
      if (c_[i]) return false;
    return true;
  }

  FF& operator+=(const FF& o) {
    const uint32_t p = static_cast<uint32_t>(f_->p());
    for (int i = 0; i < f_->k(); ++i) {
      uint32_t s = c_[i] + o.c_[i];
      c_[i] = s >= p ? s - p : s;
    }
    return *this;
  }
  FF& operator-=(const FF& o) {
    const uint32_t p = static_cast<uint32_t>(f_->p());
    for (int i = 0; i < f_->k(); ++i) c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + p - o.c_[i];
    return *this;
  }
  FF operator-() const {
    FF r(f_, 0L);
    r -= *this;
    return r;
  }
  friend FF operator+(FF a, const FF& b) { return a += b; }
  friend FF operator-(FF a, const FF& b) { return a -= b; }
  friend FF operator*(const FF& a, const FF& b) {
    const auto& F = *a.f_;
    const int k = F.k();
    const uint64_t p = F.p();
    FF r(a.f_, 0L);
    if (k == 1) {
      r.c_[0] = static_cast<uint32_t>(static_cast<uint64_t>(a.c_[0]) * b.c_[0] % p);
      return r;
    }
    std::array<uint64_t, 2 * kMaxExtension> t{};
    for (int i = 0; i < k; ++i) {
      if (!a.c_[i]) continue;
      for (int j = 0; j < k; ++j) t[i + j] += static_cast<uint64_t>(a.c_[i]) * b.c_[j];
    }
    for (int i = 0; i < 2 * k - 1; ++i) t[i] %= p;
    const auto& m = F.modulus();
    for (int i = 2 * k - 2; i >= k; --i) {
      uint64_t c = t[i];
      if (!c) continue;
      for (int j = 0; j < k; ++j) t[i - k + j] = (t[i - k + j] + (p - c) * m[j]) % p;
    }
    for (int i = 0; i < k; ++i) r.c_[i] = static_cast<uint32_t>(t[i]);
    return r;
  }
  FF& operator*=(const FF& o) { return *this = *this * o; }
  friend bool operator==(const FF& a, const FF& b) {
    for (int i = 0; i < a.f_->k(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const FF& a, const FF& b) { return !(a == b); }

  FF inv() const {
    if (is_zero()) throw DivisionByZero();
    const uint64_t p = f_->p();
    if (f_->k() == 1) {
      FF r(f_, 0L);
      r.c_[0] = static_cast<uint32_t>(modp::inv(c_[0], p));
      return r;
    }
    // extended Euclid on (a, modulus)
    modp::Vec r0 = f_->modulus(), r1 = coeffs(), s0{}, s1{1};
    modp::trim(r1);
    while (r1.size() > 1) {
      // q = r0 / r1
      modp::Vec a = r0, q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
      uint64_t li = modp::inv(r1.back(), p);
      while (a.size() >= r1.size()) {
        uint64_t c = a.back() * li % p;
        size_t sh = a.size() - r1.size();
        q[sh] = c;
        for (size_t i = 0; i < r1.size(); ++i) a[sh + i] = (a[sh + i] + (p - c) * r1[i]) % p;
        modp::trim(a);
        if (a.empty()) break;
      }
      modp::trim(q);
      modp::Vec s2 = modp::sub(s0, modp::mul(q, s1, p), p);
      r0 = std::move(r1);
      r1 = std::move(a);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    uint64_t ci = modp::inv(r1[0], p);
    for (auto& x : s1) x = x * ci % p;
    return from_coeffs(f_, s1);
  }
  friend FF operator/(const FF& a, const FF& b) { return a * b.inv(); }
  FF& operator/=(const FF& o) { return *this = *this / o; }

  FF pow(const Integer& e) const {
    FF r(f_, 1L), b = *this;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
      r *= r;
      if (mpz_tstbit(e.get_mpz_t(), i)) r *= b;
    }
    return r;
  }
  FF pow(unsigned long e) const { return pow(Integer(e)); }
  FF frobenius() const { return pow(static_cast<unsigned long>(f_->p())); }

  std::string str() const {
    if (f_->k() == 1) return std::to_string(c_[0]);
    std::string s = "[";
    for (int i = 0; i < f_->k(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + "]";
  }

 private:
  FieldPtr f_;
  std::array<uint32_t, kMaxExtension> c_{};
};

}  // namespace hj
