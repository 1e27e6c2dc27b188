#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace hj {

using Integer = mpz_class;
using Rational = mpq_class;

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero") {}
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "num/den" or "num"; result is canonical
inline Rational parse_rational(std::string_view s) {
  std::string str(s);
  if (str.empty()) throw ParseError("empty rational");
  if (str[0] == '+') str.erase(0, 1);
  Rational r;
  if (r.set_str(str, 10) != 0) throw ParseError("bad rational '" + std::string(s) + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) {
  // always num/den so fixtures stay uniform
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string_short(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

// a mod p for p prime, a's denominator invertible
inline unsigned long rational_mod(const Rational& r, unsigned long p) {
  Integer n = r.get_num() % Integer(p);
  if (n < 0) n += p;
  Integer d = r.get_den() % Integer(p);
  if (d == 0) throw DivisionByZero();
  Integer inv;
  mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), Integer(p).get_mpz_t());
  Integer v = (n * inv) % Integer(p);
  return v.get_ui();
}

inline bool is_prime_u64(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long q : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    if (n % q == 0) return n == q;
  }
  // deterministic Miller-Rabin for 64-bit
  unsigned long d = n - 1;
  int r = 0;
  while ((d & 1) == 0) { d >>= 1; ++r; }
  auto mulmod = [n](unsigned long a, unsigned long b) {
    return static_cast<unsigned long>((unsigned __int128)a * b % n);
  };
  auto powmod = [&](unsigned long a, unsigned long e) {
    unsigned long res = 1;
    a %= n;
    while (e) {
      if (e & 1) res = mulmod(res, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return res;
  };
  for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    unsigned long x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) { comp = false; break; }
    }
    if (comp) return false;
  }
  return true;
}

}  // namespace hj
