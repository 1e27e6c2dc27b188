#pragma once

// Shared helpers for the unit tests and the acceptance runner.

#include <hyperjac/hyperjac.hpp>

#include <random>
#include <string>
#include <vector>

namespace hj {
inline void PrintTo(const NF& a, std::ostream* os) { *os << a.pretty(); }
inline void PrintTo(const FF& a, std::ostream* os) { *os << a.str(); }
template <class C>
void PrintTo(const MPoly<C>& a, std::ostream* os) {
  *os << a.str();
}
}  // namespace hj

namespace hjt {

using namespace hj;

inline std::vector<Rational> vec(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}
inline std::vector<Rational> vecq(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (auto x : xs) v.push_back(parse_rational(x));
  return v;
}

// Q(a), a^2 + c1 a + c0 = 0, sigma: a -> s0 + s1 a
inline TowerPtr quadratic_tower(long c0, long c1, long s0, long s1, const std::string& name = "a") {
  return make_tower({{name, 2, {vec({c0, 0}), vec({c1, 0})}, vec({s0, s1})}});
}

inline TowerPtr tower7() { return quadratic_tower(2, 1, -1, -1); }
inline TowerPtr tower11() { return quadratic_tower(3, 1, -1, -1); }
inline TowerPtr tower15() { return quadratic_tower(4, -1, 1, -1); }
inline TowerPtr tower21() { return quadratic_tower(2, -1, 1, -1); }

// basis index = e_b + 2 e_a for (b: deg 2, a: deg 2)
inline TowerPtr tower13() {
  // b^2 - 5b + 3 = 0; a^2 + (b - 2) a + b = 0; sigma a = 2 - b - a
  return make_tower({{"b", 2, {vec({3, 0, 0, 0}), vec({-5, 0, 0, 0})}, {}},
                     {"a", 2, {vec({0, 1, 0, 0}), vec({-2, 1, 0, 0})}, vec({2, -1, -1, 0})}});
}

// b^3 - 13 b^2 + 46 b - 32 = 0; a^2 - (b^2 - 7b + 4)/2 a + b = 0; sigma a = (b^2-7b+4)/2 - a
inline TowerPtr tower31() {
  auto z6 = [](std::vector<Rational> v) {
    v.resize(6);
    return v;
  };
  return make_tower({{"b", 3, {z6(vec({-32})), z6(vec({46})), z6(vec({-13}))}, {}},
                     {"a", 2, {z6(vec({0, 1, 0})), z6(vecq({"-2", "7/2", "-1/2"}))}, z6(vecq({"2", "-7/2", "1/2", "-1"}))}});
}

inline std::vector<TowerPtr> catalog_towers() {
  return {tower7(), tower11(), tower13(), tower15(), tower21(), tower31(), cyclotomic_tower(3), cyclotomic_tower(5),
          cyclotomic_tower(7), cyclotomic_tower(13)};
}

inline Rational random_rational(std::mt19937_64& rng, long range = 20) {
  long n = static_cast<long>(rng() % (2 * range + 1)) - range;
  long d = static_cast<long>(rng() % 7) + 1;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline NF random_nf(const TowerPtr& t, std::mt19937_64& rng) {
  std::vector<Rational> c;
  for (int i = 0; i < t->size(); ++i) c.push_back(random_rational(rng));
  return NF(t, c);
}

inline NF random_nonzero_nf(const TowerPtr& t, std::mt19937_64& rng) {
  for (;;) {
    NF a = random_nf(t, rng);
    if (!a.is_zero()) return a;
  }
}

template <class C>
MPoly<C> random_mpoly(std::mt19937_64& rng, const std::vector<Var>& vars, int terms, int maxdeg, const std::function<C()>& coeff) {
  MPoly<C> p(coeff().ctx());
  for (int i = 0; i < terms; ++i) {
    Mono m{};
    for (auto v : vars) m[v] = static_cast<uint16_t>(rng() % (maxdeg + 1));
    p.add_term(m, coeff());
  }
  return p;
}

}  // namespace hjt
