#pragma once

// Reduction of a tower's ring of p-integral elements into F_{p^k}.

#include "ff_poly.hpp"
#include "mpoly.hpp"
#include "tower.hpp"

#include <optional>
#include <random>

namespace hj {

struct NoPrimeAbove : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadReduction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ReductionMap {
 public:
  ReductionMap() = default;
  ReductionMap(TowerPtr src, FieldPtr dst, std::vector<FF> images) : src_(std::move(src)), dst_(std::move(dst)), img_(std::move(images)) {
    const int n = src_->size();
    basis_.reserve(n);
    for (int b = 0; b < n; ++b) {
      auto e = src_->exponents(b);
      FF v(dst_, 1L);
      for (int j = 0; j < src_->num_gens(); ++j) v *= img_[j].pow(static_cast<unsigned long>(e[j]));
      basis_.push_back(v);
    }
  }

  const TowerPtr& source() const { return src_; }
  const FieldPtr& target() const { return dst_; }
  const std::vector<FF>& images() const { return img_; }

  FF operator()(const Rational& q) const {
    try {
      return FF(dst_, static_cast<long>(rational_mod(q, dst_->p())));
    } catch (const DivisionByZero&) {
      throw BadReduction("denominator of " + to_string(q) + " vanishes mod " + std::to_string(dst_->p()));
    }
  }
  FF operator()(const NF& a) const {
    FF acc(dst_, 0L);
    for (int b = 0; b < src_->size(); ++b) {
      const Rational& c = a.coeff(b);
      if (c == 0) continue;
      acc += (*this)(c) * basis_[b];
    }
    return acc;
  }
  MPoly<FF> operator()(const MPoly<NF>& p) const {
    return p.convert<FF>(dst_, [this](const NF& c) { return (*this)(c); });
  }

  // same reduction composed with an embedding into a larger field
  ReductionMap extended(const FieldPtr& big) const {
    auto emb = make_embedding(dst_, big);
    std::vector<FF> im;
    for (auto& x : img_) im.push_back(emb(x));
    return ReductionMap(src_, big, im);
  }

  // every generator minpoly vanishes at its image
  bool verify() const {
    for (int j = 0; j < src_->num_gens(); ++j) {
      const auto& g = src_->gen(j);
      FF acc = img_[j].pow(static_cast<unsigned long>(g.degree));
      for (int k = 0; k < g.degree; ++k) acc += (*this)(NF(src_, g.minpoly[k])) * img_[j].pow(static_cast<unsigned long>(k));
      if (!acc.is_zero()) return false;
    }
    return true;
  }

 private:
  TowerPtr src_;
  FieldPtr dst_;
  std::vector<FF> img_;
  std::vector<FF> basis_;
};

namespace detail {

// all generator image tuples into F, in lexicographic order of root index
inline void enumerate_images(const TowerPtr& tw, const FieldPtr& F, int j, std::vector<FF>& cur, std::vector<std::vector<FF>>& out, size_t limit) {
  if (out.size() >= limit) return;
  if (j == tw->num_gens()) {
    out.push_back(cur);
    return;
  }
  const auto& g = tw->gen(j);
  // minpoly coefficients live in the subtower already mapped
  std::vector<FF> im = cur;
  while (static_cast<int>(im.size()) < tw->num_gens()) im.push_back(FF(F, 0L));
  ReductionMap rm(tw, F, im);
  std::vector<FF> c;
  for (int k = 0; k < g.degree; ++k) c.push_back(rm(NF(tw, g.minpoly[k])));
  c.push_back(FF(F, 1L));
  for (auto& [r, m] : ff_roots(FPoly(F, c))) {
    cur.push_back(r);
    enumerate_images(tw, F, j + 1, cur, out, limit);
    cur.pop_back();
  }
}

}  // namespace detail

// Smallest k with all generators realizable in F_{p^k}; images are the
// lexicographically smallest root tuple, or a seeded pick among all tuples.
inline ReductionMap build_reduction(const TowerPtr& tw, uint64_t p, std::optional<uint64_t> seed = std::nullopt) {
  if (!is_prime_u64(p)) throw NoPrimeAbove(std::to_string(p) + " is not prime");
  for (int j = 0; j < tw->num_gens(); ++j)
    for (auto& c : tw->gen(j).minpoly)
      for (auto& q : c)
        if (q != 0 && q.get_den() % Integer(static_cast<unsigned long>(p)) == 0)
          throw NoPrimeAbove(std::to_string(p) + " divides a denominator of the minimal polynomial of " + tw->gen(j).name);
  for (int k = 1; k <= std::max(1, tw->size()); ++k) {
    auto F = FiniteField::make(p, k);
    std::vector<std::vector<FF>> all;
    std::vector<FF> cur;
    detail::enumerate_images(tw, F, 0, cur, all, seed ? 100000 : 1);
    if (all.empty()) continue;
    size_t pick = 0;
    if (seed) {
      std::mt19937_64 rng(*seed);
      pick = rng() % all.size();
    }
    ReductionMap r(tw, F, all[pick]);
    if (!r.verify()) throw NoPrimeAbove("reduction failed verification");
    return r;
  }
  throw NoPrimeAbove("no prime above " + std::to_string(p) + " found");
}

// every reduction at the smallest residue degree: one map per prime above p and embedding
inline std::vector<ReductionMap> reductions_above(const TowerPtr& tw, uint64_t p) {
  auto first = build_reduction(tw, p);
  const auto& F = first.target();
  std::vector<std::vector<FF>> all;
  std::vector<FF> cur;
  detail::enumerate_images(tw, F, 0, cur, all, 100000);
  std::vector<ReductionMap> out;
  for (auto& im : all) out.emplace_back(tw, F, im);
  return out;
}

}  // namespace hj
