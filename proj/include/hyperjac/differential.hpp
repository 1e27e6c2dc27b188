#pragma once

// Action of a correspondence on regular differentials w_i = x^(i-1) dx / y.

#include "catalog.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hj {

struct NotMonic : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotScalar : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ClosedFormMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// rows i = 1..g_X, cols j = 1..g_Y, stored 0-based
struct DiffMatrix {
  TowerPtr tower;
  std::vector<std::vector<QPoly>> e;
  int rows() const { return static_cast<int>(e.size()); }
  int cols() const { return e.empty() ? 0 : static_cast<int>(e[0].size()); }
  const QPoly& at(int i, int j) const { return e[i][j]; }

  bool lower_triangular() const {
    for (int i = 0; i < rows(); ++i)
      for (int j = i + 1; j < cols(); ++j)
        if (!e[i][j].is_zero()) return false;
    return true;
  }
  DiffMatrix conj() const {
    DiffMatrix r = *this;
    for (auto& row : r.e)
      for (auto& x : row) x = x.map_coeffs([](const NF& c) { return c.conj(); });
    return r;
  }
  friend bool operator==(const DiffMatrix& a, const DiffMatrix& b) { return a.e == b.e; }
  friend DiffMatrix operator*(const DiffMatrix& a, const DiffMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
    DiffMatrix r{a.tower, std::vector<std::vector<QPoly>>(a.rows(), std::vector<QPoly>(b.cols(), QPoly(a.tower)))};
    for (int i = 0; i < a.rows(); ++i)
      for (int k = 0; k < a.cols(); ++k) {
        if (a.e[i][k].is_zero()) continue;
        for (int j = 0; j < b.cols(); ++j)
          if (!b.e[k][j].is_zero()) r.e[i][j] += a.e[i][k] * b.e[k][j];
      }
    return r;
  }
  // integer m if this is m times the identity
  std::optional<Integer> scalar() const {
    if (rows() != cols() || rows() == 0) return std::nullopt;
    const QPoly& d = e[0][0];
    if (!d.is_constant()) return std::nullopt;
    NF c = d.is_zero() ? NF(tower, 0L) : d.constant_term();
    if (!c.is_rational() || c.coeff(0).get_den() != 1) return std::nullopt;
    for (int i = 0; i < rows(); ++i)
      for (int j = 0; j < cols(); ++j) {
        if (i == j ? e[i][j] != d : !e[i][j].is_zero()) return std::nullopt;
      }
    return c.coeff(0).get_num();
  }
  std::string str() const {
    std::string s;
    for (auto& row : e) {
      s += "[";
      for (size_t j = 0; j < row.size(); ++j) {
        if (j) s += ", ";
        s += poly_pretty(row[j]);
      }
      s += "]\n";
    }
    return s;
  }
  static std::string poly_pretty(const QPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (auto& [m, c] : p.terms()) {
      if (!s.empty()) s += " + ";
      std::string mono = mono_str(m);
      std::string cs = c.pretty();
      bool simple = cs.find_first_of(" ") == std::string::npos;
      if (mono.empty()) s += simple ? cs : "(" + cs + ")";
      else s += (simple ? cs : "(" + cs + ")") + "*" + mono;
    }
    return s;
  }
};

// A made monic in x1 by its constant leading coefficient
inline QPoly monic_in_x1(const QPoly& A) {
  QPoly lc = A.lc_in(X1);
  if (!lc.is_constant() || lc.is_zero()) throw NotMonic("leading coefficient in x1 is not a unit constant");
  return A.scaled(lc.constant_term().inv());
}

// power sums t_1..t_count of the x1-roots of A, in K[params][x2]
inline std::vector<QPoly> newton_traces(const QPoly& A0, int count) {
  QPoly A = monic_in_x1(A0);
  const int d = A.degree(X1);
  const auto& tw = A.ctx();
  // A = x1^d + c_1 x1^(d-1) + ... + c_d
  std::vector<QPoly> c(d + 1, QPoly(tw));
  for (int i = 1; i <= d; ++i) c[i] = A.coeff_in(X1, d - i);
  std::vector<QPoly> p(count + 1, QPoly(tw));
  for (int k = 1; k <= count; ++k) {
    QPoly acc(tw);
    for (int i = 1; i < k && i <= d; ++i) acc += c[i] * p[k - i];
    if (k <= d) acc += c[k].scaled(NF(tw, static_cast<long>(k)));
    p[k] = -acc;
    if (p[k].degree(X2) > k) throw InvariantViolation("trace t_" + std::to_string(k) + " has x2-degree above " + std::to_string(k));
  }
  p.erase(p.begin());
  return p;
}

// phi^* w_i = (1/i) d(t_i) / y2, so t_{i,j} = (j/i) * coefficient of x2^j in t_i
inline DiffMatrix diff_matrix_of(const QPoly& A, int gX, int gY) {
  auto tr = newton_traces(A, gX);
  DiffMatrix M{A.ctx(), std::vector<std::vector<QPoly>>(gX, std::vector<QPoly>(gY, QPoly(A.ctx())))};
  for (int i = 0; i < gX; ++i) {
    for (int j = 1; j <= gY; ++j) M.e[i][j - 1] = tr[i].coeff_in(X2, j).scaled(NF(A.ctx(), Rational(j, i + 1)));
    if (tr[i].degree(X2) > gY) throw InvariantViolation("trace t_" + std::to_string(i + 1) + " exceeds the codomain genus");
  }
  return M;
}

inline DiffMatrix diff_matrix(const QCorrespondence& c) { return diff_matrix_of(c.A, c.X.genus, c.Y.genus); }

// roles exchanged: A read with x2 as the first variable
inline QCorrespondence dual_correspondence(const QCorrespondence& c) {
  QCorrespondence d;
  d.X = c.Y;
  d.Y = c.X;
  d.A = c.A.swap_vars(X1, X2);
  return d;
}

struct RosatiReport {
  DiffMatrix phi, dual, product;
  Integer m;
};

inline RosatiReport rosati(const QCorrespondence& c) {
  DiffMatrix M = diff_matrix(c);
  DiffMatrix D = diff_matrix(dual_correspondence(c));
  DiffMatrix P = M * D;
  auto m = P.scalar();
  if (!m) throw NotScalar("M(phi) M(phi-dual) is not a scalar integer matrix:\n" + P.str());
  return {M, D, P, *m};
}

inline Integer rosati_product(const QCorrespondence& c) { return rosati(c).m; }

struct DifferentialCheck {
  std::string family;
  Construction kind;
  bool lower_triangular = false;
  bool sigma_relation = false;  // M(dual) == M^sigma
  bool diagonal_norms = false;  // e e^sigma == m on the diagonal
  Integer m;
  std::optional<int> expected_m;
};

// full check for one catalog family and construction
inline DifferentialCheck check_family_differentials(const FamilyRecord& r, Construction kind) {
  auto corr = build_construction(r, kind);
  auto rep = rosati(corr);
  DifferentialCheck out{r.name, kind};
  out.m = rep.m;
  out.expected_m = kind == Construction::Linear ? r.m_linear : r.m_quadratic;
  out.lower_triangular = rep.phi.lower_triangular() && rep.dual.lower_triangular();
  out.sigma_relation = rep.dual == rep.phi.conj();
  out.diagonal_norms = true;
  for (int i = 0; i < rep.phi.rows(); ++i) {
    const QPoly& d = rep.phi.at(i, i);
    QPoly n = d * d.map_coeffs([](const NF& x) { return x.conj(); });
    if (n != QPoly::constant(r.tower, 0) + QPoly(NF(r.tower, Rational(rep.m)))) out.diagonal_norms = false;
  }
  return out;
}

// ---------- real-multiplication closed forms for the Dickson correspondences ----------

struct RMReport {
  int n = 0, i = 0;
  Construction kind = Construction::Linear;
  std::vector<Rational> minpoly;     // of z + 1/z, low..high
  UPoly<NF> charpoly;                // of M
  bool diagonal_ok = false;
  bool charpoly_ok = false;
  bool annihilates = false;  // m(M) == 0, reported only
};

inline std::vector<std::vector<NF>> constant_matrix(const DiffMatrix& M) {
  std::vector<std::vector<NF>> out(M.rows(), std::vector<NF>(M.cols(), NF(M.tower, 0L)));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      const QPoly& p = M.at(i, j);
      if (!p.is_constant()) throw InvariantViolation("matrix entry is not constant");
      if (!p.is_zero()) out[i][j] = p.constant_term();
    }
  return out;
}

inline RMReport verify_rm_charpoly(int n, int i, Construction kind) {
  auto rec = dickson_record(n, i);
  auto corr = build_construction(rec, kind);
  DiffMatrix M = diff_matrix(corr);
  const auto& tw = rec.tower;
  NF z = NF::generator(tw, "z");
  RMReport rep;
  rep.n = n;
  rep.i = i;
  rep.kind = kind;
  rep.minpoly = minimal_polynomial(z + z.conj());
  if (!M.lower_triangular()) throw ClosedFormMismatch("Dickson matrix is not lower triangular");
  auto C = constant_matrix(M);
  const int g = M.rows();
  rep.diagonal_ok = true;
  for (int j = 1; j <= g; ++j) {
    NF w = z.pow(static_cast<unsigned long>(i * j) % n);
    if (C[j - 1][j - 1] != w + w.conj()) rep.diagonal_ok = false;
  }
  // triangular: char poly is the product over the diagonal
  UPoly<NF> cp = UPoly<NF>::constant(NF(tw, 1L));
  for (int j = 0; j < g; ++j) cp = cp * UPoly<NF>::linear(C[j][j]);
  rep.charpoly = cp;
  std::vector<NF> mc;
  for (auto& q : rep.minpoly) mc.push_back(NF(tw, q));
  UPoly<NF> m(tw, mc);
  UPoly<NF> target = kind == Construction::Linear ? m : m * m;
  rep.charpoly_ok = cp == target;
  // m(M) by Horner on matrices
  std::vector<std::vector<NF>> acc(g, std::vector<NF>(g, NF(tw, 0L)));
  for (int d = m.deg(); d >= 0; --d) {
    std::vector<std::vector<NF>> next(g, std::vector<NF>(g, NF(tw, 0L)));
    for (int r = 0; r < g; ++r)
      for (int k = 0; k < g; ++k) {
        if (acc[r][k].is_zero()) continue;
        for (int c = 0; c < g; ++c) next[r][c] += acc[r][k] * C[k][c];
      }
    for (int r = 0; r < g; ++r) next[r][r] += m.coeff(d);
    acc = next;
  }
  rep.annihilates = true;
  for (auto& row : acc)
    for (auto& x : row)
      if (!x.is_zero()) rep.annihilates = false;
  if (!rep.diagonal_ok) throw ClosedFormMismatch("diagonal entries differ from z^(ij) + z^(-ij)");
  if (!rep.charpoly_ok) throw ClosedFormMismatch("characteristic polynomial differs from the expected power of the minimal polynomial");
  return rep;
}

}  // namespace hj
