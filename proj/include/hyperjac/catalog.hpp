#pragma once

// Polynomial families, their fixtures, and the curve-pair constructions.

#include "mpoly.hpp"
#include "reduction.hpp"
#include "tower.hpp"

#include <zlib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hj {

struct FactorizationFails : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SymmetryFails : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstantMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OnDiscriminantLocus : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingFixture : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using QPoly = MPoly<NF>;

enum class Partner { Sigma, NegSigma, Self };
enum class Construction { Linear, Quadratic };
enum class FamilyKind { Literal, Cyclic, Dickson };

inline const char* to_string(Construction c) { return c == Construction::Linear ? "linear" : "quadratic"; }
inline Construction parse_construction(const std::string& s) {
  if (s == "linear") return Construction::Linear;
  if (s == "quadratic") return Construction::Quadratic;
  throw ParseError("unknown construction '" + s + "'");
}

// abelian group as list of (cyclic order, multiplicity), e.g. 4^4*2^6
struct GroupSpec {
  std::vector<std::pair<int, int>> parts;  // sorted by order, descending
  std::string str() const {
    if (parts.empty()) return "0";
    std::string s;
    for (auto& [o, e] : parts) {
      if (!s.empty()) s += "*";
      s += std::to_string(o) + "^" + std::to_string(e);
    }
    return s;
  }
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

inline GroupSpec parse_group(const std::string& s) {
  GroupSpec g;
  if (s == "0" || s.empty()) return g;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '*')) {
    auto c = part.find('^');
    try {
      int o = std::stoi(part.substr(0, c));
      int e = c == std::string::npos ? 1 : std::stoi(part.substr(c + 1));
      if (o < 2 || e < 1) throw ParseError("bad group factor '" + part + "'");
      g.parts.push_back({o, e});
    } catch (const std::logic_error&) {
      throw ParseError("bad group factor '" + part + "'");
    }
  }
  std::sort(g.parts.begin(), g.parts.end(), [](auto& a, auto& b) { return a.first > b.first; });
  return g;
}

struct SpecialPoint {
  Construction kind;
  std::vector<std::pair<Var, Rational>> values;
  uint64_t prime;
  GroupSpec group;
};

struct FamilyRecord {
  std::string name;
  FamilyKind kind = FamilyKind::Literal;
  int n = 0;      // degree of f
  int index = 0;  // exponent e (cyclic) or i (Dickson)
  TowerPtr tower;
  QPoly f, A;
  Partner partner = Partner::Sigma;
  std::optional<int> symmetry;
  Rational leading = 1;
  std::optional<int> m_linear, m_quadratic;
  std::optional<NF> kappa, lambda;
  std::optional<GroupSpec> group_linear, group_quadratic;
  std::optional<int> genus_linear, genus_quadratic;
  std::vector<SpecialPoint> specials;
  std::optional<std::string> weil_linear, weil_quadratic;
  std::vector<Var> params() const {
    std::vector<Var> v;
    for (Var x : {T}) if (f.uses(x) || A.uses(x)) v.push_back(x);
    return v;
  }
};

inline QPoly partner_poly(const FamilyRecord& r) {
  switch (r.partner) {
    case Partner::Self: return r.f;
    case Partner::Sigma: return r.f.map_coeffs([](const NF& c) { return c.conj(); });
    case Partner::NegSigma: return -r.f.map_coeffs([](const NF& c) { return c.conj(); });
  }
  return r.f;
}

// ---------- fixture format ----------

inline uint32_t crc32_of(const std::string& s) {
  return static_cast<uint32_t>(::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

namespace detail {

inline std::string hex8(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

inline std::string array_str(const NF& a) {
  std::string s = "[";
  for (int i = 0; i < a.tower()->size(); ++i) {
    if (i) s += ",";
    s += to_string(a.coeff(i));
  }
  return s + "]";
}

inline std::string mono_text(const Mono& m) {
  std::string s = mono_str(m);
  return s.empty() ? "1" : s;
}

inline Mono parse_mono(const std::string& s) {
  Mono m{};
  if (s == "1") return m;
  std::stringstream ss(s);
  std::string f;
  while (std::getline(ss, f, '*')) {
    auto c = f.find('^');
    Var v = parse_var(f.substr(0, c));
    int e = 1;
    if (c != std::string::npos) {
      try {
        e = std::stoi(f.substr(c + 1));
      } catch (const std::logic_error&) {
        throw ParseError("bad exponent in '" + s + "'");
      }
    }
    if (e < 1) throw ParseError("bad exponent in '" + s + "'");
    m[v] = static_cast<uint16_t>(m[v] + e);
  }
  return m;
}

inline std::vector<Rational> parse_array(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("expected [..] array, got '" + s + "'");
  std::vector<Rational> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

inline std::string partner_text(Partner p) {
  return p == Partner::Sigma ? "sigma" : p == Partner::NegSigma ? "neg-sigma" : "self";
}

}  // namespace detail

inline FamilyRecord parse_family(const std::string& text, const std::string& origin = "<memory>") {
  FamilyRecord r;
  r.kind = FamilyKind::Literal;
  std::vector<GeneratorSpec> gens;
  TowerPtr tw;
  std::istringstream in(text);
  std::string line, hashed;
  int lineno = 0;
  bool checksum_seen = false, format_seen = false;
  std::vector<std::pair<Mono, std::vector<Rational>>> frows, arows;
  std::optional<std::vector<Rational>> kappa, lambda;

  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(origin + ":" + std::to_string(lineno) + ": " + msg); };
  auto ensure_tower = [&]() {
    if (!tw) {
      try {
        tw = make_tower(gens);
      } catch (const InvariantViolation& e) {
        throw InvariantViolation(origin + ": " + e.what());
      }
    }
  };
  auto gen_of = [&](const std::string& name) -> GeneratorSpec& {
    for (auto& g : gens)
      if (g.name == name) return g;
    throw fail("unknown generator " + name);
  };
  auto tower_size = [&] {
    int n = 1;
    for (auto& g : gens) n *= g.degree;
    return n;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (checksum_seen) {
      if (!line.empty()) throw fail("content after checksum");
      continue;
    }
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "checksum") {
      std::string h;
      ls >> h;
      if (h != detail::hex8(crc32_of(hashed))) throw fail("checksum mismatch (have " + h + ", computed " + detail::hex8(crc32_of(hashed)) + ")");
      checksum_seen = true;
      continue;
    }
    hashed += line + "\n";
    if (key.empty() || key[0] == '#') continue;
    try {
      if (key == "format") {
        std::string name;
        int ver = 0;
        ls >> name >> ver;
        if (name != "hyperjac-family" || ver != 1) throw fail("unsupported format");
        format_seen = true;
      } else if (key == "family") {
        ls >> r.name;
      } else if (key == "index") {
        ls >> r.n;
      } else if (key == "generator") {
        if (tw) throw fail("generator after tower use");
        GeneratorSpec g;
        ls >> g.name >> g.degree;
        if (g.degree < 1) throw fail("bad generator degree");
        gens.push_back(g);
      } else if (key == "minpoly") {
        std::string name, arr;
        int k = -1;
        ls >> name >> k >> arr;
        auto& g = gen_of(name);
        auto v = detail::parse_array(arr);
        if (static_cast<int>(v.size()) != tower_size()) throw fail("array length " + std::to_string(v.size()) + " != tower degree");
        if (k != static_cast<int>(g.minpoly.size())) throw fail("minpoly coefficients out of order");
        g.minpoly.push_back(v);
      } else if (key == "sigma") {
        std::string name, arr;
        ls >> name >> arr;
        auto v = detail::parse_array(arr);
        if (static_cast<int>(v.size()) != tower_size()) throw fail("array length != tower degree");
        gen_of(name).sigma = v;
      } else if (key == "params") {
        // informational; parameters are read off the polynomials
      } else if (key == "partner") {
        std::string p;
        ls >> p;
        if (p == "sigma") r.partner = Partner::Sigma;
        else if (p == "neg-sigma") r.partner = Partner::NegSigma;
        else if (p == "self") r.partner = Partner::Self;
        else throw fail("unknown partner rule " + p);
      } else if (key == "symmetry") {
        int e = 0;
        ls >> e;
        if (e != 1 && e != -1) throw fail("symmetry must be +1 or -1");
        r.symmetry = e;
      } else if (key == "leading") {
        std::string q;
        ls >> q;
        r.leading = parse_rational(q);
      } else if (key == "m") {
        std::string kind;
        int m = 0;
        ls >> kind >> m;
        (parse_construction(kind) == Construction::Linear ? r.m_linear : r.m_quadratic) = m;
      } else if (key == "kappa" || key == "lambda") {
        std::string arr;
        ls >> arr;
        (key == "kappa" ? kappa : lambda) = detail::parse_array(arr);
      } else if (key == "expect") {
        std::string kind, gk, gr, grp;
        int g = 0;
        ls >> kind >> gk >> g >> gr >> grp;
        if (gk != "genus" || gr != "group") throw fail("expected 'expect KIND genus G group SPEC'");
        if (parse_construction(kind) == Construction::Linear) {
          r.genus_linear = g;
          r.group_linear = parse_group(grp);
        } else {
          r.genus_quadratic = g;
          r.group_quadratic = parse_group(grp);
        }
      } else if (key == "special") {
        std::string kind, vals, pk, gk, grp;
        uint64_t p = 0;
        ls >> kind >> vals >> pk >> p >> gk >> grp;
        if (pk != "prime" || gk != "group") throw fail("expected 'special KIND VALUES prime P group SPEC'");
        SpecialPoint sp{parse_construction(kind), {}, p, parse_group(grp)};
        std::stringstream vs(vals);
        std::string kv;
        while (std::getline(vs, kv, ',')) {
          auto eq = kv.find('=');
          if (eq == std::string::npos) throw fail("bad assignment " + kv);
          sp.values.push_back({parse_var(kv.substr(0, eq)), parse_rational(kv.substr(eq + 1))});
        }
        r.specials.push_back(sp);
      } else if (key == "weil") {
        std::string kind, table;
        ls >> kind >> table;
        (parse_construction(kind) == Construction::Linear ? r.weil_linear : r.weil_quadratic) = table;
      } else if (key == "f" || key == "A") {
        std::string mono, arr;
        ls >> mono >> arr;
        auto v = detail::parse_array(arr);
        if (static_cast<int>(v.size()) != tower_size()) throw fail("array length != tower degree");
        (key == "f" ? frows : arows).push_back({detail::parse_mono(mono), v});
      } else {
        throw fail("unknown key '" + key + "'");
      }
    } catch (const ParseError& e) {
      std::string w = e.what();
      if (w.rfind(origin, 0) == 0) throw;
      throw fail(w);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }
  if (!format_seen) throw ParseError(origin + ": missing format line");
  if (!checksum_seen) throw ParseError(origin + ": missing checksum line");
  ensure_tower();
  r.tower = tw;
  r.f = QPoly(tw);
  r.A = QPoly(tw);
  for (auto& [m, v] : frows) r.f.add_term(m, NF(tw, v));
  for (auto& [m, v] : arows) r.A.add_term(m, NF(tw, v));
  if (kappa) r.kappa = NF(tw, *kappa);
  if (lambda) r.lambda = NF(tw, *lambda);
  if (r.f.degree(X) != r.n) throw InvariantViolation(origin + ": deg f = " + std::to_string(r.f.degree(X)) + " but index " + std::to_string(r.n));
  NF lead = r.f.coeff(mono_var(X, r.n));
  if (lead != NF(tw, r.leading)) throw InvariantViolation(origin + ": leading coefficient " + lead.pretty() + " != declared " + to_string(r.leading));
  return r;
}

inline FamilyRecord read_family_file(const std::filesystem::path& path) {
  if (path.empty()) throw ParseError("empty fixture path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_family(ss.str(), path.string());
}

inline std::string write_family(const FamilyRecord& r, const std::vector<std::string>& header_comments = {}) {
  std::string s;
  for (auto& c : header_comments) s += "# " + c + "\n";
  s += "format hyperjac-family 1\n";
  s += "family " + r.name + "\n";
  s += "index " + std::to_string(r.n) + "\n";
  const auto& tw = r.tower;
  for (int j = 0; j < tw->num_gens(); ++j) s += "generator " + tw->gen(j).name + " " + std::to_string(tw->gen(j).degree) + "\n";
  for (int j = 0; j < tw->num_gens(); ++j) {
    const auto& g = tw->gen(j);
    for (int k = 0; k < g.degree; ++k) s += "minpoly " + g.name + " " + std::to_string(k) + " " + detail::array_str(NF(tw, g.minpoly[k])) + "\n";
    if (!g.sigma.empty() && g.sigma != tw->generator_element(j)) s += "sigma " + g.name + " " + detail::array_str(NF(tw, g.sigma)) + "\n";
  }
  if (!r.params().empty()) s += "params t\n";
  s += "partner " + detail::partner_text(r.partner) + "\n";
  if (r.symmetry) s += "symmetry " + std::to_string(*r.symmetry) + "\n";
  s += "leading " + to_string(r.leading) + "\n";
  if (r.m_linear) s += "m linear " + std::to_string(*r.m_linear) + "\n";
  if (r.m_quadratic) s += "m quadratic " + std::to_string(*r.m_quadratic) + "\n";
  if (r.kappa) s += "kappa " + detail::array_str(*r.kappa) + "\n";
  if (r.lambda) s += "lambda " + detail::array_str(*r.lambda) + "\n";
  if (r.genus_linear) s += "expect linear genus " + std::to_string(*r.genus_linear) + " group " + r.group_linear->str() + "\n";
  if (r.genus_quadratic) s += "expect quadratic genus " + std::to_string(*r.genus_quadratic) + " group " + r.group_quadratic->str() + "\n";
  for (auto& sp : r.specials) {
    std::string vals;
    for (auto& [v, q] : sp.values) vals += (vals.empty() ? "" : ",") + std::string(kVarNames[v]) + "=" + to_string_short(q);
    s += "special " + std::string(to_string(sp.kind)) + " " + vals + " prime " + std::to_string(sp.prime) + " group " + sp.group.str() + "\n";
  }
  if (r.weil_linear) s += "weil linear " + *r.weil_linear + "\n";
  if (r.weil_quadratic) s += "weil quadratic " + *r.weil_quadratic + "\n";
  for (auto& [m, c] : r.f.terms()) s += "f " + detail::mono_text(m) + " " + detail::array_str(c) + "\n";
  for (auto& [m, c] : r.A.terms()) s += "A " + detail::mono_text(m) + " " + detail::array_str(c) + "\n";
  s += "checksum " + detail::hex8(crc32_of(s)) + "\n";
  return s;
}

inline const std::vector<std::string>& literal_family_names() {
  static const std::vector<std::string> names = {"f7", "f11", "f13", "f15", "f21", "f31"};
  return names;
}

inline std::vector<FamilyRecord> load_catalog(const std::filesystem::path& dir) {
  if (dir.empty()) throw ParseError("empty fixture path");
  std::vector<std::string> missing;
  for (auto& n : literal_family_names())
    if (!std::filesystem::exists(dir / (n + ".fam"))) missing.push_back(n);
  if (!missing.empty()) {
    std::string m;
    for (auto& x : missing) m += " " + x;
    throw MissingFixture("fixture directory " + dir.string() + " lacks:" + m);
  }
  std::vector<FamilyRecord> out;
  for (auto& n : literal_family_names()) {
    auto r = read_family_file(dir / (n + ".fam"));
    if (r.name != n) throw ParseError((dir / (n + ".fam")).string() + ": family name " + r.name + " != " + n);
    out.push_back(std::move(r));
  }
  return out;
}

inline const FamilyRecord& find_family(const std::vector<FamilyRecord>& cat, const std::string& name) {
  for (auto& r : cat)
    if (r.name == name) return r;
  throw std::invalid_argument("unknown family " + name);
}

// ---------- Dickson and cyclic ----------

// D_n over the rationals in variable v
inline QPoly dickson(int n, const TowerPtr& tw = FieldTower::rationals(), Var v = X) {
  if (n < 0) throw std::invalid_argument("dickson index must be >= 0");
  QPoly d0 = QPoly::constant(tw, 2), d1 = QPoly::var(tw, v);
  if (n == 0) return d0;
  for (int k = 2; k <= n; ++k) {
    QPoly d2 = QPoly::var(tw, v) * d1 - d0;
    d0 = d1;
    d1 = d2;
  }
  return d1;
}

// f = x^n over Q(zeta_n), A = x1 - zeta^e x2
inline FamilyRecord cyclic_record(int n, int e = 1) {
  if (n < 2 || e < 1 || e >= n) throw std::invalid_argument("cyclic record needs n >= 2, 1 <= e < n");
  FamilyRecord r;
  r.name = "cyclic-" + std::to_string(n);
  r.kind = FamilyKind::Cyclic;
  r.n = n;
  r.index = e;
  r.tower = cyclotomic_tower(n);
  NF z = NF::generator(r.tower, "z");
  r.f = QPoly::var(r.tower, X, n);
  r.A = QPoly::var(r.tower, X1) - QPoly(z.pow(e)) * QPoly::var(r.tower, X2);
  r.partner = Partner::Self;
  r.genus_linear = (n - 1) / 2;
  r.genus_quadratic = n - 1;
  return r;
}

inline QPoly dickson_factor(const TowerPtr& tw, int i) {
  NF z = NF::generator(tw, "z");
  NF zi = z.pow(i), zmi = zi.conj();
  NF d = zi - zmi;
  QPoly x1 = QPoly::var(tw, X1), x2 = QPoly::var(tw, X2);
  return x1 * x1 + x2 * x2 - QPoly(zi + zmi) * x1 * x2 + QPoly(d * d);
}

// f = D_n over Q(zeta_n), A = A_{n,i}
inline FamilyRecord dickson_record(int n, int i = 1) {
  if (n < 3 || n % 2 == 0 || i < 1 || 2 * i >= n) throw std::invalid_argument("dickson record needs odd n >= 3, 1 <= i <= (n-1)/2");
  FamilyRecord r;
  r.name = "dickson-" + std::to_string(n);
  r.kind = FamilyKind::Dickson;
  r.n = n;
  r.index = i;
  r.tower = cyclotomic_tower(n);
  r.f = dickson(n, r.tower);
  r.A = dickson_factor(r.tower, i);
  r.partner = Partner::Self;
  r.symmetry = 1;
  r.genus_linear = (n - 1) / 2;
  r.genus_quadratic = n - 1;
  return r;
}

// ---------- constructions ----------

template <class P>
struct HyperellipticModel {
  P h;  // in variable x
  int degree = 0;
  int genus = 0;
  bool odd() const { return degree % 2 == 1; }
};

template <class P>
HyperellipticModel<P> make_model(P h) {
  int d = h.degree(X);
  if (d < 3) throw InvariantViolation("hyperelliptic polynomial of degree " + std::to_string(d) + " has genus 0");
  return {std::move(h), d, (d - 1) / 2};
}

template <class P>
struct Correspondence {
  HyperellipticModel<P> X, Y;
  P A;  // in x1 (on X) and x2 (on Y)
};

using QCorrespondence = Correspondence<QPoly>;
using FCorrespondence = Correspondence<MPoly<FF>>;

// F(u) with F = u + s or u^2 + s1 u + s2
inline QPoly apply_outer(const QPoly& u, Construction kind) {
  const auto& tw = u.ctx();
  if (kind == Construction::Linear) return u + QPoly::var(tw, S);
  return u * u + QPoly::var(tw, S1) * u + QPoly::var(tw, S2);
}

inline QCorrespondence build_construction(const FamilyRecord& r, Construction kind) {
  QCorrespondence c;
  c.X = make_model(apply_outer(r.f, kind));
  c.Y = make_model(apply_outer(partner_poly(r), kind));
  c.A = r.A;
  return c;
}

inline int construction_genus(int n, Construction kind) { return kind == Construction::Linear ? (n - 1) / 2 : n - 1; }

// ---------- verification ----------

inline std::string short_poly(const QPoly& p, size_t max_terms = 4) {
  std::string s;
  size_t k = 0;
  for (auto& [m, c] : p.terms()) {
    if (k++ == max_terms) {
      s += " + ...";
      break;
    }
    if (!s.empty()) s += " + ";
    s += "(" + c.pretty() + ")*" + detail::mono_text(m);
  }
  return s.empty() ? "0" : s;
}

// cofactor B with f(x1) - g(x2) = A B
inline QPoly verify_factorization(const FamilyRecord& r) {
  const auto& tw = r.tower;
  QPoly P = r.f.rename({{X, X1}}) - partner_poly(r).rename({{X, X2}});
  if (r.kind == FamilyKind::Cyclic) {
    NF z = NF::generator(tw, "z");
    QPoly prod = QPoly::constant(tw, 1);
    for (int e = 0; e < r.n; ++e) prod *= QPoly::var(tw, X1) - QPoly(z.pow(e)) * QPoly::var(tw, X2);
    if (prod != P) throw FactorizationFails(r.name + ": product of linear factors != x1^n - x2^n");
  } else if (r.kind == FamilyKind::Dickson) {
    QPoly prod = QPoly::var(tw, X1) - QPoly::var(tw, X2);
    for (int i = 1; 2 * i < r.n; ++i) prod *= dickson_factor(tw, i);
    if (prod != P) throw FactorizationFails(r.name + ": (x1 - x2) * prod A_{n,i} != D_n(x1) - D_n(x2), difference " + short_poly(prod - P));
  }
  auto [B, rem] = P.divrem(r.A, X1);
  if (!rem.is_zero()) throw FactorizationFails(r.name + ": nonzero remainder " + short_poly(rem));
  return B;
}

inline int verify_symmetry(const FamilyRecord& r) {
  QPoly sw = r.A.swap_vars(X1, X2);
  QPoly conj = r.A.map_coeffs([](const NF& c) { return c.conj(); });
  int found = 0;
  if (sw == conj) found = 1;
  else if (sw == -conj) found = -1;
  if (found == 0) throw SymmetryFails(r.name + ": A(x2,x1) is not +-A^sigma(x1,x2)");
  if (r.symmetry && *r.symmetry != found)
    throw SymmetryFails(r.name + ": declared sign " + std::to_string(*r.symmetry) + ", found " + std::to_string(found));
  return found;
}

struct ConstantReport {
  std::string name;
  Construction kind;
  QPoly lower, upper;  // c2, c3 or c4, c5
  NF constant;
  bool holds = false;
};

// coefficient of x^(deg - i) of h, as a polynomial in the parameters
inline QPoly top_coefficient(const QPoly& h, int i) { return h.coeff_in(X, h.degree(X) - i); }

// Checked as an identity in the family parameters: at t = 0 both sides vanish for the t-families.
inline ConstantReport check_normalization_constant(const FamilyRecord& r, Construction kind) {
  ConstantReport rep{r.name, kind, QPoly(r.tower), QPoly(r.tower), NF(r.tower, 0L), false};
  const auto& c = kind == Construction::Linear ? r.kappa : r.lambda;
  if (!c) throw ConstantMismatch(r.name + ": no " + (kind == Construction::Linear ? std::string("kappa") : std::string("lambda")) + " declared");
  QPoly h = apply_outer(r.f, kind);
  int lo = kind == Construction::Linear ? 2 : 4;
  rep.lower = top_coefficient(h, lo);
  rep.upper = top_coefficient(h, lo + 1);
  rep.constant = *c;
  rep.holds = !rep.lower.is_zero() && rep.upper == QPoly(*c) * rep.lower;
  return rep;
}

inline std::vector<ConstantReport> check_normalization_constants(const FamilyRecord& r) {
  std::vector<ConstantReport> out;
  for (auto kind : {Construction::Linear, Construction::Quadratic}) {
    auto rep = check_normalization_constant(r, kind);
    if (!rep.holds)
      throw ConstantMismatch(r.name + " " + to_string(kind) + ": c_hi = " + short_poly(rep.upper) + " but constant * c_lo = " +
                             short_poly(QPoly(rep.constant) * rep.lower));
    out.push_back(rep);
  }
  return out;
}

// ---------- specialization ----------

template <class C>
bool squarefree_univariate(const MPoly<C>& h) {
  auto u = h.to_upoly(X);
  return gcd(u, u.derivative()).deg() == 0;
}

inline QPoly substitute_values(const QPoly& p, const std::vector<std::pair<Var, Rational>>& values) {
  std::map<Var, QPoly> bind;
  for (auto& [v, q] : values) bind.emplace(v, QPoly::constant(p.ctx(), 0) + QPoly(NF(p.ctx(), q)));
  return p.substitute(bind);
}

// char-0 specialization; discriminant checked unless a later reduction will check it
inline QCorrespondence specialize(const QCorrespondence& c, const std::vector<std::pair<Var, Rational>>& values, bool check_disc = true) {
  QCorrespondence r;
  r.X = make_model(substitute_values(c.X.h, values));
  r.Y = make_model(substitute_values(c.Y.h, values));
  r.A = substitute_values(c.A, values);
  if (check_disc) {
    if (!squarefree_univariate(r.X.h)) throw OnDiscriminantLocus("domain curve degenerates: h_X has a repeated root");
    if (!squarefree_univariate(r.Y.h)) throw OnDiscriminantLocus("codomain curve degenerates: h_Y has a repeated root");
  }
  return r;
}

inline FCorrespondence reduce(const QCorrespondence& c, const ReductionMap& red) {
  FCorrespondence r;
  r.X = make_model(red(c.X.h));
  r.Y = make_model(red(c.Y.h));
  r.A = red(c.A);
  if (r.X.degree != c.X.degree || r.Y.degree != c.Y.degree) throw BadReduction("leading coefficient vanishes mod " + std::to_string(red.target()->p()));
  if (!squarefree_univariate(r.X.h)) throw OnDiscriminantLocus("domain curve degenerates mod " + std::to_string(red.target()->p()));
  if (!squarefree_univariate(r.Y.h)) throw OnDiscriminantLocus("codomain curve degenerates mod " + std::to_string(red.target()->p()));
  return r;
}

// specialize then reduce; squarefree mod p implies squarefree in characteristic 0
inline FCorrespondence specialize(const QCorrespondence& c, const std::vector<std::pair<Var, Rational>>& values, const ReductionMap& red) {
  return reduce(specialize(c, values, false), red);
}

// ---------- reconstruction of a factor from its top form ----------

namespace detail {

// one solution of m x = rhs over K, throws if inconsistent
inline std::vector<NF> solve_nf(std::vector<std::vector<NF>> m, std::vector<NF> rhs, const TowerPtr& tw) {
  const size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<int> pivcol;
  size_t r = 0;
  for (size_t col = 0; col < cols && r < rows; ++col) {
    size_t piv = r;
    while (piv < rows && m[piv][col].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    std::swap(rhs[piv], rhs[r]);
    NF inv = m[r][col].inv();
    for (size_t j = col; j < cols; ++j) m[r][j] *= inv;
    rhs[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][col].is_zero()) continue;
      NF f = m[i][col];
      for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivcol.push_back(static_cast<int>(col));
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (!rhs[i].is_zero()) throw FactorizationFails("inconsistent linear system while lifting");
  std::vector<NF> x(cols, NF(tw, 0L));
  for (size_t i = 0; i < r; ++i) x[pivcol[i]] = rhs[i];
  return x;
}

}  // namespace detail

// P in K[x1,x2] and the top homogeneous form of a factor; returns the factor A with A | P
inline QPoly lift_factor(const QPoly& P, const QPoly& top) {
  const auto& tw = P.ctx();
  const std::vector<Var> vs = {X1, X2};
  const int n = P.total_degree(), dA = top.total_degree(), dB = n - dA;
  std::vector<QPoly> Ah(dA + 1, QPoly(tw)), Bh(dB + 1, QPoly(tw));
  Ah[dA] = top;
  Bh[dB] = P.homogeneous_part(vs, n).exact_div(top);
  for (int r = 1; r <= n; ++r) {
    int deg = n - r;
    QPoly target = P.homogeneous_part(vs, deg);
    for (int i = 0; i <= dA; ++i) {
      int j = deg - i;
      if (j < 0 || j > dB) continue;
      if ((i == dA - r && j == dB) || (i == dA && j == dB - r)) continue;
      target -= Ah[i] * Bh[j];
    }
    // unknowns: coefficients x1^k x2^(da-k) of A_{dA-r}, then of B_{dB-r}
    int da = dA - r, db = dB - r;
    int na = da >= 0 ? da + 1 : 0, nb = db >= 0 ? db + 1 : 0;
    if (na + nb == 0) {
      if (!target.is_zero()) throw FactorizationFails("top form does not lift: residue in degree " + std::to_string(deg));
      continue;
    }
    std::vector<std::vector<NF>> m(deg + 1, std::vector<NF>(na + nb, NF(tw, 0L)));
    auto row_of = [&](const Mono& mo) { return static_cast<int>(mo[X1]); };
    for (int k = 0; k < na; ++k) {
      QPoly col = QPoly::term(NF(tw, 1L), mono_mul(mono_var(X1, k), mono_var(X2, da - k))) * Bh[dB];
      for (auto& [mo, c] : col.terms()) m[row_of(mo)][k] += c;
    }
    for (int k = 0; k < nb; ++k) {
      QPoly col = QPoly::term(NF(tw, 1L), mono_mul(mono_var(X1, k), mono_var(X2, db - k))) * Ah[dA];
      for (auto& [mo, c] : col.terms()) m[row_of(mo)][na + k] += c;
    }
    std::vector<NF> rhs(deg + 1, NF(tw, 0L));
    for (auto& [mo, c] : target.terms()) rhs[row_of(mo)] += c;
    auto x = detail::solve_nf(m, rhs, tw);
    if (na) {
      Ah[da] = QPoly(tw);
      for (int k = 0; k < na; ++k) Ah[da].add_term(mono_mul(mono_var(X1, k), mono_var(X2, da - k)), x[k]);
    }
    if (nb) {
      Bh[db] = QPoly(tw);
      for (int k = 0; k < nb; ++k) Bh[db].add_term(mono_mul(mono_var(X1, k), mono_var(X2, db - k)), x[na + k]);
    }
  }
  QPoly A(tw), B(tw);
  for (auto& a : Ah) A += a;
  for (auto& b : Bh) B += b;
  if (A * B != P) throw FactorizationFails("lifted factors do not multiply back");
  return A;
}

}  // namespace hj
