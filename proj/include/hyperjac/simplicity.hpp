#pragma once

// Weil-coefficient tables, Weil polynomials, irreducibility witnesses and the Howe-Zhu absolute-simplicity test.

#include "catalog.hpp"
#include "finite_field.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hj {

struct NotPalindromic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ZPoly = std::vector<Integer>;  // dense, low..high

struct WeilData {
  Integer q;
  int g = 0;
  std::vector<Integer> w;  // w_1..w_g
  std::string comment;
};

// ---------- fixture I/O ----------

inline WeilData parse_weil(const std::string& text, const std::string& origin) {
  WeilData d;
  std::istringstream in(text);
  std::string line, before;
  int lineno = 0;
  bool have_q = false, have_g = false, have_sum = false;
  auto fail = [&](const std::string& msg) { throw ParseError(origin + ":" + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("checksum ", 0) == 0) {
      std::string want = line.substr(9);
      std::string got = detail::hex8(crc32_of(before));
      if (want != got) fail("checksum mismatch: file says " + want + ", contents give " + got);
      have_sum = true;
      continue;
    }
    if (have_sum) fail("content after checksum");
    before += line + "\n";
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (d.comment.empty()) d.comment = line.substr(line.find_first_not_of("# "));
      continue;
    }
    try {
      if (line.rfind("q ", 0) == 0) {
        d.q = Integer(line.substr(2));
        have_q = true;
      } else if (line.rfind("g ", 0) == 0) {
        d.g = std::stoi(line.substr(2));
        have_g = true;
      } else {
        d.w.emplace_back(line);
      }
    } catch (const std::invalid_argument&) {
      fail("not an integer: '" + line + "'");
    }
  }
  if (!have_q || !have_g) fail("missing q or g header");
  if (d.q < 2) fail("q must be at least 2");
  if (static_cast<int>(d.w.size()) != d.g) fail("expected " + std::to_string(d.g) + " coefficients, found " + std::to_string(d.w.size()));
  if (!have_sum) fail("missing checksum line");
  return d;
}

inline WeilData read_weil_file(const std::string& path) {
  if (path.empty()) throw ParseError("empty Weil table path");
  std::ifstream f(path);
  if (!f) throw MissingFixture("cannot open Weil table " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_weil(ss.str(), path);
}

inline std::string weil_path(const std::string& fixture_dir, const std::string& table) {
  return (std::filesystem::path(fixture_dir) / "weil" / (table + ".weil")).string();
}

inline std::string write_weil(const WeilData& d) {
  std::string s;
  if (!d.comment.empty()) s += "# " + d.comment + "\n";
  s += "q " + d.q.get_str() + "\n";
  s += "g " + std::to_string(d.g) + "\n";
  for (auto& x : d.w) s += x.get_str() + "\n";
  return s + "checksum " + detail::hex8(crc32_of(s)) + "\n";
}

// ---------- Weil polynomial ----------

inline Integer ipow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// x^2g + w1 x^(2g-1) + ... + wg x^g + w_(g-1) q x^(g-1) + ... + q^g
inline ZPoly weil_expand(const WeilData& d) {
  const int g = d.g;
  ZPoly c(2 * g + 1);
  c[2 * g] = 1;
  for (int k = 1; k <= g; ++k) c[2 * g - k] = d.w[k - 1];
  for (int k = 1; k <= g; ++k) c[g - k] = (k == g ? Integer(1) : d.w[g - k - 1]) * ipow(d.q, static_cast<unsigned long>(k));
  return c;
}

// x^2g chi(q/x) == q^g chi(x)
inline bool functional_equation_holds(const ZPoly& chi, const Integer& q) {
  const int n = static_cast<int>(chi.size()) - 1;
  if (n % 2) return false;
  const int g = n / 2;
  for (int i = 0; i <= n; ++i) {
    // coefficient of x^i on the left is chi[n - i] q^(n - i); on the right q^g chi[i]
    if (chi[n - i] * ipow(q, static_cast<unsigned long>(n - i)) != ipow(q, static_cast<unsigned long>(g)) * chi[i]) return false;
  }
  return true;
}

inline std::string zpoly_str(const ZPoly& p) {
  std::string s;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    if (p[i] == 0) continue;
    std::string c = p[i].get_str();
    if (!s.empty()) s += c[0] == '-' ? " - " : " + ";
    else if (c[0] == '-') s += "-";
    if (c[0] == '-') c = c.substr(1);
    if (i == 0 || c != "1") s += c;
    if (i > 0) s += (i == 0 || c != "1" ? "*" : std::string()) + (i == 1 ? std::string("x") : "x^" + std::to_string(i));
  }
  return s.empty() ? "0" : s;
}

// ---------- candidates and condition (1) ----------

inline int euler_phi(int n) {
  int r = n;
  for (int p : modp::prime_factors(n)) r = r / p * (p - 1);
  return r;
}

// d > 1 with phi(d) | 2g; phi(d) >= sqrt(d/2) bounds the scan
inline std::vector<int> candidate_degrees(int g) {
  std::vector<int> out;
  const int lim = 2 * (2 * g) * (2 * g) + 2;
  for (int d = 2; d <= lim; ++d)
    if ((2 * g) % euler_phi(d) == 0) out.push_back(d);
  return out;
}

inline bool in_power_ring(const ZPoly& chi, int d) {
  for (size_t i = 0; i < chi.size(); ++i)
    if (chi[i] != 0 && i % d != 0) return false;
  return true;
}

// ---------- modular helpers ----------

inline modp::Vec reduce_mod(const ZPoly& f, uint64_t p) {
  modp::Vec v(f.size());
  Integer P(static_cast<unsigned long>(p));
  for (size_t i = 0; i < f.size(); ++i) {
    Integer r = f[i] % P;
    if (r < 0) r += P;
    v[i] = r.get_ui();
  }
  modp::trim(v);
  return v;
}

inline modp::Vec derivative_mod(const modp::Vec& f, uint64_t p) {
  modp::Vec d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * (i % p) % p);
  modp::trim(d);
  return d;
}

inline bool squarefree_mod(const modp::Vec& f, uint64_t p) {
  auto d = derivative_mod(f, p);
  if (d.empty()) return f.size() <= 1;
  return modp::gcd(f, d, p).size() == 1;
}

// characteristic polynomial of an n x n matrix over F_p (Hessenberg reduction), low..high
inline modp::Vec charpoly_mod(std::vector<std::vector<uint64_t>> H, uint64_t p) {
  const int n = static_cast<int>(H.size());
  auto sub = [p](uint64_t a, uint64_t b) { return (a + p - b) % p; };
  for (int m = 1; m < n - 1; ++m) {
    int piv = -1;
    for (int i = m; i < n; ++i)
      if (H[i][m - 1]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != m) {
      std::swap(H[piv], H[m]);
      for (int i = 0; i < n; ++i) std::swap(H[i][piv], H[i][m]);
    }
    uint64_t inv = modp::inv(H[m][m - 1], p);
    for (int i = m + 1; i < n; ++i) {
      uint64_t u = H[i][m - 1] * inv % p;
      if (!u) continue;
      for (int j = 0; j < n; ++j) H[i][j] = sub(H[i][j], u * H[m][j] % p);
      for (int j = 0; j < n; ++j) H[j][m] = (H[j][m] + u * H[j][i]) % p;
    }
  }
  // p_k(x) = (x - h_kk) p_(k-1) - sum_(i<k) h_(i,k) prod_(j=i+1..k) h_(j,j-1) p_(i-1)
  std::vector<modp::Vec> P(n + 1);
  P[0] = {1};
  for (int k = 1; k <= n; ++k) {
    modp::Vec r(k + 1, 0);
    const auto& prev = P[k - 1];
    for (size_t i = 0; i < prev.size(); ++i) {
      r[i + 1] = (r[i + 1] + prev[i]) % p;
      r[i] = sub(r[i], H[k - 1][k - 1] * prev[i] % p);
    }
    uint64_t t = 1;
    for (int i = k - 1; i >= 1; --i) {
      t = t * H[i][i - 1] % p;
      if (!t) break;
      uint64_t c = t * H[i - 1][k - 1] % p;
      for (size_t j = 0; j < P[i - 1].size(); ++j) r[j] = sub(r[j], c * P[i - 1][j] % p);
    }
    modp::trim(r);
    P[k] = r;
  }
  return P[n];
}

// Res_y(chi(y), x - y^d) mod p: characteristic polynomial of multiplication by y^d on F_p[y]/chi
inline modp::Vec power_resultant_mod(const ZPoly& chi, int d, uint64_t p) {
  modp::Vec f = reduce_mod(chi, p);
  const int n = static_cast<int>(f.size()) - 1;
  modp::Vec col = modp::powmod_x(Integer(d), f, p);
  std::vector<std::vector<uint64_t>> M(n, std::vector<uint64_t>(n, 0));
  for (int j = 0; j < n; ++j) {
    for (size_t i = 0; i < col.size(); ++i) M[i][j] = col[i];
    col.insert(col.begin(), 0);
    col = modp::rem(col, f, p);
  }
  return charpoly_mod(M, p);
}

// same over the integers, from power sums of the roots
inline ZPoly power_resultant_exact(const ZPoly& chi, int d) {
  const int n = static_cast<int>(chi.size()) - 1;
  // chi = x^n + a_1 x^(n-1) + ... + a_n
  std::vector<Integer> a(n + 1);
  for (int i = 1; i <= n; ++i) a[i] = chi[n - i];
  const int K = n * d;
  std::vector<Integer> P(K + 1);
  for (int k = 1; k <= K; ++k) {
    Integer acc = 0;
    for (int i = 1; i <= std::min(k - 1, n); ++i) acc += a[i] * P[k - i];
    if (k <= n) acc += Integer(k) * a[k];
    P[k] = -acc;
  }
  std::vector<Integer> b(n + 1);
  for (int k = 1; k <= n; ++k) {
    Integer acc = P[static_cast<size_t>(k) * d];
    for (int i = 1; i < k; ++i) acc += b[i] * P[static_cast<size_t>(k - i) * d];
    if (acc % k != 0) throw InvariantViolation("power-sum recurrence is not integral");
    b[k] = -acc / k;
  }
  ZPoly r(n + 1);
  r[n] = 1;
  for (int k = 1; k <= n; ++k) r[n - k] = b[k];
  return r;
}

// ---------- exact squarefree test over Z (primitive remainder sequence) ----------

inline Integer content(const ZPoly& f) {
  Integer c = 0;
  for (auto& x : f) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
  return c;
}

inline void zp_trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ZPoly primitive_part(ZPoly f) {
  zp_trim(f);
  Integer c = content(f);
  if (c > 1)
    for (auto& x : f) x /= c;
  return f;
}

inline ZPoly pseudo_rem(ZPoly a, const ZPoly& b) {
  zp_trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const Integer& lb = b.back();
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    Integer la = a.back();
    int sh = static_cast<int>(a.size()) - 1 - db;
    for (auto& x : a) x *= lb;
    for (int i = 0; i <= db; ++i) a[sh + i] -= la * b[i];
    zp_trim(a);
  }
  return a;
}

inline int zgcd_degree(ZPoly a, ZPoly b) {
  a = primitive_part(a);
  b = primitive_part(b);
  while (!b.empty()) {
    ZPoly r = primitive_part(pseudo_rem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return static_cast<int>(a.size()) - 1;
}

inline bool squarefree_exact(const ZPoly& f) {
  ZPoly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * Integer(static_cast<unsigned long>(i)));
  return zgcd_degree(f, d) == 0;
}

// ---------- irreducibility ----------

inline std::vector<uint64_t> primes_up_to(uint64_t bound) {
  std::vector<uint64_t> out;
  for (uint64_t p = 2; p <= bound; ++p)
    if (is_prime_u64(p)) out.push_back(p);
  return out;
}

// smallest p <= bound with chi irreducible mod p
inline std::optional<uint64_t> irreducibility_witness(const ZPoly& chi, uint64_t bound) {
  for (uint64_t p : primes_up_to(bound)) {
    auto f = reduce_mod(chi, p);
    if (f.size() != chi.size()) continue;
    if (modp::is_irreducible(f, p)) return p;
  }
  return std::nullopt;
}

struct IrreducibilityEvidence {
  bool irreducible = false;
  std::vector<uint64_t> primes;  // one prime, or the primes whose factor-degree patterns rule out every proper degree
  std::vector<uint64_t> tried;
};

// a rational factor of degree k would give a subset of the mod-p factor degrees summing to k, for every good p
inline IrreducibilityEvidence prove_irreducible(const ZPoly& chi, uint64_t bound) {
  IrreducibilityEvidence ev;
  const int n = static_cast<int>(chi.size()) - 1;
  if (n <= 0) return ev;
  std::vector<uint8_t> possible(n + 1, 1);
  std::vector<uint64_t> used;
  for (uint64_t p : primes_up_to(bound)) {
    auto f = reduce_mod(chi, p);
    if (f.size() != chi.size() || !squarefree_mod(f, p)) continue;
    ev.tried.push_back(p);
    auto dd = modp::distinct_degree(f, p);
    if (dd.size() == 1 && dd[0].second == 1) {
      ev.irreducible = true;
      ev.primes = {p};
      return ev;
    }
    std::vector<uint8_t> sums(n + 1, 0);
    sums[0] = 1;
    for (auto [deg, cnt] : dd)
      for (int c = 0; c < cnt; ++c)
        for (int s = n; s >= deg; --s)
          if (sums[s - deg]) sums[s] = 1;
    bool narrowed = false;
    for (int k = 1; k < n; ++k)
      if (possible[k] && !sums[k]) {
        possible[k] = 0;
        narrowed = true;
      }
    if (narrowed) used.push_back(p);
    bool any = false;
    for (int k = 1; k < n; ++k) any = any || possible[k];
    if (!any) {
      ev.irreducible = true;
      ev.primes = used;
      return ev;
    }
  }
  return ev;
}

// ---------- Howe-Zhu ----------

enum class VerdictKind { AbsolutelySimple, Inconclusive, IrreducibilityUnknown };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::AbsolutelySimple: return "AbsolutelySimple";
    case VerdictKind::Inconclusive: return "Inconclusive";
    case VerdictKind::IrreducibilityUnknown: return "IrreducibilityUnknown";
  }
  return "?";
}

struct DegreeEvidence {
  int d = 0;
  bool power_ring = false;            // condition (1)
  std::optional<bool> squarefree;     // R_d squarefree, when computed
  std::optional<uint64_t> certificate; // prime with R_d squarefree mod p; absent if decided exactly
  bool exact_checked = false;         // exact R_d agreed with the modular one (deep mode)
  std::string reason;
};

struct SimplicityVerdict {
  VerdictKind kind = VerdictKind::IrreducibilityUnknown;
  IrreducibilityEvidence irreducibility;
  std::vector<DegreeEvidence> evidence;
  std::vector<int> inconclusive;  // d that could not be excluded
  bool palindromic = false;
};

inline constexpr uint64_t kDefaultPrimeBound = 2000;

// deep: also builds R_d over the integers and checks it against every modular certificate
inline SimplicityVerdict howe_zhu_check(const WeilData& w, uint64_t prime_bound = kDefaultPrimeBound, bool deep = false) {
  SimplicityVerdict v;
  ZPoly chi = weil_expand(w);
  v.palindromic = functional_equation_holds(chi, w.q);
  if (!v.palindromic) throw NotPalindromic("Weil polynomial fails x^2g chi(q/x) = q^g chi(x)");
  v.irreducibility = prove_irreducible(chi, prime_bound);
  if (!v.irreducibility.irreducible) return v;
  for (int d : candidate_degrees(w.g)) {
    DegreeEvidence e;
    e.d = d;
    e.power_ring = in_power_ring(chi, d);
    if (e.power_ring) {
      e.reason = "chi lies in Z[x^" + std::to_string(d) + "]";
      v.inconclusive.push_back(d);
      v.evidence.push_back(e);
      continue;
    }
    int tried = 0;
    for (uint64_t p = 3; tried < 40; p += 2) {
      if (!is_prime_u64(p)) continue;
      ++tried;
      auto R = power_resultant_mod(chi, d, p);
      if (squarefree_mod(R, p)) {
        e.squarefree = true;
        e.certificate = p;
        break;
      }
    }
    if (!e.squarefree || deep) {
      ZPoly R = power_resultant_exact(chi, d);
      if (e.certificate) {
        if (reduce_mod(R, *e.certificate) != power_resultant_mod(chi, d, *e.certificate))
          throw InvariantViolation("exact and modular R_" + std::to_string(d) + " disagree");
        e.exact_checked = true;
      } else {
        e.squarefree = squarefree_exact(R);
      }
    }
    if (*e.squarefree) {
      e.reason = e.certificate ? "R_d squarefree mod " + std::to_string(*e.certificate) : "R_d squarefree over Z";
    } else {
      e.reason = "R_d has a repeated root: [Q(pi):Q(pi^d)] > 1, compositum clause not checked";
      v.inconclusive.push_back(d);
    }
    v.evidence.push_back(e);
  }
  v.kind = v.inconclusive.empty() ? VerdictKind::AbsolutelySimple : VerdictKind::Inconclusive;
  return v;
}

}  // namespace hj
