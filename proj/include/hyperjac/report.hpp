#pragma once

// Verification reports: per-row checks of the theorem table, serialization, exit codes.

#include <hyperjac/hyperjac.hpp>

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <thread>

namespace hj {

inline constexpr const char* kReportSchema = "hyperjac-report/1";

enum class CheckStatus { Pass, Fail, Skip };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "skip";
  }
}

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;    // factorization, symmetry, constant, rosati, kernel, simplicity, roundtrip, ...
  std::string module;  // catalog, differential, kernel, simplicity, jacobian
  CheckStatus status = CheckStatus::Skip;
  std::string message;
  Json evidence = Json::object();
};

struct VerificationReport {
  std::string subject;  // e.g. "f15 quadratic"
  std::vector<Check> checks;
  bool failed() const {
    for (auto& c : checks)
      if (c.status == CheckStatus::Fail) return true;
    return false;
  }
};

struct RunOptions {
  std::filesystem::path fixtures = HYPERJAC_FIXTURE_DIR;
  bool deep = false;
  unsigned jobs = 1;
  uint64_t seed = 1;
  uint64_t prime_bound = kDefaultPrimeBound;
};

// 0 all pass, 1 any failure
inline int exit_code(const std::vector<VerificationReport>& reports) {
  for (auto& r : reports)
    if (r.failed()) return 1;
  return 0;
}

// ---------- serialization ----------

inline Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["module"] = c.module;
  j["status"] = to_string(c.status);
  if (!c.message.empty()) j["message"] = c.message;
  j["evidence"] = c.evidence;
  return j;
}

inline Json to_json(const std::vector<VerificationReport>& reports) {
  Json j;
  j["schema"] = kReportSchema;
  j["status"] = exit_code(reports) == 0 ? "pass" : "fail";
  Json arr = Json::array();
  for (auto& r : reports) {
    Json jr;
    jr["subject"] = r.subject;
    jr["status"] = r.failed() ? "fail" : "pass";
    Json cs = Json::array();
    for (auto& c : r.checks) cs.push_back(to_json(c));
    jr["checks"] = cs;
    arr.push_back(jr);
  }
  j["reports"] = arr;
  return j;
}

enum class Format { Text, Json };

inline std::string emit_report(const std::vector<VerificationReport>& reports, Format fmt) {
  if (fmt == Format::Json) return to_json(reports).dump(2) + "\n";
  std::string s;
  for (auto& r : reports) {
    s += r.subject + ": " + (r.failed() ? "FAIL" : "pass") + "\n";
    for (auto& c : r.checks) {
      s += "  " + std::string(to_string(c.status)) + "  " + c.name;
      if (!c.message.empty()) s += "  " + c.message;
      s += "\n";
    }
  }
  return s;
}

inline Json rational_json(const Rational& q) { return to_string(q); }

inline Json values_json(const std::vector<std::pair<Var, Rational>>& values) {
  Json j = Json::object();
  for (auto& [v, q] : values) j[kVarNames[v]] = to_string(q);
  return j;
}

// ---------- fixtures ----------

// absent family and Weil files, as paths relative to the fixture directory
inline std::vector<std::string> missing_fixtures(const std::filesystem::path& dir, bool weil = true) {
  std::vector<std::string> out;
  for (auto& n : literal_family_names())
    if (!std::filesystem::exists(dir / (n + ".fam"))) out.push_back(n + ".fam");
  if (!out.empty() || !weil) return out;
  for (auto& r : load_catalog(dir))
    for (auto& t : {r.weil_linear, r.weil_quadratic})
      if (t && !std::filesystem::exists(weil_path(dir, *t))) out.push_back("weil/" + *t + ".weil");
  return out;
}

inline void require_fixtures(const std::filesystem::path& dir, bool weil = true) {
  auto miss = missing_fixtures(dir, weil);
  if (miss.empty()) return;
  std::string m;
  for (auto& x : miss) m += " " + x;
  throw MissingFixture("fixture directory " + dir.string() + " lacks:" + m);
}

// ---------- single checks ----------

template <class F>
Check run_check(std::string name, std::string module, F&& body) {
  Check c{std::move(name), std::move(module)};
  try {
    body(c);
  } catch (const std::exception& e) {
    c.status = CheckStatus::Fail;
    c.message = e.what();
  }
  return c;
}

inline Check factorization_check(const FamilyRecord& r) {
  return run_check("factorization", "catalog", [&](Check& c) {
    QPoly B = verify_factorization(r);
    c.status = CheckStatus::Pass;
    c.evidence["remainder"] = "0";
    c.evidence["cofactor_degree_x1"] = B.degree(X1);
  });
}

inline Check symmetry_check(const FamilyRecord& r) {
  return run_check("symmetry", "catalog", [&](Check& c) {
    int sign = verify_symmetry(r);
    c.status = CheckStatus::Pass;
    c.evidence["sign"] = sign;
  });
}

inline Check constant_check(const FamilyRecord& r, Construction kind) {
  return run_check("constant", "catalog", [&](Check& c) {
    auto rep = check_normalization_constant(r, kind);
    c.status = rep.holds ? CheckStatus::Pass : CheckStatus::Fail;
    c.evidence["constant"] = rep.constant.str();
    c.evidence["lower"] = rep.lower.str();
    c.evidence["upper"] = rep.upper.str();
    if (!rep.holds) c.message = "upper coefficient is not constant * lower coefficient";
  });
}

inline Check genus_check(const FamilyRecord& r, Construction kind) {
  return run_check("genus", "catalog", [&](Check& c) {
    auto corr = build_construction(r, kind);
    auto expect = kind == Construction::Linear ? r.genus_linear : r.genus_quadratic;
    c.evidence["genus"] = corr.X.genus;
    c.evidence["degree"] = corr.X.degree;
    if (expect) c.evidence["expected"] = *expect;
    c.status = (!expect || *expect == corr.X.genus) && corr.X.genus == corr.Y.genus ? CheckStatus::Pass : CheckStatus::Fail;
    if (c.status == CheckStatus::Fail) c.message = "genus differs from the catalog";
  });
}

inline Check rosati_check(const FamilyRecord& r, Construction kind) {
  return run_check("rosati", "differential", [&](Check& c) {
    auto chk = check_family_differentials(r, kind);
    c.evidence["m"] = chk.m.get_si();
    if (chk.expected_m) c.evidence["expected"] = *chk.expected_m;
    c.evidence["lower_triangular"] = chk.lower_triangular;
    c.evidence["dual_is_conjugate"] = chk.sigma_relation;
    c.evidence["diagonal_norms"] = chk.diagonal_norms;
    bool ok = chk.lower_triangular && chk.sigma_relation && chk.diagonal_norms && (!chk.expected_m || chk.m == *chk.expected_m);
    c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    c.message = "m = " + chk.m.get_str();
  });
}

inline Json kernel_json(const KernelReport& k) {
  Json j;
  j["family"] = k.family;
  j["construction"] = to_string(k.kind);
  j["values"] = values_json(k.values);
  j["prime"] = k.prime;
  j["field_degree"] = k.field_degree;
  j["genus"] = k.genus;
  j["m"] = k.m;
  if (k.nu) j["nullity"] = *k.nu;
  if (k.nu_literal) j["nullity_reference_dropped"] = *k.nu_literal;
  j["group"] = k.group.str();
  j["order"] = k.order.get_str();
  j["degree_drops"] = k.degree_drops;
  if (k.second_prime) j["second_prime"] = *k.second_prime;
  if (k.second_group) j["second_group"] = k.second_group->str();
  if (k.expected) j["expected"] = k.expected->str();
  return j;
}

inline Check kernel_check(const FamilyRecord& r, Construction kind, bool second_prime) {
  return run_check("kernel", "kernel", [&](Check& c) {
    auto corr = build_construction(r, kind);
    int m = static_cast<int>(rosati_product(corr).get_si());
    int g = corr.X.genus;
    auto expect = kind == Construction::Linear ? r.group_linear : r.group_quadratic;
    if (m == 2 || m == 3) {
      auto grp = kernel_group(m, g);
      c.evidence["m"] = m;
      c.evidence["genus"] = g;
      c.evidence["group"] = grp.str();
      c.evidence["order"] = group_order(grp).get_str();
      if (expect) c.evidence["expected"] = expect->str();
      c.status = !expect || *expect == grp ? CheckStatus::Pass : CheckStatus::Fail;
      c.message = grp.str() + " from m and genus";
      return;
    }
    const SpecialPoint* sp = nullptr;
    for (auto& s : r.specials)
      if (s.kind == kind) sp = &s;
    if (!sp) {
      c.status = CheckStatus::Skip;
      c.message = "no specialization recorded";
      return;
    }
    auto rep = full_kernel_report(r, *sp, second_prime);
    c.evidence = kernel_json(rep);
    bool ok = rep.matches_expected() && (!rep.second_group || *rep.second_group == rep.group);
    c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    c.message = rep.group.str() + " at p=" + std::to_string(rep.prime) + " (nullity " + std::to_string(rep.nu.value_or(-1)) + ")";
    if (!rep.matches_expected()) c.message = "computed " + rep.group.str() + ", catalog " + rep.expected->str() + "; " + c.message;
  });
}

inline Json verdict_json(const WeilData& w, const SimplicityVerdict& v) {
  Json j;
  j["q"] = w.q.get_str();
  j["genus"] = w.g;
  j["verdict"] = to_string(v.kind);
  j["palindromic"] = v.palindromic;
  j["irreducible"] = v.irreducibility.irreducible;
  j["irreducibility_primes"] = v.irreducibility.primes;
  Json ds = Json::array();
  for (auto& e : v.evidence) {
    Json d;
    d["d"] = e.d;
    d["power_ring"] = e.power_ring;
    if (e.squarefree) d["squarefree"] = *e.squarefree;
    if (e.certificate) d["certificate_prime"] = *e.certificate;
    if (e.exact_checked) d["exact_checked"] = true;
    ds.push_back(d);
  }
  j["degrees"] = ds;
  j["inconclusive"] = v.inconclusive;
  return j;
}

inline Check simplicity_check(const std::filesystem::path& weil_file, uint64_t bound, bool deep) {
  return run_check("simplicity", "simplicity", [&](Check& c) {
    auto w = read_weil_file(weil_file.string());
    auto v = howe_zhu_check(w, bound, deep);
    c.evidence = verdict_json(w, v);
    c.evidence["table"] = weil_file.stem().string();
    c.status = v.kind == VerdictKind::AbsolutelySimple ? CheckStatus::Pass : CheckStatus::Fail;
    c.message = to_string(v.kind) + " (" + weil_file.stem().string() + ", g=" + std::to_string(w.g) + ")";
  });
}

inline Check simplicity_check(const FamilyRecord& r, Construction kind, const RunOptions& opt) {
  auto t = kind == Construction::Linear ? r.weil_linear : r.weil_quadratic;
  if (!t) {
    Check c{"simplicity", "simplicity", CheckStatus::Skip, "no Weil table"};
    return c;
  }
  return simplicity_check(weil_path(opt.fixtures, *t), opt.prime_bound, opt.deep);
}

// ---------- isogeny round trip ----------

struct RoundTrip {
  uint64_t prime = 0;
  int field_degree = 1;
  int m = 0;
  int divisors = 0, composite_ok = 0;
  int torsion = 0, torsion_ok = 0;
  std::vector<std::pair<Var, Rational>> values;
};

// specializes the construction at a prime >= start where the tower has a degree-one prime above it, splits both
// models over an extension of degree <= max_degree, then checks dual(phi(D)) = [m] D and the 2-torsion images
inline RoundTrip isogeny_roundtrip(const FamilyRecord& r, Construction kind, uint64_t start, int count, uint64_t seed, uint64_t limit = 1000,
                                   int max_degree = 6) {
  std::mt19937_64 rng(seed);
  auto q = build_construction(r, kind);
  int m = static_cast<int>(rosati_product(q).get_si());
  std::vector<Var> vars = r.params();
  for (Var v : kind == Construction::Linear ? std::vector<Var>{S} : std::vector<Var>{S1, S2}) vars.push_back(v);
  for (uint64_t p = std::max<uint64_t>(start, 3); p <= limit; ++p) {
    if (!detail::is_prime(p)) continue;
    ReductionMap red;
    try {
      red = build_reduction(r.tower, p);
    } catch (const std::exception&) {
      continue;
    }
    if (red.target()->k() != 1) continue;
    for (int tries = 0; tries < 10; ++tries) {
      std::vector<std::pair<Var, Rational>> vals;
      for (Var v : vars) vals.emplace_back(v, Rational(static_cast<long>(rng() % p)));
      SplitCorrespondence s;
      try {
        s = split_correspondence(specialize(q, vals, red), max_degree);
      } catch (const std::exception&) {
        continue;
      }
      RoundTrip out;
      out.prime = p;
      out.field_degree = s.field->k();
      out.m = m;
      out.values = vals;
      auto JX = JacobianCtx::make(s.hX), JY = JacobianCtx::make(s.hY);
      MPoly<FF> dual = s.A.swap_vars(X1, X2);
      for (int k = 0; k < count; ++k) {
        auto D = random_divisor(*JX, rng);
        auto back = apply_correspondence(*JY, *JX, dual, apply_correspondence(*JX, *JY, s.A, D));
        ++out.divisors;
        if (back == JX->scalar_mul(D, m)) ++out.composite_ok;
      }
      auto T = multiplicity_matrix_from_roots(s.A, s.gamma, s.delta);
      for (int i = 0; i < 2 * JX->genus(); ++i) {
        MumfordDivisor Ti{FPoly::linear(s.gamma[i]), FPoly(JX->field())};
        ++out.torsion;
        if (apply_correspondence(*JX, *JY, s.A, Ti) == predicted_two_torsion_image(*JY, T, i)) ++out.torsion_ok;
      }
      return out;
    }
  }
  throw std::runtime_error(r.name + " " + to_string(kind) + ": no split specialization found below " + std::to_string(limit));
}

inline Check roundtrip_check(const FamilyRecord& r, Construction kind, uint64_t start, int count, uint64_t seed) {
  return run_check("roundtrip", "jacobian", [&](Check& c) {
    auto rt = isogeny_roundtrip(r, kind, start, count, seed);
    c.evidence["prime"] = rt.prime;
    c.evidence["field_degree"] = rt.field_degree;
    c.evidence["values"] = values_json(rt.values);
    c.evidence["m"] = rt.m;
    c.evidence["divisors"] = rt.divisors;
    c.evidence["composite_ok"] = rt.composite_ok;
    c.evidence["two_torsion"] = rt.torsion;
    c.evidence["two_torsion_ok"] = rt.torsion_ok;
    bool ok = rt.divisors == rt.composite_ok && rt.torsion == rt.torsion_ok;
    c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    c.message = std::to_string(rt.composite_ok) + "/" + std::to_string(rt.divisors) + " composites, " + std::to_string(rt.torsion_ok) + "/" +
                std::to_string(rt.torsion) + " 2-torsion images at p=" + std::to_string(rt.prime);
    if (!ok) c.message = std::to_string(rt.divisors - rt.composite_ok) + " composite and " + std::to_string(rt.torsion - rt.torsion_ok) + " torsion mismatches";
  });
}

// ---------- sweeps ----------

// runs tasks on up to `jobs` threads; results keep task order
template <class R>
std::vector<R> run_parallel(const std::vector<std::function<R()>>& tasks, unsigned jobs) {
  std::vector<R> out(tasks.size());
  std::vector<std::exception_ptr> err(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) try {
        out[i] = tasks[i]();
      } catch (...) {
        err[i] = std::current_exception();
      }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

inline std::vector<VerificationReport> run_theorem_table(const RunOptions& opt) {
  require_fixtures(opt.fixtures);
  auto cat = load_catalog(opt.fixtures);
  std::vector<std::function<VerificationReport()>> tasks;
  for (auto& r : cat)
    for (auto kind : {Construction::Linear, Construction::Quadratic})
      tasks.push_back([&r, kind, &opt] {
        VerificationReport rep{r.name + " " + to_string(kind)};
        rep.checks.push_back(factorization_check(r));
        rep.checks.push_back(symmetry_check(r));
        rep.checks.push_back(genus_check(r, kind));
        rep.checks.push_back(constant_check(r, kind));
        rep.checks.push_back(rosati_check(r, kind));
        rep.checks.push_back(kernel_check(r, kind, opt.deep));
        rep.checks.push_back(simplicity_check(r, kind, opt));
        return rep;
      });
  return run_parallel(tasks, opt.jobs);
}

// named families: catalog names, cyclic-N-E, dickson-N-I
inline FamilyRecord resolve_family(const std::filesystem::path& fixtures, const std::string& name) {
  auto parse2 = [&](const std::string& prefix) {
    auto rest = name.substr(prefix.size());
    auto dash = rest.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("expected " + prefix + "N-K, got " + name);
    return std::pair{std::stoi(rest.substr(0, dash)), std::stoi(rest.substr(dash + 1))};
  };
  if (name.rfind("cyclic-", 0) == 0) {
    auto [n, e] = parse2("cyclic-");
    return cyclic_record(n, e);
  }
  if (name.rfind("dickson-", 0) == 0) {
    auto [n, i] = parse2("dickson-");
    return dickson_record(n, i);
  }
  for (auto& n : literal_family_names())
    if (n == name) return read_family_file(fixtures / (n + ".fam"));
  throw std::invalid_argument("unknown family " + name);
}

inline std::vector<VerificationReport> run_catalog_verify(const RunOptions& opt, const std::vector<std::string>& names) {
  std::vector<std::function<VerificationReport()>> tasks;
  for (auto& n : names)
    tasks.push_back([n, &opt] {
      VerificationReport rep{n};
      FamilyRecord r;
      try {
        r = resolve_family(opt.fixtures, n);
      } catch (const std::exception& e) {
        rep.checks.push_back(Check{"load", "catalog", CheckStatus::Fail, e.what()});
        return rep;
      }
      rep.checks.push_back(factorization_check(r));
      if (r.kind != FamilyKind::Cyclic) rep.checks.push_back(symmetry_check(r));
      if (r.kind == FamilyKind::Literal)
        for (auto kind : {Construction::Linear, Construction::Quadratic}) {
          auto c = constant_check(r, kind);
          c.name += std::string(" ") + to_string(kind);
          rep.checks.push_back(c);
          auto g = genus_check(r, kind);
          g.name += std::string(" ") + to_string(kind);
          rep.checks.push_back(g);
        }
      return rep;
    });
  return run_parallel(tasks, opt.jobs);
}

}  // namespace hj
