// hyperjac-cli: command-line front end for the verification checks.

#include <hyperjac/report.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace hj;

namespace {

struct Globals {
  std::string fixtures;
  bool json = false;
  bool deep = false;
  uint64_t seed = 1;
  unsigned jobs = 1;
};

RunOptions options(const Globals& g) {
  RunOptions o;
  if (!g.fixtures.empty())
    o.fixtures = g.fixtures;
  else if (const char* env = std::getenv("HYPERJAC_FIXTURES"); env && *env)
    o.fixtures = env;
  o.deep = g.deep;
  o.seed = g.seed;
  o.jobs = g.jobs;
  return o;
}

std::vector<std::pair<Var, Rational>> parse_params(const std::string& s) {
  std::vector<std::pair<Var, Rational>> out;
  std::stringstream ss(s);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    kv.erase(std::remove_if(kv.begin(), kv.end(), ::isspace), kv.end());
    if (kv.empty()) continue;
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("expected name=value in '" + kv + "'");
    out.emplace_back(parse_var(kv.substr(0, eq)), parse_rational(kv.substr(eq + 1)));
  }
  return out;
}

int finish(const std::vector<VerificationReport>& reports, const Globals& g) {
  std::cout << emit_report(reports, g.json ? Format::Json : Format::Text);
  return exit_code(reports);
}

int print_json_or_text(const Json& j, const std::string& text, const Globals& g) {
  if (g.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
  return 0;
}

int config_error(const std::string& kind, const std::string& msg, const Globals& g, const std::vector<std::string>& missing = {}) {
  if (g.json) {
    Json j;
    j["schema"] = kReportSchema;
    j["status"] = "error";
    j["error"]["kind"] = kind;
    j["error"]["message"] = msg;
    if (!missing.empty()) j["error"]["missing"] = missing;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cerr << "error: " << msg << "\n";
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperjac-cli: exact checks of isogenies between hyperelliptic Jacobians"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--fixtures", g.fixtures, "fixture directory (default: $HYPERJAC_FIXTURES or the build-time path)");
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_flag("--deep", g.deep, "exact integer cross-checks and second-prime kernel confirmation");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1u, 256u));

  std::string family, construction = "linear", params, weil, table;
  uint64_t prime = 0, prime_bound = kDefaultPrimeBound;
  int count = 10;
  bool extended = false;
  std::vector<std::string> families;

  auto* cat = app.add_subcommand("catalog", "family catalog checks")->require_subcommand(1);
  auto* cat_verify = cat->add_subcommand("verify", "factorization, symmetry, constants and genus");
  cat_verify->add_option("--family", families, "family names (default: all literal families)");
  cat_verify->add_flag("--extended", extended, "also cyclic and Dickson families of degree <= 13");

  auto* diff = app.add_subcommand("diff", "differential matrices")->require_subcommand(1);
  auto* diff_matrix_cmd = diff->add_subcommand("matrix", "matrix of the correspondence on regular differentials");
  auto* diff_rosati = diff->add_subcommand("rosati", "product with the dual matrix");
  for (auto* c : {diff_matrix_cmd, diff_rosati}) {
    c->add_option("--family", family, "family name, cyclic-N-E or dickson-N-I")->required();
    c->add_option("--construction", construction, "linear or quadratic");
  }

  auto* kern = app.add_subcommand("kernel", "kernel group at a specialization");
  kern->add_option("--family", family, "family name")->required();
  kern->add_option("--construction", construction, "linear or quadratic");
  kern->add_option("--params", params, "specialization, e.g. \"t=1,s=425\" (default: recorded point)");
  kern->add_option("--prime", prime, "prime (default: recorded prime)");

  auto* jac = app.add_subcommand("jac", "Jacobian arithmetic")->require_subcommand(1);
  auto* roundtrip = jac->add_subcommand("roundtrip", "dual composite equals multiplication by m");
  roundtrip->add_option("--family", family, "family name")->required();
  roundtrip->add_option("--construction", construction, "linear or quadratic");
  roundtrip->add_option("--prime", prime, "smallest prime to try (default 11)");
  roundtrip->add_option("--count", count, "random divisor classes")->check(CLI::Range(1, 10000));

  auto* simple = app.add_subcommand("simple", "absolute simplicity from a Weil table");
  auto* weil_opt = simple->add_option("--weil", weil, "Weil table file");
  simple->add_option("--table", table, "table name in the fixture directory, e.g. linear-11")->excludes(weil_opt);
  simple->add_option("--prime-bound", prime_bound, "largest prime tried for certificates");

  auto* theorem = app.add_subcommand("theorem-table", "all checks for the twelve table rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunOptions opt = options(g);
  opt.prime_bound = prime_bound;
  try {
    if (*cat_verify) {
      if (families.empty()) families = literal_family_names();
      if (extended) {
        for (int n = 2; n <= 13; ++n)
          for (int e = 1; e < n; ++e) families.push_back("cyclic-" + std::to_string(n) + "-" + std::to_string(e));
        for (int n = 3; n <= 13; n += 2)
          for (int i = 1; 2 * i < n; ++i) families.push_back("dickson-" + std::to_string(n) + "-" + std::to_string(i));
      }
      for (auto& f : families)
        if (f.rfind("f", 0) == 0) require_fixtures(opt.fixtures, false);
      return finish(run_catalog_verify(opt, families), g);
    }
    if (*diff_matrix_cmd || *diff_rosati) {
      auto kind = parse_construction(construction);
      auto r = resolve_family(opt.fixtures, family);
      auto corr = build_construction(r, kind);
      if (*diff_matrix_cmd) {
        auto M = diff_matrix(corr);
        Json j;
        j["schema"] = kReportSchema;
        j["family"] = r.name;
        j["construction"] = to_string(kind);
        j["rows"] = M.rows();
        j["cols"] = M.cols();
        Json e = Json::array();
        std::string text;
        for (int i = 0; i < M.rows(); ++i) {
          Json row = Json::array();
          for (int k = 0; k < M.cols(); ++k) {
            row.push_back(M.at(i, k).str());
            text += "(" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ") " + M.at(i, k).str() + "\n";
          }
          e.push_back(row);
        }
        j["entries"] = e;
        return print_json_or_text(j, text, g);
      }
      VerificationReport rep{r.name + " " + to_string(kind)};
      rep.checks.push_back(rosati_check(r, kind));
      return finish({rep}, g);
    }
    if (*kern) {
      auto kind = parse_construction(construction);
      require_fixtures(opt.fixtures, false);
      auto r = resolve_family(opt.fixtures, family);
      VerificationReport rep{r.name + " " + to_string(kind)};
      if (params.empty() && prime == 0) {
        rep.checks.push_back(kernel_check(r, kind, opt.deep));
      } else {
        if (prime == 0) return config_error("usage", "--params needs --prime", g);
        auto values = parse_params(params);
        rep.checks.push_back(run_check("kernel", "kernel", [&](Check& c) {
          auto k = full_kernel_report(r, kind, values, prime, opt.deep);
          c.evidence = kernel_json(k);
          c.status = k.matches_expected() ? CheckStatus::Pass : CheckStatus::Fail;
          if (!k.matches_expected()) c.message = "computed " + k.group.str() + ", catalog " + k.expected->str();
        }));
      }
      return finish({rep}, g);
    }
    if (*roundtrip) {
      auto kind = parse_construction(construction);
      require_fixtures(opt.fixtures, false);
      auto r = resolve_family(opt.fixtures, family);
      VerificationReport rep{r.name + " " + to_string(kind)};
      rep.checks.push_back(roundtrip_check(r, kind, prime ? prime : 11, count, opt.seed));
      return finish({rep}, g);
    }
    if (*simple) {
      std::filesystem::path file;
      if (!weil.empty())
        file = weil;
      else if (!table.empty())
        file = weil_path(opt.fixtures, table);
      else
        return config_error("usage", "simple needs --weil or --table", g);
      if (!std::filesystem::exists(file)) return config_error("missing_fixture", "cannot open Weil table " + file.string(), g, {file.string()});
      read_weil_file(file.string());  // parse errors are configuration errors
      VerificationReport rep{file.stem().string()};
      rep.checks.push_back(simplicity_check(file, opt.prime_bound, opt.deep));
      return finish({rep}, g);
    }
    if (*theorem) {
      auto miss = missing_fixtures(opt.fixtures);
      if (!miss.empty()) return config_error("missing_fixture", "fixture directory " + opt.fixtures.string() + " is incomplete", g, miss);
      return finish(run_theorem_table(opt), g);
    }
  } catch (const MissingFixture& e) {
    return config_error("missing_fixture", e.what(), g, missing_fixtures(opt.fixtures, false));
  } catch (const ParseError& e) {
    return config_error("parse", e.what(), g);
  } catch (const std::invalid_argument& e) {
    return config_error("usage", e.what(), g);
  } catch (const std::exception& e) {
    return config_error("internal", e.what(), g);
  }
  return 2;
}
