#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "legendre/asymptotics.hpp"
#include "legendre/bhargava.hpp"
#include "legendre/constants.hpp"
#include "legendre/errors.hpp"
#include "legendre/fmap.hpp"
#include "legendre/legendre_core.hpp"
#include "legendre/prime_engine.hpp"
#include "legendre/verification.hpp"

namespace {

using namespace legendre;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerify = 3;

// Decimals that 2^-bits resolves, for printing enclosures.
int decimals_for(Precision bits) { return std::max(6, static_cast<int>(bits * 0.30103) - 4); }

struct RunConfig {
  Precision precision = kDefaultPrecision;
  std::string cache_dir;
  std::string format = "text";
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::size_t digit_cap = 5000;
};

void emit_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

std::string enclosure_text(const BoundedValue& v, Precision prec) { return v.to_string(decimals_for(prec)); }

nlohmann::json enclosure_json(const BoundedValue& v, Precision prec) {
  const int d = decimals_for(prec);
  return {{"lo", v.lo().fixed(d, MPFR_RNDD)}, {"hi", v.hi().fixed(d, MPFR_RNDU)}};
}

// ffact ---------------------------------------------------------------------

struct FfactArgs {
  std::string f;
  std::string n;
};

int cmd_ffact(const RunConfig& cfg, const FfactArgs& args) {
  const FMap f = FMap::parse(args.f);
  const std::vector<std::uint64_t> ns = parse_rows(args.n);
  nlohmann::json all = nlohmann::json::array();
  std::ostringstream text;
  for (std::uint64_t n : ns) {
    const ExponentVector exps = factorial_exponents(f, n);
    const BoundedValue log = log_factorial(f, n, cfg.precision);
    const std::size_t digits = exps.decimal_digits();
    std::optional<std::string> value;
    if (digits <= cfg.digit_cap) value = exps.value().get_str();

    if (cfg.format == "json") {
      nlohmann::json j = exps.to_json();
      j["value"] = value ? nlohmann::json(*value) : nlohmann::json(nullptr);
      j["digits"] = digits;
      j["log"] = enclosure_json(log, cfg.precision);
      all.push_back(std::move(j));
    } else if (cfg.format == "csv") {
      if (text.tellp() == 0) text << "f,n,value,digits,log_lo,log_hi\r\n";
      const int d = decimals_for(cfg.precision);
      text << csv_field(f.dsl()) << ',' << n << ',' << (value ? *value : "") << ',' << digits << ','
           << log.lo().fixed(d, MPFR_RNDD) << ',' << log.hi().fixed(d, MPFR_RNDU) << "\r\n";
    } else {
      text << "f = " << f.dsl() << ", n = " << n << '\n';
      text << "factors: " << exps.to_json().dump() << '\n';
      if (value) {
        text << "value: " << *value << '\n';
      } else {
        text << "value: (" << digits << " digits, above the digit cap of " << cfg.digit_cap << ")\n";
      }
      text << "log: " << enclosure_text(log, cfg.precision) << '\n';
    }
  }
  if (cfg.format == "json") {
    emit_json(all.size() == 1 ? all[0] : all);
  } else {
    std::cout << text.str();
  }
  return kExitOk;
}

// bhargava ------------------------------------------------------------------

struct BhargavaArgs {
  std::string set;
  std::string set_file;
  std::uint64_t n = 0;
  bool show_orderings = false;
};

std::string ordering_line(const POrdering& o) {
  std::ostringstream os;
  os << "  p = " << o.p << ": ";
  for (std::size_t i = 0; i < o.sequence.size(); ++i) {
    os << (i ? ", " : "") << o.sequence[i] << " (" << o.step_valuations[i] << ")";
  }
  os << '\n';
  return os.str();
}

int cmd_bhargava(const RunConfig& cfg, const BhargavaArgs& args) {
  const IntegerSet s = args.set_file.empty() ? IntegerSet::parse(args.set) : IntegerSet::from_file(args.set_file);
  const BhargavaFactorial result = factorial_s(s, args.n);

  std::vector<POrdering> orderings;
  if (args.show_orderings) {
    for (const auto& [p, v] : result.breakdown) {
      orderings.push_back(p_ordering(s, p, static_cast<std::size_t>(args.n) + 1));
    }
  }

  if (cfg.format == "json") {
    nlohmann::json breakdown = nlohmann::json::array();
    for (const auto& [p, v] : result.breakdown) breakdown.push_back({p, v.get_str()});
    nlohmann::json j = {{"set", s.describe()},
                        {"n", args.n},
                        {"value", result.value.get_str()},
                        {"prime_bound", result.prime_bound},
                        {"v_n", breakdown}};
    if (args.show_orderings) {
      nlohmann::json list = nlohmann::json::array();
      for (const POrdering& o : orderings) {
        list.push_back({{"p", o.p}, {"sequence", o.sequence}, {"step_valuations", o.step_valuations}});
      }
      j["orderings"] = list;
    }
    emit_json(j);
    return kExitOk;
  }
  if (cfg.format == "csv") {
    std::cout << "p,v_n\r\n";
    for (const auto& [p, v] : result.breakdown) std::cout << p << ',' << v.get_str() << "\r\n";
    return kExitOk;
  }
  std::cout << "S = " << s.describe() << ", n = " << args.n << '\n';
  std::cout << "value: " << result.value.get_str() << '\n';
  std::cout << "primes checked up to " << 2 * result.prime_bound << '\n';
  for (const auto& [p, v] : result.breakdown) std::cout << "  v_n(S, " << p << ") = " << v.get_str() << '\n';
  for (const POrdering& o : orderings) {
    std::cout << ordering_line(o);
  }
  return kExitOk;
}

// constant ------------------------------------------------------------------

struct ConstantArgs {
  std::string name;
  double tol = 1e-5;
  std::string mode = "rigorous";
  std::string f = "x";
  std::uint64_t alpha = 1;
  std::string m = "0";
  std::uint64_t certificate_bound = 100000;
};

void print_constant(const RunConfig& cfg, const std::string& name, const ConstantResult& r) {
  if (cfg.format == "json") {
    nlohmann::json j = r.to_json();
    j["name"] = name;
    emit_json(j);
    return;
  }
  if (cfg.format == "csv") {
    std::cout << "name,value_lo,value_hi,primes_used,tail_bound,mode\r\n";
    const int d = decimals_for(cfg.precision);
    std::cout << csv_field(name) << ',' << r.value.lo().fixed(d, MPFR_RNDD) << ',' << r.value.hi().fixed(d, MPFR_RNDU)
              << ',' << r.primes_used << ',' << r.tail_bound.hi().fixed(d, MPFR_RNDU) << ',' << to_string(r.mode)
              << "\r\n";
    return;
  }
  std::cout << name << " (" << to_string(r.mode) << ")\n";
  std::cout << "enclosure: " << r.value.to_string(12) << '\n';
  std::cout << "primes used: " << r.primes_used << " (all primes <= " << r.cutoff << ")\n";
  if (r.mode == ConstantMode::rigorous) {
    std::cout << "tail bound: " << r.tail_bound.hi().fixed(12, MPFR_RNDU) << '\n';
    std::cout << "target tolerance: " << r.target_tolerance << '\n';
  } else {
    std::cout << "non-rigorous; extrapolation change: " << r.error_estimate.value_or(0) << '\n';
  }
}

int cmd_constant(const RunConfig& cfg, const ConstantArgs& args) {
  ConstantOptions options;
  options.threads = cfg.threads;
  options.precision = cfg.precision;
  const bool rigorous_mode = args.mode == "rigorous";
  try {
    if (args.name == "C") {
      print_constant(cfg, "C", rigorous_mode ? constant_C(args.tol, options) : accelerated_C(options));
    } else if (args.name == "beta") {
      print_constant(cfg, "beta", rigorous_mode ? constant_beta(args.tol, options) : accelerated_beta(options));
    } else {
      const FMap f = FMap::parse(args.f);
      LinearCertificate cert{args.alpha, mpq_class(args.m)};
      cert.M.canonicalize();
      if (cert.M < 0) throw DomainError("M must be nonnegative");
      const CertificateReport report = verify_certificate(f, cert, args.certificate_bound);
      if (!report.passed) {
        std::cerr << "certificate (" << cert.alpha << ", " << cert.M.get_str() << ") fails for f = " << f.dsl()
                  << " at p = " << report.witness.value_or(0) << '\n';
        return kExitDomain;
      }
      const ConstantResult r = rigorous_mode ? beta_f(f, cert, args.tol, options) : accelerated_beta_f(f, cert, options);
      print_constant(cfg, "beta_f", r);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << '\n';
    print_constant(cfg, args.name, e.best());
    return kExitDomain;
  }
  return kExitOk;
}

// table ---------------------------------------------------------------------

struct TableArgs {
  int which = 1;
  std::string rows = "1..10,100,1000,5000,10000";
};

int cmd_table(const RunConfig& cfg, const TableArgs& args) {
  const TableSpec spec = table_spec(args.which);
  const std::vector<std::uint64_t> rows = parse_rows(args.rows);
  ConstantOptions options;
  options.threads = cfg.threads;
  const BetaEstimate beta = table_beta(spec.f, spec.cert, 1e-5, options);
  const std::vector<TableRow> out = table(spec.f, spec.cert, beta.value, rows, cfg.precision, cfg.threads);
  if (cfg.format == "json") {
    emit_json(table_json(out));
  } else if (cfg.format == "csv") {
    std::cout << format_table_csv(out);
  } else {
    std::cout << format_table_text(spec, out);
    std::cout << "beta_f = " << beta.value.to_string(10) << " (accelerated, inside rigorous "
              << beta.rigorous.value.to_string(7) << ")\n";
  }
  return kExitOk;
}

// verify --------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
  const VerifyReport report = run_verification(suite, cfg.seed, cfg.threads);
  if (cfg.format == "json") {
    emit_json(report.to_json());
  } else {
    std::cout << report.text();
  }
  return report.passed() ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Generalized factorials via Legendre-type formulas and Bhargava p-orderings", "legendre"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--precision", cfg.precision, "Working precision in bits")->check(CLI::Range(32, 65536));
  app.add_option("--cache-dir", cfg.cache_dir, "Directory for cached prime tables");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized checks");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--digit-cap", cfg.digit_cap, "Largest integer printed in full, in decimal digits");

  FfactArgs ffact;
  auto* ffact_cmd = app.add_subcommand("ffact", "Factorization, value and log of n!_f");
  ffact_cmd->add_option("--f", ffact.f, "Map, e.g. x, x-1, ceil((x-1)/2), log(x)")->required();
  ffact_cmd->add_option("--n", ffact.n, "n, or a list such as 0..5,10")->required();

  BhargavaArgs bh;
  auto* bh_cmd = app.add_subcommand("bhargava", "Bhargava factorial n!_S with per-prime v_n");
  auto* set_opt = bh_cmd->add_option("--set", bh.set, "primes, primes:<limit>, or comma-separated integers");
  auto* file_opt = bh_cmd->add_option("--set-file", bh.set_file, "File with one integer per line");
  set_opt->excludes(file_opt);
  bh_cmd->add_option("--n", bh.n, "n")->required();
  bh_cmd->add_flag("--show-orderings", bh.show_orderings, "Print the p-ordering for each contributing prime");

  ConstantArgs cons;
  auto* cons_cmd = app.add_subcommand("constant", "Evaluate C, beta, or beta_f");
  cons_cmd->add_option("name", cons.name, "C, beta or beta_f")->required()->check(CLI::IsMember({"C", "beta", "beta_f"}));
  cons_cmd->add_option("--tol", cons.tol, "Enclosure width target (rigorous mode)")->check(CLI::PositiveNumber);
  cons_cmd->add_option("--mode", cons.mode, "rigorous or accelerated")->check(CLI::IsMember({"rigorous", "accelerated"}));
  cons_cmd->add_option("--f", cons.f, "Map for beta_f");
  cons_cmd->add_option("--alpha", cons.alpha, "Certificate alpha")->check(CLI::PositiveNumber);
  cons_cmd->add_option("--M", cons.m, "Certificate M (integer or fraction)");
  cons_cmd->add_option("--certificate-bound", cons.certificate_bound, "Primes checked when no closed form applies");

  TableArgs tab;
  auto* tab_cmd = app.add_subcommand("table", "Reproduce comparison table 1 or 2");
  tab_cmd->add_option("which", tab.which, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  tab_cmd->add_option("--rows", tab.rows, "Rows, e.g. 1..10,100,1000");

  std::string suite;
  auto* ver_cmd = app.add_subcommand("verify", "Run property suites");
  ver_cmd->add_option("suite", suite, "legendre, bhargava, chebyshev, constants or all")
      ->required()
      ->check(CLI::IsMember(verification_suites()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  SieveOptions sieve;
  sieve.threads = cfg.threads;
  if (!cfg.cache_dir.empty()) {
    sieve.cache_dir = cfg.cache_dir;
  } else if (const char* env = std::getenv("LEGENDRE_CACHE_DIR"); env && *env) {
    sieve.cache_dir = env;
  }
  PrimeSource::global().set_options(sieve);

  try {
    if (ffact_cmd->parsed()) return cmd_ffact(cfg, ffact);
    if (bh_cmd->parsed()) {
      if (bh.set.empty() && bh.set_file.empty()) {
        std::cerr << "bhargava: one of --set or --set-file is required\n";
        return kExitUsage;
      }
      return cmd_bhargava(cfg, bh);
    }
    if (cons_cmd->parsed()) return cmd_constant(cfg, cons);
    if (tab_cmd->parsed()) return cmd_table(cfg, tab);
    if (ver_cmd->parsed()) return cmd_verify(cfg, suite);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
