#include "legendre/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>

#include "legendre/bhargava.hpp"
#include "legendre/chebyshev.hpp"
#include "legendre/constants.hpp"
#include "legendre/errors.hpp"
#include "legendre/legendre_core.hpp"
#include "legendre/prime_engine.hpp"

namespace legendre {

namespace {

class Suite {
 public:
  Suite(std::string name, std::vector<CheckResult>& out) : name_(std::move(name)), out_(out) {}

  // body returns the number of cases and appends failure notes to `notes`.
  void check(const std::string& check_name, const std::function<std::uint64_t(std::vector<std::string>&)>& body) {
    CheckResult r;
    r.suite = name_;
    r.name = check_name;
    std::vector<std::string> notes;
    try {
      r.cases = body(notes);
      r.passed = notes.empty();
    } catch (const std::exception& e) {
      notes.push_back(std::string("exception: ") + e.what());
      r.passed = false;
    }
    for (std::size_t i = 0; i < notes.size() && i < 3; ++i) r.detail += (i ? "; " : "") + notes[i];
    if (notes.size() > 3) r.detail += "; ... (" + std::to_string(notes.size()) + " failures)";
    out_.push_back(std::move(r));
  }

 private:
  std::string name_;
  std::vector<CheckResult>& out_;
};

std::vector<FMap> binomial_maps() {
  return {FMap::identity(), FMap::shifted_linear(1, -1), FMap::half_ceiling(), FMap::log_map()};
}

// n!_log needs every prime below e^n, so the log map is checked only up to
// the factorial capacity.
constexpr std::uint64_t kLogMapMaxN = 16;

std::uint64_t max_n(const FMap& f, std::uint64_t n) {
  return f.kind() == FKind::log_map ? std::min(n, kLogMapMaxN) : n;
}

void legendre_suite(std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Suite s("legendre", out);

  s.check("identity exponents match valuations of n!", [](auto& notes) {
    std::uint64_t cases = 0;
    const FMap id = FMap::identity();
    mpz_class fact = 1;
    const auto table = primes_through(500);
    for (std::uint64_t n = 1; n <= 500; ++n) {
      fact *= static_cast<unsigned long>(n);
      for (std::uint64_t p : table->up_to(n)) {
        ++cases;
        if (exponent(id, p, n) != valuation(fact, p)) {
          notes.push_back("n=" + std::to_string(n) + " p=" + std::to_string(p));
        }
      }
    }
    return cases;
  });

  s.check("generalized binomials are integers", [&rng](auto& notes) {
    std::uint64_t cases = 0;
    for (const FMap& f : binomial_maps()) {
      std::uniform_int_distribution<std::uint64_t> pick_n(0, max_n(f, 60));
      for (int i = 0; i < 200; ++i) {
        const std::uint64_t n = pick_n(rng);
        const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
        ++cases;
        try {
          if (generalized_binomial(f, n, k) < 1) notes.push_back(f.dsl() + " n=" + std::to_string(n));
        } catch (const ViolatedDivisibility& e) {
          notes.push_back(f.dsl() + " n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + e.what());
        }
      }
    }
    return cases;
  });

  s.check("n!_x divides n!_{x-1}", [](auto& notes) {
    const FMap f = FMap::shifted_linear(1, -1), g = FMap::identity();
    for (std::uint64_t n = 0; n <= 200; ++n) {
      if (!divides(factorial_exponents(g, n), factorial_exponents(f, n))) notes.push_back("n=" + std::to_string(n));
    }
    return std::uint64_t{201};
  });

  s.check("abstract factorial axioms", [](auto& notes) {
    std::uint64_t cases = 0;
    const FMap id = FMap::identity();
    for (const FMap& f : binomial_maps()) {
      if (factorial(f, 0).value != 1) notes.push_back(f.dsl() + ": 0! != 1");
      for (std::uint64_t n = 0; n <= max_n(f, 200); ++n) {
        ++cases;
        if (!divides(factorial_exponents(id, n), factorial_exponents(f, n))) {
          notes.push_back(f.dsl() + ": n! does not divide at n=" + std::to_string(n));
        }
      }
    }
    return cases;
  });

  s.check("log enclosure contains the exact log", [](auto& notes) {
    std::uint64_t cases = 0;
    for (const FMap& f : binomial_maps()) {
      for (std::uint64_t n = 1; n <= max_n(f, 100); ++n) {
        ++cases;
        const BoundedValue enclosure = log_factorial(f, n);
        const BoundedValue exact = BoundedValue::log_of(factorial(f, n).value, 256);
        if (!enclosure.overlaps(exact)) notes.push_back(f.dsl() + " n=" + std::to_string(n));
      }
    }
    return cases;
  });
}

void bhargava_suite(std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Suite s("bhargava", out);
  const IntegerSet primes = IntegerSet::primes();

  s.check("v_n invariant under random tie-breaks", [&](auto& notes) {
    std::uint64_t cases = 0;
    const std::vector<std::uint64_t> ps = {2, 3, 5, 7};
    std::uniform_int_distribution<std::uint64_t> pick_n(1, 12);
    for (std::uint64_t p : ps) {
      for (int sample = 0; sample < 3; ++sample) {
        const std::uint64_t n = pick_n(rng);
        const std::vector<std::int64_t> pool = primes.prefix(initial_pool_size(n));
        const std::uint64_t expected = p_ordering(pool, p, n + 1).step_valuations.back();
        for (int run = 0; run < 50; ++run) {
          ++cases;
          if (p_ordering(pool, p, n + 1, rng).step_valuations.back() != expected) {
            notes.push_back("p=" + std::to_string(p) + " n=" + std::to_string(n));
          }
        }
      }
    }
    return cases;
  });

  s.check("(n+1)!_P equals n!_{x-1}", [&](auto& notes) {
    const FMap f = FMap::shifted_linear(1, -1);
    for (std::uint64_t n = 0; n <= 12; ++n) {
      if (factorial_s(primes, n + 1).value != factorial(f, n).value) notes.push_back("n=" + std::to_string(n));
    }
    return std::uint64_t{13};
  });

  std::vector<mpz_class> fact(11);
  for (std::uint64_t n = 0; n <= 10; ++n) fact[n] = factorial_s(primes, n).value;

  s.check("k!_P l!_P divides (k+l)!_P", [&](auto& notes) {
    std::uint64_t cases = 0;
    for (std::uint64_t k = 0; k <= 10; ++k) {
      for (std::uint64_t l = 0; k + l <= 10; ++l) {
        ++cases;
        if (!mpz_divisible_p(fact[k + l].get_mpz_t(), mpz_class(fact[k] * fact[l]).get_mpz_t())) {
          notes.push_back("k=" + std::to_string(k) + " l=" + std::to_string(l));
        }
      }
    }
    return cases;
  });

  s.check("0!_P 1!_P ... n!_P divides the difference product", [&](auto& notes) {
    const std::vector<std::int64_t> pool = IntegerSet::primes_up_to(200).prefix(1000);
    for (int sample = 0; sample < 20; ++sample) {
      const std::size_t count = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
      std::vector<std::int64_t> chosen;
      std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), count, rng);
      mpz_class bound = 1;
      for (std::size_t k = 0; k < count; ++k) bound *= fact[k];
      if (!mpz_divisible_p(difference_product(chosen).get_mpz_t(), bound.get_mpz_t())) {
        notes.push_back("sample " + std::to_string(sample));
      }
    }
    return std::uint64_t{20};
  });
}

BoundedValue classical_psi(std::uint64_t x) {
  IntervalSum sum;
  if (x < 2) return sum.value();
  for (std::uint64_t p : primes_through(x)->up_to(x)) {
    for (std::uint64_t q = p; q <= x; q *= p) {
      sum.add(BoundedValue::log_of(p));
      if (q > x / p) break;
    }
  }
  return sum.value();
}

void chebyshev_suite(std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Suite s("chebyshev", out);
  const std::vector<FMap> maps = {FMap::identity(), FMap::shifted_linear(1, -1), FMap::half_ceiling(),
                                  FMap::quadratic_upper(1, 2), FMap::quadratic_lower(2, 4)};

  s.check("0 <= theta_f <= psi_f, both nondecreasing", [&](auto& notes) {
    std::uint64_t cases = 0;
    std::uniform_int_distribution<long> pick(1, 200000);
    for (const FMap& f : maps) {
      std::vector<mpq_class> xs;
      for (int i = 0; i < 20; ++i) xs.emplace_back(pick(rng), 100);
      std::sort(xs.begin(), xs.end());
      BoundedValue last_theta = BoundedValue::from_integer(0), last_psi = BoundedValue::from_integer(0);
      for (const mpq_class& x : xs) {
        ++cases;
        const BoundedValue t = theta_f(f, x), p = psi_f(f, x);
        if (!t.certainly_nonnegative() || t.hi_double() > p.hi_double() || p.certainly_less(t) ||
            t.certainly_less(last_theta) || p.certainly_less(last_psi)) {
          notes.push_back(f.dsl() + " x=" + x.get_str());
        }
        last_theta = t;
        last_psi = p;
      }
    }
    return cases;
  });

  s.check("identity map gives classical theta and psi", [&](auto& notes) {
    std::uint64_t cases = 0;
    const FMap id = FMap::identity();
    std::uniform_int_distribution<std::uint64_t> pick(0, 5000);
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t x = pick(rng);
      const mpq_class xq(static_cast<unsigned long>(x));
      ++cases;
      if (!theta_f(id, xq).overlaps(theta(x)) || !psi_f(id, xq).overlaps(classical_psi(x))) {
        notes.push_back("x=" + std::to_string(x));
      }
    }
    return cases;
  });

  s.check("theta_f(x) = theta(f^-1(x)) for bijective maps", [&](auto& notes) {
    std::uint64_t cases = 0;
    const std::vector<FMap> bijective = {FMap::identity(),         FMap::shifted_linear(1, -1),
                                         FMap::shifted_linear(2, 3), FMap::quadratic_upper(1, 2),
                                         FMap::quadratic_upper(2, 4), FMap::quadratic_lower(1, 2),
                                         FMap::quadratic_lower(2, 4), FMap::log_map()};
    std::uniform_int_distribution<long> pick(1, 1000000);
    for (const FMap& f : bijective) {
      // e^x must stay within the sieve for the log map.
      const long scale = f.kind() == FKind::log_map ? 12 : 1000;
      for (int i = 0; i < 100; ++i) {
        const mpq_class x(pick(rng) * scale, 1000000);
        ++cases;
        if (!inverse_change_of_variables(f, x).holds) notes.push_back(f.dsl() + " x=" + x.get_str());
      }
    }
    return cases;
  });

  s.check("floor residual shrinks across n = 10, 100, 1000", [](auto& notes) {
    for (const LinearCertificate& cert : {LinearCertificate{1, 2}, LinearCertificate{2, 4}}) {
      double last = 1e300;
      for (std::uint64_t n : {10, 100, 1000}) {
        const double r = std::abs(chebyshev_floor_residual(cert, n).mid_double());
        if (!(r < last)) notes.push_back("alpha=" + std::to_string(cert.alpha) + " n=" + std::to_string(n));
        last = r;
      }
    }
    return std::uint64_t{6};
  });
}

void constants_suite(unsigned threads, std::vector<CheckResult>& out) {
  Suite s("constants", out);
  ConstantOptions options;
  options.threads = threads;
  constexpr double kTol = 1e-5;

  s.check("C agrees with beta_f for x - 1", [&](auto& notes) {
    const ConstantResult c = constant_C(kTol, options);
    const ConstantResult b = beta_f(FMap::shifted_linear(1, -1), {1, 2}, kTol, options);
    if (!c.value.overlaps(b.value)) notes.push_back(c.value.to_string(9) + " vs " + b.value.to_string(9));
    return std::uint64_t{1};
  });

  s.check("beta agrees with beta_f for ceil((x-1)/2)", [&](auto& notes) {
    const ConstantResult c = constant_beta(kTol, options);
    const ConstantResult b = beta_f(FMap::half_ceiling(), {2, 4}, kTol, options);
    if (!c.value.overlaps(b.value)) notes.push_back(c.value.to_string(9) + " vs " + b.value.to_string(9));
    return std::uint64_t{1};
  });

  s.check("0 <= beta_f <= -2 M zeta'(2)", [&](auto& notes) {
    const BoundedValue zeta = neg_zeta_prime_2();
    struct Case {
      FMap f;
      LinearCertificate cert;
    };
    const std::vector<Case> cases = {{FMap::identity(), {1, 0}},
                                     {FMap::shifted_linear(1, -1), {1, 2}},
                                     {FMap::half_ceiling(), {2, 4}},
                                     {FMap::quadratic_upper(1, 2), {1, 2}}};
    for (const Case& c : cases) {
      const ConstantResult r = beta_f(c.f, c.cert, 1e-3, options);
      BoundedValue bound = zeta;
      bound.mul(mpq_class(2 * c.cert.M));
      if (r.value.lo_double() < 0) notes.push_back(c.f.dsl() + " negative");
      if (bound.certainly_less(r.value)) notes.push_back(c.f.dsl() + " above the zeta bound");
    }
    return static_cast<std::uint64_t>(cases.size());
  });

  s.check("partial sums nondecreasing and below the enclosure", [&](auto& notes) {
    const ConstantResult c = constant_C(1e-3, options);
    const ConstantResult b = constant_beta(1e-3, options);
    double last_c = 0, last_b = 0;
    std::uint64_t cases = 0;
    for (std::uint64_t cutoff = 2; cutoff <= (1u << 16); cutoff *= 2) {
      ++cases;
      const BoundedValue pc = partial_C(cutoff), pb = partial_beta(cutoff);
      if (pc.lo_double() < last_c || pb.lo_double() < last_b) notes.push_back("cutoff " + std::to_string(cutoff));
      if (c.value.certainly_less(pc) || b.value.certainly_less(pb)) notes.push_back("above at " + std::to_string(cutoff));
      last_c = pc.lo_double();
      last_b = pb.lo_double();
    }
    return cases;
  });

  s.check("integral tail bound dominates log m / m^2", [](auto& notes) {
    std::uint64_t cases = 0;
    for (std::uint64_t n : {3, 10, 100, 1000, 10000}) {
      ++cases;
      IntervalSum partial;
      for (std::uint64_t m = n + 1; m <= 100 * n; ++m) {
        BoundedValue term = BoundedValue::log_of(m);
        term.div(mpz_class(static_cast<unsigned long>(m)) * static_cast<unsigned long>(m));
        partial.add(term);
      }
      if (log_square_tail(n).certainly_less(partial.value())) notes.push_back("N=" + std::to_string(n));
    }
    return cases;
  });
}

}  // namespace

std::vector<std::string> verification_suites() { return {"legendre", "bhargava", "chebyshev", "constants", "all"}; }

VerifyReport run_verification(std::string_view suite, std::uint64_t seed, unsigned threads) {
  const bool all = suite == "all";
  if (!all && suite != "legendre" && suite != "bhargava" && suite != "chebyshev" && suite != "constants") {
    throw ParseError("unknown verification suite: " + std::string(suite));
  }
  VerifyReport report;
  report.suite = std::string(suite);
  report.seed = seed;
  std::mt19937_64 rng(seed);
  if (all || suite == "legendre") legendre_suite(rng, report.checks);
  if (all || suite == "bhargava") bhargava_suite(rng, report.checks);
  if (all || suite == "chebyshev") chebyshev_suite(rng, report.checks);
  if (all || suite == "constants") constants_suite(threads, report.checks);
  return report;
}

bool VerifyReport::passed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  os << "verify " << suite << " seed=" << seed << '\n';
  std::size_t failed = 0;
  for (const CheckResult& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " (" << c.cases << " cases)";
    if (!c.detail.empty()) os << " -- " << c.detail;
    os << '\n';
    if (!c.passed) ++failed;
  }
  os << (failed == 0 ? "all " + std::to_string(checks.size()) + " checks passed"
                     : std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed")
     << '\n';
  return os.str();
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    list.push_back({{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}, {"cases", c.cases}, {"detail", c.detail}});
  }
  return {{"suite", suite}, {"seed", seed}, {"passed", passed()}, {"checks", std::move(list)}};
}

}  // namespace legendre
