#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "legendre/asymptotics.hpp"
#include "legendre/bhargava.hpp"
#include "legendre/chebyshev.hpp"
#include "legendre/constants.hpp"
#include "legendre/errors.hpp"
#include "legendre/legendre_core.hpp"
#include "reference_tables.hpp"

using namespace legendre;

namespace {

// Pinned tolerances.
constexpr double kSequenceSeconds = 1.0;
constexpr double kConstantTol = 1e-5;
constexpr int kAcceleratedDecimals = 7;
constexpr double kTableSeconds = 60.0;
constexpr double kTrendTol = 1e-3;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    detail << (passed ? "" : "; ") << what;
    passed = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// The accelerated value agrees with the reference when rounding or
// truncating it to the reference's decimals reproduces the reference.
bool matches_decimals(const BoundedValue& v, const std::string& reference, int decimals) {
  for (mpfr_rnd_t rnd : {MPFR_RNDN, MPFR_RNDZ}) {
    if (v.lo().fixed(decimals, rnd) == reference && v.hi().fixed(decimals, rnd) == reference) return true;
  }
  return false;
}

std::string fmt(const BoundedValue& v, int decimals = 10) { return v.to_string(decimals); }

void criterion_1(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<long> id = {1, 1, 2, 6, 24, 120};
  const std::vector<long> logs = {1, 2, 840, 1862340480};
  for (std::size_t n = 0; n < id.size(); ++n) {
    o.require(factorial(FMap::identity(), n).value == id[n], "x at n=" + std::to_string(n));
  }
  for (std::size_t n = 0; n < logs.size(); ++n) {
    o.require(factorial(FMap::log_map(), n).value == logs[n], "log(x) at n=" + std::to_string(n));
  }
  const double t = seconds_since(start);
  o.require(t < kSequenceSeconds, "runtime " + std::to_string(t) + " s");
  if (o.passed) o.detail << "x: 1,1,2,6,24,120; log(x): 1,2,840,1862340480; " << t << " s";
}

void constant_criterion(Outcome& o, const char* name, const std::string& reference, const ConstantResult& rigorous,
                        const ConstantResult& accelerated) {
  o.require(rigorous.value.contains(reference::decimal(reference)),
            std::string(name) + " rigorous " + fmt(rigorous.value) + " misses " + reference);
  o.require(rigorous.value.width_double() <= kConstantTol, std::string(name) + " width above tolerance");
  o.require(matches_decimals(accelerated.value, reference, kAcceleratedDecimals),
            std::string(name) + " accelerated " + accelerated.value.lo().fixed(12) + " gives " +
                accelerated.value.lo().fixed(kAcceleratedDecimals, MPFR_RNDN) + " rounded, " +
                accelerated.value.lo().fixed(kAcceleratedDecimals, MPFR_RNDZ) + " truncated, not " + reference);
}

void cross_identity(Outcome& o, const char* name, const ConstantResult& direct, const ConstantResult& via_f) {
  const double gap = std::abs(direct.value.mid_double() - via_f.value.mid_double());
  const double widths = direct.value.width_double() + via_f.value.width_double();
  o.require(direct.value.overlaps(via_f.value) && gap <= widths,
            std::string(name) + " routes differ by " + std::to_string(gap) + " > " + std::to_string(widths));
}

void criterion_2(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const ConstantResult rigorous = constant_C(kConstantTol);
  const double t = seconds_since(start);
  const ConstantResult accelerated = accelerated_C();
  constant_criterion(o, "C", "1.2269688", rigorous, accelerated);
  if (o.passed) {
    o.detail << "rigorous " << fmt(rigorous.value) << " in " << t << " s; accelerated "
             << accelerated.value.lo().fixed(10);
  }
}

void criterion_3(Outcome& o) {
  const ConstantResult rigorous = constant_beta(kConstantTol);
  const ConstantResult accelerated = accelerated_beta();
  constant_criterion(o, "beta", "1.0676431", rigorous, accelerated);
  const ConstantResult c = constant_C(kConstantTol);
  cross_identity(o, "C vs beta_{x-1}", c, beta_f(FMap::shifted_linear(1, -1), {1, 2}, kConstantTol));
  cross_identity(o, "beta vs beta_{ceil((x-1)/2)}", rigorous, beta_f(FMap::half_ceiling(), {2, 4}, kConstantTol));
  if (o.passed) o.detail << "rigorous " << fmt(rigorous.value) << "; both identities hold";
}

void table_criterion(Outcome& o, int which, const std::vector<reference::Row>& ref) {
  const auto start = std::chrono::steady_clock::now();
  const TableSpec spec = table_spec(which);
  const BetaEstimate beta = table_beta(spec.f, spec.cert);
  std::vector<std::uint64_t> ns;
  for (const auto& row : ref) ns.push_back(row.n);
  const auto rows = table(spec.f, spec.cert, beta.value, ns);
  const double t = seconds_since(start);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string n = std::to_string(rows[i].n);
    o.require(reference::lhs_matches(rows[i].lhs, ref[i].lhs),
              "n=" + n + " lhs " + truncated_decimal(rows[i].lhs.lo(), 4, false) + " vs " + ref[i].lhs);
    o.require(reference::rhs_matches(rows[i].rhs, ref[i].rhs),
              "n=" + n + " rhs " + truncated_decimal(rows[i].rhs.lo(), 4, false) + " vs " + ref[i].rhs);
  }
  o.require(t <= kTableSeconds, "runtime " + std::to_string(t) + " s");
  if (o.passed) o.detail << rows.size() << " rows match in " << t << " s";
}

void criterion_6(Outcome& o) {
  for (std::uint64_t n = 0; n <= 12; ++n) {
    o.require(factorial(FMap::shifted_linear(1, -1), n).value == factorial_s(IntegerSet::primes(), n + 1).value,
              "n=" + std::to_string(n));
  }
  std::mt19937_64 rng(kSeed);
  const std::vector<std::int64_t> pool = IntegerSet::primes().prefix(128);
  std::size_t runs = 0;
  for (std::uint64_t p : {2, 3, 5, 7}) {
    for (std::size_t n : {3, 8, 15}) {
      const std::uint64_t reference = p_ordering(pool, p, n + 1).step_valuations.back();
      for (int trial = 0; trial < 50; ++trial, ++runs) {
        o.require(p_ordering(pool, p, n + 1, rng).step_valuations.back() == reference,
                  "tie-break changed v_" + std::to_string(n) + " at p=" + std::to_string(p));
      }
    }
  }
  if (o.passed) o.detail << "n!_{x-1} = (n+1)!_P for n <= 12; " << runs << " randomized orderings agree";
}

void criterion_7(Outcome& o) {
  const std::vector<long> expected = {1, 6, 360, 45360, 5443200, 359251200};
  const auto terms = a202367_sequence(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    o.require(terms.size() == expected.size() && terms[i] == expected[i], "term " + std::to_string(i + 1));
  }
  if (o.passed) o.detail << "1, 6, 360, 45360, 5443200, 359251200";
}

void criterion_8(Outcome& o) {
  std::mt19937_64 rng(kSeed);
  std::size_t failures = 0;
  for (const FMap& f : {FMap::identity(), FMap::shifted_linear(1, -1), FMap::half_ceiling(), FMap::log_map()}) {
    std::size_t over_capacity = 0;
    std::uint64_t smallest = 0;
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t n = rng() % 61, k = rng() % (n + 1);
      try {
        if (!divides(product(factorial_exponents(f, k), factorial_exponents(f, n - k)), factorial_exponents(f, n))) {
          ++failures;
        }
      } catch (const CapacityError&) {
        if (over_capacity++ == 0 || n < smallest) smallest = n;
      }
    }
    o.require(over_capacity == 0, std::to_string(over_capacity) + " of 200 " + f.dsl() +
                                      " draws exceed the factorial capacity (smallest n=" + std::to_string(smallest) + ")");
  }
  o.require(failures == 0, std::to_string(failures) + " binomial failures");
  for (std::uint64_t n = 0; n <= 200; ++n) {
    o.require(divides(factorial_exponents(FMap::identity(), n), factorial_exponents(FMap::shifted_linear(1, -1), n)),
              "n!_x does not divide n!_{x-1} at n=" + std::to_string(n));
  }
  std::vector<mpz_class> fs;
  for (std::uint64_t n = 0; n <= 10; ++n) fs.push_back(factorial_s(IntegerSet::primes(), n).value);
  for (std::uint64_t k = 0; k <= 10; ++k) {
    for (std::uint64_t l = 0; k + l <= 10; ++l) {
      const mpz_class d = fs[k] * fs[l];
      o.require(mpz_divisible_p(fs[k + l].get_mpz_t(), d.get_mpz_t()) != 0,
                "property 1 at " + std::to_string(k) + "," + std::to_string(l));
    }
  }
  const std::vector<std::int64_t> small = IntegerSet::primes_up_to(200).prefix(1000);
  for (int sample = 0; sample < 20; ++sample) {
    std::vector<std::int64_t> picked = small;
    std::shuffle(picked.begin(), picked.end(), rng);
    picked.resize(1 + rng() % 7);
    mpz_class bound = 1;
    for (std::size_t j = 0; j < picked.size(); ++j) bound *= fs[j];
    o.require(mpz_divisible_p(difference_product(picked).get_mpz_t(), bound.get_mpz_t()) != 0,
              "property 3 sample " + std::to_string(sample));
  }
  if (o.passed) o.detail << "800 binomials, 201 divisibility pairs, property 1 (k+l <= 10), property 3 (20 samples)";
}

void criterion_9(Outcome& o) {
  const std::vector<std::uint64_t> ns = {100, 1000, 10000};
  const std::vector<double> expected = {0.0863, 0.0115, 0.0039};
  for (int which : {1, 2}) {
    const TableSpec spec = table_spec(which);
    const BetaEstimate beta = table_beta(spec.f, spec.cert);
    const auto trend = residual_trend(spec.f, spec.cert, beta.value, ns);
    std::ostringstream values;
    for (const auto& point : trend) values << " " << point.ratio.lo().fixed(5);
    for (std::size_t i = 1; i < trend.size(); ++i) {
      o.require(trend[i].ratio.certainly_less(trend[i - 1].ratio),
                spec.f.dsl() + " ratios not strictly decreasing:" + values.str());
    }
    if (which == 1) {
      for (std::size_t i = 0; i < trend.size(); ++i) {
        o.require(std::abs(trend[i].ratio.mid_double() - expected[i]) <= kTrendTol,
                  "x-1 ratio at n=" + std::to_string(ns[i]) + " is " + trend[i].ratio.lo().fixed(5) + ", expected " +
                      std::to_string(expected[i]).substr(0, 6));
      }
    }
    if (o.passed) o.detail << spec.f.dsl() << ":" << values.str() << " ";
  }
}

void criterion_10(Outcome& o) {
  for (const LinearCertificate& cert : {LinearCertificate{1, 2}, LinearCertificate{2, 4}}) {
    std::ostringstream values;
    BoundedValue previous;
    bool first = true;
    for (std::uint64_t n : {10, 100, 1000}) {
      const BoundedValue r = chebyshev_floor_residual(cert, n).abs();
      values << " " << r.lo().fixed(6);
      if (!first) o.require(r.certainly_less(previous), "not decreasing for (" + std::to_string(cert.alpha) + ")");
      previous = r;
      first = false;
    }
    if (o.passed) o.detail << "(" << cert.alpha << "," << cert.M.get_str() << "):" << values.str() << " ";
  }
}

const std::vector<std::function<void(Outcome&)>> kCriteria = {
    criterion_1, criterion_2, criterion_3,
    [](Outcome& o) { table_criterion(o, 1, reference::kTable1); },
    [](Outcome& o) { table_criterion(o, 2, reference::kTable2); },
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

bool run_criterion(std::size_t index) {
  Outcome o;
  try {
    kCriteria[index - 1](o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << index << ": " << o.detail.str() << std::endl;
  return o.passed;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const long n = std::strtol(argv[++i], nullptr, 10);
      if (n < 1 || n > static_cast<long>(kCriteria.size())) {
        std::cerr << "criterion must be in 1.." << kCriteria.size() << '\n';
        return 1;
      }
      selected.push_back(static_cast<std::size_t>(n));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 1;
    }
  }
  if (selected.empty()) {
    for (std::size_t i = 1; i <= kCriteria.size(); ++i) selected.push_back(i);
  }
  bool all = true;
  for (std::size_t index : selected) all = run_criterion(index) && all;
  return all ? 0 : 1;
}
