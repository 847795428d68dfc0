#include "legendre/legendre_core.hpp"

#include <algorithm>
#include <bit>

#include "legendre/errors.hpp"
#include "legendre/prime_engine.hpp"

namespace legendre {

ExponentVector::ExponentVector(std::uint64_t n, std::string f_dsl, std::vector<Factor> factors)
    : n_(n), f_(std::move(f_dsl)), factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].exponent == 0) throw DomainError("exponent vector holds a zero exponent");
    if (i > 0 && factors_[i - 1].prime >= factors_[i].prime) {
      throw DomainError("exponent vector primes must be strictly ascending");
    }
  }
}

std::uint64_t ExponentVector::exponent_of(std::uint64_t p) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), p,
                             [](const Factor& f, std::uint64_t q) { return f.prime < q; });
  return (it != factors_.end() && it->prime == p) ? it->exponent : 0;
}

namespace {

mpz_class product_range(std::span<const Factor> factors) {
  if (factors.empty()) return 1;
  if (factors.size() == 1) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(factors[0].prime),
                  static_cast<unsigned long>(factors[0].exponent));
    return out;
  }
  const std::size_t half = factors.size() / 2;
  return product_range(factors.first(half)) * product_range(factors.subspan(half));
}

}  // namespace

mpz_class ExponentVector::value() const { return product_range(factors_); }

BoundedValue ExponentVector::log(Precision prec) const {
  IntervalSum sum(prec);
  for (const Factor& f : factors_) sum.add_multiple(BoundedValue::log_of(f.prime, prec), f.exponent);
  return sum.value();
}

std::size_t ExponentVector::decimal_digits() const {
  if (factors_.empty()) return 1;
  BoundedValue digits = log(128);
  digits /= BoundedValue::log_of(10, 128);
  const mpz_class lo = digits.floor_lo(), hi = digits.floor_hi();
  if (lo == hi) return lo.get_ui() + 1;
  return mpz_sizeinbase(value().get_mpz_t(), 10);
}

nlohmann::json ExponentVector::to_json() const {
  nlohmann::json factors = nlohmann::json::array();
  for (const Factor& f : factors_) factors.push_back({f.prime, f.exponent});
  return {{"f", f_}, {"n", n_}, {"factors", std::move(factors)}};
}

ExponentVector ExponentVector::from_json(const nlohmann::json& j) {
  try {
    std::vector<Factor> factors;
    for (const auto& entry : j.at("factors")) {
      if (!entry.is_array() || entry.size() != 2) throw ParseError("factor entries must be [p, e] pairs");
      factors.push_back({entry[0].get<std::uint64_t>(), entry[1].get<std::uint64_t>()});
    }
    return ExponentVector(j.at("n").get<std::uint64_t>(), j.at("f").get<std::string>(), std::move(factors));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad exponent vector JSON: ") + e.what());
  }
}

std::uint64_t exponent(const FMap& f, std::uint64_t p, std::uint64_t n) {
  std::uint64_t total = 0;
  for (unsigned k = 0;; ++k) {
    const std::uint64_t term = floor_quotient(n, f, p, k);
    if (term == 0) break;
    total += term;
  }
  return total;
}

std::vector<std::uint64_t> contributing_primes(const FMap& f, std::uint64_t n) {
  if (f.divergence() != Divergence::tends_to_infinity) {
    throw DivergentFactorial("n!_f is not defined for f = " + f.dsl() +
                             ": f does not tend to infinity along the primes, so the product diverges");
  }
  const mpq_class x(mpz_class(static_cast<unsigned long>(n)));
  // log p <= n iff p <= floor(e^n), so no per-prime comparison is needed.
  const std::uint64_t limit = f.kind() == FKind::log_map ? (n == 0 ? 1 : floor_exp(x)) : f.support_limit(x);
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  if (limit > kMaxFactorialSupport) {
    throw CapacityError(std::to_string(n) + "!_f for f = " + f.dsl() + " needs primes up to " + std::to_string(limit) +
                        ", above the factorial capacity " + std::to_string(kMaxFactorialSupport));
  }
  const auto table = primes_through(limit);
  for (std::uint64_t p : table->up_to(limit)) {
    if (f.kind() == FKind::log_map || compare_scaled(f, p, 0, x) <= 0) out.push_back(p);
  }
  return out;
}

namespace {

// For p > n only the k = 0 term survives (p log p > n), and
// floor(n / log p) is the largest j with p <= floor(e^(n/j)).
ExponentVector log_map_exponents(const FMap& f, std::uint64_t n) {
  std::vector<std::uint64_t> thresholds;  // thresholds[j - 1] = floor(e^(n/j)), decreasing
  for (std::uint64_t j = 1; n > 0; ++j) {
    const std::uint64_t t = floor_exp(mpq_class(static_cast<unsigned long>(n), static_cast<unsigned long>(j)));
    if (t <= n) break;
    thresholds.push_back(t);
  }
  std::vector<Factor> factors;
  std::size_t j = thresholds.size();
  for (std::uint64_t p : contributing_primes(f, n)) {
    if (p <= n) {
      factors.push_back({p, exponent(f, p, n)});
      continue;
    }
    while (j > 0 && p > thresholds[j - 1]) --j;
    if (j > 0) factors.push_back({p, j});
  }
  return ExponentVector(n, f.dsl(), std::move(factors));
}

}  // namespace

ExponentVector factorial_exponents(const FMap& f, std::uint64_t n) {
  if (f.kind() == FKind::log_map) return log_map_exponents(f, n);
  std::vector<Factor> factors;
  for (std::uint64_t p : contributing_primes(f, n)) {
    const std::uint64_t e = exponent(f, p, n);
    if (e > 0) factors.push_back({p, e});
  }
  return ExponentVector(n, f.dsl(), std::move(factors));
}

Factorial factorial(const FMap& f, std::uint64_t n) {
  ExponentVector exps = factorial_exponents(f, n);
  mpz_class value = exps.value();
  return {std::move(exps), std::move(value)};
}

BoundedValue log_factorial(const FMap& f, std::uint64_t n, Precision precision) {
  // Guard bits cover the magnitude of the sum and the rounding of each term.
  const Precision working = precision + 64 + 2 * static_cast<Precision>(std::bit_width(n + 1));
  BoundedValue out = factorial_exponents(f, n).log(working);
  return out;
}

ExponentVector quotient(const ExponentVector& a, const ExponentVector& b) {
  std::vector<Factor> out;
  std::size_t j = 0;
  const auto bf = b.factors();
  for (const Factor& fa : a.factors()) {
    if (j < bf.size() && bf[j].prime < fa.prime) {
      throw ViolatedDivisibility("divisor has prime " + std::to_string(bf[j].prime) + " absent from dividend",
                                 bf[j].prime);
    }
    std::uint64_t e = fa.exponent;
    if (j < bf.size() && bf[j].prime == fa.prime) {
      if (bf[j].exponent > e) {
        throw ViolatedDivisibility("negative exponent at prime " + std::to_string(fa.prime), fa.prime);
      }
      e -= bf[j].exponent;
      ++j;
    }
    if (e > 0) out.push_back({fa.prime, e});
  }
  if (j < bf.size()) {
    throw ViolatedDivisibility("divisor has prime " + std::to_string(bf[j].prime) + " absent from dividend",
                               bf[j].prime);
  }
  return ExponentVector(a.n(), a.f(), std::move(out));
}

ExponentVector product(const ExponentVector& a, const ExponentVector& b) {
  std::vector<Factor> out;
  const auto af = a.factors();
  const auto bf = b.factors();
  std::size_t i = 0, j = 0;
  while (i < af.size() || j < bf.size()) {
    if (j == bf.size() || (i < af.size() && af[i].prime < bf[j].prime)) {
      out.push_back(af[i++]);
    } else if (i == af.size() || bf[j].prime < af[i].prime) {
      out.push_back(bf[j++]);
    } else {
      out.push_back({af[i].prime, af[i].exponent + bf[j].exponent});
      ++i;
      ++j;
    }
  }
  return ExponentVector(a.n() + b.n(), a.f(), std::move(out));
}

mpz_class generalized_binomial(const FMap& f, std::uint64_t n, std::uint64_t k) {
  if (k > n) throw DomainError("generalized_binomial requires k <= n");
  const ExponentVector top = factorial_exponents(f, n);
  const ExponentVector bottom = product(factorial_exponents(f, k), factorial_exponents(f, n - k));
  return quotient(top, bottom).value();
}

bool divides(const ExponentVector& a, const ExponentVector& b) {
  for (const Factor& fa : a.factors()) {
    if (b.exponent_of(fa.prime) < fa.exponent) return false;
  }
  return true;
}

}  // namespace legendre
