#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "legendre/bounded_value.hpp"
#include "legendre/fmap.hpp"

namespace legendre {

struct Factor {
  std::uint64_t prime = 0;
  std::uint64_t exponent = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

// Canonical form of a generalized factorial: a sparse prime -> exponent map
// in ascending prime order with zero exponents omitted.
class ExponentVector {
 public:
  ExponentVector() = default;
  // Throws DomainError if factors are not strictly ascending or contain a
  // zero exponent.
  ExponentVector(std::uint64_t n, std::string f_dsl, std::vector<Factor> factors);

  std::uint64_t n() const { return n_; }
  const std::string& f() const { return f_; }
  std::span<const Factor> factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  std::uint64_t exponent_of(std::uint64_t p) const;

  // Expanded integer via a balanced product tree.
  mpz_class value() const;
  // Enclosure of sum e * log p in ascending prime order.
  BoundedValue log(Precision prec = kDefaultPrecision) const;
  std::size_t decimal_digits() const;

  nlohmann::json to_json() const;
  static ExponentVector from_json(const nlohmann::json& j);

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

 private:
  std::uint64_t n_ = 0;
  std::string f_;
  std::vector<Factor> factors_;
};

// sum_{k>=0} floor(n / (f(p) p^k)), stopping at the first zero term.
std::uint64_t exponent(const FMap& f, std::uint64_t p, std::uint64_t n);

// Largest prime bound a factorial may need before raising CapacityError. For
// log(x) this admits n <= 16, since n!_f involves every prime below e^n.
inline constexpr std::uint64_t kMaxFactorialSupport = std::uint64_t{1} << 24;

// Primes with f(p) <= n. Throws DivergentFactorial unless f tends to
// infinity along the primes, and CapacityError past kMaxFactorialSupport.
std::vector<std::uint64_t> contributing_primes(const FMap& f, std::uint64_t n);

ExponentVector factorial_exponents(const FMap& f, std::uint64_t n);

struct Factorial {
  ExponentVector exponents;
  mpz_class value;
};

Factorial factorial(const FMap& f, std::uint64_t n);

// Width <= 2^(-precision + 4).
BoundedValue log_factorial(const FMap& f, std::uint64_t n, Precision precision = kDefaultPrecision);

// a / b on exponent vectors; throws ViolatedDivisibility if b does not
// divide a.
ExponentVector quotient(const ExponentVector& a, const ExponentVector& b);
ExponentVector product(const ExponentVector& a, const ExponentVector& b);

// n!_f / (k!_f (n-k)!_f).
mpz_class generalized_binomial(const FMap& f, std::uint64_t n, std::uint64_t k);

// True iff a's exponent <= b's exponent at every prime.
bool divides(const ExponentVector& a, const ExponentVector& b);

}  // namespace legendre
