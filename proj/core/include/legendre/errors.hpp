#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace legendre {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures of the mathematical domain: undefined factorials, comparisons
// that cannot be settled at the precision ceiling, non-positive f(p).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivergentFactorial : public DomainError {
 public:
  using DomainError::DomainError;
};

// n / (f(p) p^k) stayed within 2^-ceiling of an integer.
class AmbiguousFloor : public DomainError {
 public:
  AmbiguousFloor(const std::string& what, mpz_class lower, mpz_class upper)
      : DomainError(what), lower_(std::move(lower)), upper_(std::move(upper)) {}

  const mpz_class& lower() const { return lower_; }
  const mpz_class& upper() const { return upper_; }

 private:
  mpz_class lower_;
  mpz_class upper_;
};

class AmbiguousComparison : public DomainError {
 public:
  using DomainError::DomainError;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// A generalized binomial had a negative exponent. Binomial integrality of
// f-factorials makes this unreachable unless the exponent code is wrong.
class ViolatedDivisibility : public Error {
 public:
  ViolatedDivisibility(const std::string& what, std::uint64_t prime)
      : Error(what), prime_(prime) {}
  std::uint64_t prime() const { return prime_; }

 private:
  std::uint64_t prime_;
};

class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

class UnstableTruncation : public Error {
 public:
  using Error::Error;
};

}  // namespace legendre
