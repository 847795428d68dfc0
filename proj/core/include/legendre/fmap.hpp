#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "legendre/bounded_value.hpp"

namespace legendre {

enum class FKind {
  identity,            // x
  shifted_linear,      // (x + b) / a
  half_ceiling,        // ceil((x - 1) / 2)
  log_map,             // log x
  sine_abs,            // |sin x|
  quadratic_upper,     // a x^2 / (a x + M)
  quadratic_lower,     // a x (x - 1) / (a x + M)
};

enum class Divergence { tends_to_infinity, not_divergent, unknown };

// A prime-to-real map drawn from a closed set of kinds. Immutable.
class FMap {
 public:
  static FMap identity();
  // (x + b) / a with a >= 1.
  static FMap shifted_linear(std::int64_t a, std::int64_t b);
  static FMap half_ceiling();
  static FMap log_map();
  static FMap sine_abs();
  // alpha x^2 / (alpha x + M), the comparison map on the upper side of a
  // linear certificate.
  static FMap quadratic_upper(std::uint64_t alpha, const mpq_class& M);
  // alpha x (x - 1) / (alpha x + M).
  static FMap quadratic_lower(std::uint64_t alpha, const mpq_class& M);

  // Accepts "x", "x-1", "x+3", "(x+b)/a", "ceil((x-1)/2)", "log(x)",
  // "abs(sin(x))", "a*x^2/(a*x+M)" and "a*x*(x-1)/(a*x+M)". Case and
  // whitespace are ignored. Throws ParseError.
  static FMap parse(std::string_view text);

  FKind kind() const { return kind_; }
  Divergence divergence() const;
  // Canonical DSL string; parse(dsl()) == *this.
  std::string dsl() const;

  // True when f(p) is rational for every prime.
  bool is_exact() const;
  mpq_class exact_value(std::uint64_t p) const;
  // Enclosure of f(p); width <= 2^(-prec+2) relative to |f(p)| for the
  // transcendental kinds.
  BoundedValue enclose(std::uint64_t p, Precision prec) const;

  // Every prime p with f(p) <= x satisfies p <= support_limit(x).
  // Throws DivergentFactorial for maps that do not tend to infinity.
  std::uint64_t support_limit(const mpq_class& x) const;

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  const mpq_class& m() const { return m_; }

  friend bool operator==(const FMap& lhs, const FMap& rhs) {
    return lhs.kind_ == rhs.kind_ && lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.m_ == rhs.m_;
  }

 private:
  FMap(FKind kind, std::int64_t a, std::int64_t b, mpq_class m);

  FKind kind_;
  std::int64_t a_ = 1;
  std::int64_t b_ = 0;
  mpq_class m_ = 0;
};

using FValue = std::variant<mpq_class, BoundedValue>;

inline constexpr Precision kFloorStartPrecision = 64;
inline constexpr Precision kFloorPrecisionCeiling = 4096;

// f(p): exact rational for the exact kinds, enclosure otherwise. Throws
// DomainError for precision < 32 or f(p) <= 0.
FValue eval(const FMap& f, std::uint64_t p, Precision precision = kFloorStartPrecision);

// floor(n / (f(p) p^k)). Transcendental f(p) is refined from 64 bits up to the
// ceiling; throws AmbiguousFloor when the floor is still undetermined.
std::uint64_t floor_quotient(std::uint64_t n, const FMap& f, std::uint64_t p, unsigned k,
                             Precision ceiling = kFloorPrecisionCeiling);

// floor(e^x) for rational 0 <= x <= 44, decided exactly (e^x is irrational
// for x != 0). Throws CapacityError above 44 and DomainError below 0.
std::uint64_t floor_exp(const mpq_class& x);

// Sign of f(p) p^k - x, refining transcendental values; throws
// AmbiguousComparison at the ceiling.
int compare_scaled(const FMap& f, std::uint64_t p, unsigned k, const mpq_class& x,
                   Precision ceiling = kFloorPrecisionCeiling);

// 0 <= 1/f(p) - alpha/p <= M/p^2 for every prime p.
struct LinearCertificate {
  std::uint64_t alpha = 1;
  mpq_class M = 0;
};

enum class CertificateSide { lower, upper };

struct CertificateReport {
  bool passed = false;
  std::uint64_t bound = 0;
  std::uint64_t primes_checked = 0;
  // Set on failure.
  std::optional<std::uint64_t> witness;
  std::optional<CertificateSide> violated;
  // Closed-form argument that covers all primes, when one is known.
  std::optional<std::string> justification;
  // True when 1/f(p) - alpha/p == 0 for every checked prime.
  bool equality_throughout = false;
};

CertificateReport verify_certificate(const FMap& f, const LinearCertificate& cert, std::uint64_t bound);

}  // namespace legendre
