#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "legendre/bounded_value.hpp"
#include "legendre/fmap.hpp"

namespace legendre {

// Largest prime bound the sums below may scan before raising CapacityError.
inline constexpr std::uint64_t kMaxChebyshevSupport = std::uint64_t{1} << 24;

// theta_{g_k}(x) with g_k(p) = f(p) p^k: sum of log p over primes with
// f(p) p^k <= x. Requires f to tend to infinity along the primes.
BoundedValue theta_g(const FMap& f, unsigned k, const mpq_class& x, Precision prec = kDefaultPrecision);

// First f-Chebyshev function, theta_g with k = 0.
BoundedValue theta_f(const FMap& f, const mpq_class& x, Precision prec = kDefaultPrecision);

// Largest k with theta_{g_k}(x) > 0, or -1 when every term vanishes.
int psi_k_max(const FMap& f, const mpq_class& x);

// Second f-Chebyshev function: sum over k <= k_max of theta_{g_k}(x).
BoundedValue psi_f(const FMap& f, const mpq_class& x, Precision prec = kDefaultPrecision);

// Closed-form inverses for the maps that are strictly increasing and
// bijective on their relevant range.
bool has_closed_form_inverse(const FMap& f);

// Largest integer u with u <= f^{-1}(x), decided by exact rational
// arithmetic on the inverse formula (without evaluating f). Throws
// Unsupported when f has no closed-form inverse.
std::uint64_t inverse_floor(const FMap& f, const mpq_class& x);

// Enclosure of f^{-1}(x).
BoundedValue inverse_value(const FMap& f, const mpq_class& x, Precision prec = kDefaultPrecision);

struct InverseCheck {
  bool holds = false;
  BoundedValue theta_f_value;      // theta_f(x)
  BoundedValue theta_of_inverse;   // theta(f^{-1}(x))
  std::uint64_t inverse_floor = 0;
};

// Compares theta_f(x) with theta(f^{-1}(x)).
InverseCheck inverse_change_of_variables(const FMap& f, const mpq_class& x, Precision prec = kDefaultPrecision);

// (1/n) sum_{m>=1} [psi_f(alpha n/m) - theta_h(alpha n/m)] with
// f(x) = alpha x^2/(alpha x + M) and h(x) = alpha x(x-1)/(alpha x + M).
// Summands vanish for m > (alpha + M/2) n.
BoundedValue chebyshev_floor_residual(const LinearCertificate& cert, std::uint64_t n, Precision prec = kDefaultPrecision);

}  // namespace legendre
