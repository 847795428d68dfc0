#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "legendre/bounded_value.hpp"
#include "legendre/errors.hpp"
#include "legendre/fmap.hpp"

namespace legendre {

enum class ConstantMode { rigorous, accelerated };

struct ConstantOptions {
  // Largest prime cutoff the rigorous mode may use.
  std::uint64_t prime_budget = std::uint64_t{1} << 31;
  unsigned threads = 1;
  Precision precision = kDefaultPrecision;
  // Cutoff of the finer partial sum in accelerated mode.
  std::uint64_t accelerated_cutoff = std::uint64_t{1} << 21;
};

struct ConstantResult {
  BoundedValue value;
  // Prime cutoff N: every prime p <= N was summed.
  std::uint64_t cutoff = 0;
  std::uint64_t primes_used = 0;
  // Upper bound on the omitted sum over p > N. Zero in accelerated mode.
  BoundedValue tail_bound;
  double target_tolerance = 0;
  ConstantMode mode = ConstantMode::rigorous;
  // Accelerated mode only: difference of successive extrapolants.
  std::optional<double> error_estimate;

  nlohmann::json to_json() const;
};

class BudgetExceeded : public CapacityError {
 public:
  BudgetExceeded(const std::string& what, ConstantResult best) : CapacityError(what), best_(std::move(best)) {}
  const ConstantResult& best() const { return best_; }

 private:
  ConstantResult best_;
};

// Upper bound (log N + 1) / N on sum_{m > N} log m / m^2, valid for N >= 3
// (log t / t^2 is decreasing there, so the sum is below the integral from N).
BoundedValue log_square_tail(std::uint64_t n, Precision prec = kDefaultPrecision);

// sum_p (p log p / (p - 1)) (1/f(p) - alpha/p) with the tail over p > N
// bounded by 2 M (log N + 1) / N. The certificate must hold; verify it first.
ConstantResult beta_f(const FMap& f, const LinearCertificate& cert, double tol, const ConstantOptions& options = {});

// sum_p log p / (p - 1)^2.
ConstantResult constant_C(double tol, const ConstantOptions& options = {});

// sum_p (log p / (p - 1)) (p / ceil((p - 1)/2) - 2).
ConstantResult constant_beta(double tol, const ConstantOptions& options = {});

// Non-rigorous Richardson extrapolation 2 S(2N) - S(N) of the partial sums,
// which cancels the 1/N leading term of the tail.
ConstantResult accelerated_beta_f(const FMap& f, const LinearCertificate& cert, const ConstantOptions& options = {});
ConstantResult accelerated_C(const ConstantOptions& options = {});
ConstantResult accelerated_beta(const ConstantOptions& options = {});

// Enclosure of -zeta'(2) = sum_{m >= 2} log m / m^2 from the first n terms
// plus the integral tail.
BoundedValue neg_zeta_prime_2(std::uint64_t n = std::uint64_t{1} << 16, Precision prec = kDefaultPrecision);

// Partial sums over p <= cutoff (no tail).
BoundedValue partial_C(std::uint64_t cutoff, Precision prec = kDefaultPrecision);
BoundedValue partial_beta(std::uint64_t cutoff, Precision prec = kDefaultPrecision);

const char* to_string(ConstantMode mode);

}  // namespace legendre
