#include "legendre/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "legendre/prime_engine.hpp"

namespace legendre {

namespace {

constexpr std::uint64_t kBlockWidth = std::uint64_t{1} << 20;
constexpr std::uint64_t kFirstCutoff = std::uint64_t{1} << 10;

// Adds the contribution of prime p (with log p enclosed in log_p) to sum.
using Summand = std::function<void(std::uint64_t p, const BoundedValue& log_p, IntervalSum& sum)>;

struct PrimeSum {
  BoundedValue value;
  std::uint64_t primes = 0;
};

// Sum over primes in [low, high] in fixed blocks. Blocks may run on several
// threads but are merged in ascending order, so the enclosure does not
// depend on the thread count.
PrimeSum sum_over_primes(std::uint64_t low, std::uint64_t high, const Summand& summand, Precision prec,
                         unsigned threads) {
  PrimeSum out{BoundedValue::from_integer(0, prec), 0};
  if (high < 2 || low > high) return out;
  low = std::max<std::uint64_t>(low, 2);
  const std::uint64_t blocks = (high - low) / kBlockWidth + 1;
  std::vector<IntervalSum> sums(blocks, IntervalSum(prec));
  std::vector<std::uint64_t> counts(blocks, 0);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t lo = low + b * kBlockWidth;
      const std::uint64_t hi = std::min(high, lo + kBlockWidth - 1);
      for (std::uint64_t p : primes_in_range(lo, hi)) {
        summand(p, BoundedValue::log_of(p, prec), sums[b]);
        ++counts[b];
      }
    }
  };
  const unsigned pool_size = static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), blocks));
  if (pool_size <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(work);
  }
  IntervalSum total(prec);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    total.add(sums[b]);
    out.primes += counts[b];
  }
  out.value = total.value();
  return out;
}

// Tail bound on the omitted primes p > N as a function of N.
using TailBound = std::function<BoundedValue(std::uint64_t n)>;

constexpr std::uint64_t kUnreachableCutoff = std::uint64_t{1} << 24;

ConstantResult rigorous(const Summand& summand, const TailBound& tail, double tol, const ConstantOptions& options) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  const Precision prec = options.precision;
  // Leave a tenth of the tolerance for the width of the partial sum.
  std::uint64_t cutoff = kFirstCutoff;
  bool within_budget = true;
  while (tail(cutoff).hi_double() > 0.9 * tol) {
    if (cutoff >= options.prime_budget) {
      // The target is out of reach; report a cheaper enclosure instead of
      // sieving the whole budget for nothing.
      within_budget = false;
      cutoff = std::min(options.prime_budget, kUnreachableCutoff);
      break;
    }
    cutoff = std::min(cutoff * 2, options.prime_budget);
  }
  const PrimeSum partial = sum_over_primes(2, cutoff, summand, prec, options.threads);
  ConstantResult out;
  out.cutoff = cutoff;
  out.primes_used = partial.primes;
  out.tail_bound = tail(cutoff);
  out.target_tolerance = tol;
  out.mode = ConstantMode::rigorous;
  // Every omitted term is nonnegative, so the value lies in
  // [partial, partial + tail].
  out.value = partial.value + BoundedValue::hull(BoundedValue::from_integer(0, prec), out.tail_bound);
  if (!within_budget || out.value.width_double() > tol) {
    throw BudgetExceeded("tolerance " + std::to_string(tol) + " not reached within prime budget " +
                             std::to_string(options.prime_budget),
                         std::move(out));
  }
  return out;
}

ConstantResult accelerated(const Summand& summand, const ConstantOptions& options) {
  const Precision prec = options.precision;
  const std::uint64_t n = std::max<std::uint64_t>(options.accelerated_cutoff, 16);
  const PrimeSum a = sum_over_primes(2, n / 2, summand, prec, options.threads);
  const PrimeSum b = sum_over_primes(n / 2 + 1, n, summand, prec, options.threads);
  const PrimeSum c = sum_over_primes(n + 1, 2 * n, summand, prec, options.threads);
  const BoundedValue s_half = a.value;
  const BoundedValue s_n = s_half + b.value;
  const BoundedValue s_2n = s_n + c.value;
  const BoundedValue two = BoundedValue::from_integer(2, prec);
  BoundedValue fine = two * s_2n - s_n;
  const BoundedValue coarse = two * s_n - s_half;

  ConstantResult out;
  out.value = fine;
  out.cutoff = 2 * n;
  out.primes_used = a.primes + b.primes + c.primes;
  out.tail_bound = BoundedValue::from_integer(0, prec);
  out.mode = ConstantMode::accelerated;
  out.error_estimate = std::abs(fine.mid_double() - coarse.mid_double());
  out.target_tolerance = *out.error_estimate;
  return out;
}

Summand beta_f_summand(const FMap& f, const LinearCertificate& cert) {
  const mpq_class alpha(static_cast<unsigned long>(cert.alpha));
  if (f.is_exact()) {
    return [f, alpha](std::uint64_t p, const BoundedValue& log_p, IntervalSum& sum) {
      const mpq_class pq(static_cast<unsigned long>(p));
      const mpq_class gap = 1 / f.exact_value(p) - alpha / pq;
      if (gap < 0) throw DomainError("certificate lower side fails at p = " + std::to_string(p));
      if (gap == 0) return;
      mpq_class weight = pq / (pq - 1) * gap;
      weight.canonicalize();
      BoundedValue term = log_p;
      sum.add(term.mul(weight));
    };
  }
  return [f, alpha](std::uint64_t p, const BoundedValue& log_p, IntervalSum& sum) {
    const Precision prec = log_p.precision();
    const BoundedValue fp = f.enclose(p, prec);
    BoundedValue gap = BoundedValue::from_integer(1, prec) / fp;
    gap -= BoundedValue::from_rational(alpha / mpq_class(static_cast<unsigned long>(p)), prec);
    BoundedValue term = log_p * gap;
    term.mul(mpq_class(static_cast<unsigned long>(p), static_cast<unsigned long>(p - 1)));
    sum.add(term);
  };
}

void c_summand(std::uint64_t p, const BoundedValue& log_p, IntervalSum& sum) {
  const mpz_class d(static_cast<unsigned long>(p - 1));
  BoundedValue term = log_p;
  sum.add(term.div(d * d));
}

void beta_summand(std::uint64_t p, const BoundedValue& log_p, IntervalSum& sum) {
  // (log p / (p - 1)) (p / ceil((p - 1)/2) - 2), summed as written.
  const unsigned long half = static_cast<unsigned long>(p / 2);  // ceil((p - 1)/2)
  mpq_class weight = (mpq_class(static_cast<unsigned long>(p), half) - 2) / mpq_class(static_cast<unsigned long>(p - 1));
  weight.canonicalize();
  if (weight == 0) return;
  BoundedValue term = log_p;
  sum.add(term.mul(weight));
}

// ((N + 1)/N)^2 (log N + 1)/N, dominating sum_{p > N} log p / (p - 1)^2.
BoundedValue squared_tail(std::uint64_t n, Precision prec) {
  BoundedValue out = log_square_tail(n, prec);
  const mpq_class ratio(static_cast<unsigned long>(n + 1), static_cast<unsigned long>(n));
  out.mul(ratio * ratio);
  return out;
}

}  // namespace

BoundedValue log_square_tail(std::uint64_t n, Precision prec) {
  if (n < 3) throw DomainError("tail bound needs N >= 3");
  BoundedValue out = BoundedValue::log_of(n, prec) + BoundedValue::from_integer(1, prec);
  out.div(mpz_class(static_cast<unsigned long>(n)));
  return out;
}

ConstantResult beta_f(const FMap& f, const LinearCertificate& cert, double tol, const ConstantOptions& options) {
  const Precision prec = options.precision;
  const mpq_class M = cert.M;
  // Each omitted term is at most (p/(p-1)) M log p / p^2 <= 2 M log p / p^2.
  auto tail = [M, prec](std::uint64_t n) {
    BoundedValue out = log_square_tail(n, prec);
    out.mul(mpq_class(2 * M));
    return out;
  };
  return rigorous(beta_f_summand(f, cert), tail, tol, options);
}

ConstantResult constant_C(double tol, const ConstantOptions& options) {
  const Precision prec = options.precision;
  return rigorous(c_summand, [prec](std::uint64_t n) { return squared_tail(n, prec); }, tol, options);
}

ConstantResult constant_beta(double tol, const ConstantOptions& options) {
  const Precision prec = options.precision;
  // For odd p the summand is 2 log p / (p - 1)^2.
  auto tail = [prec](std::uint64_t n) {
    BoundedValue out = squared_tail(n, prec);
    out.mul(mpz_class(2));
    return out;
  };
  return rigorous(beta_summand, tail, tol, options);
}

ConstantResult accelerated_beta_f(const FMap& f, const LinearCertificate& cert, const ConstantOptions& options) {
  return accelerated(beta_f_summand(f, cert), options);
}

ConstantResult accelerated_C(const ConstantOptions& options) { return accelerated(c_summand, options); }

ConstantResult accelerated_beta(const ConstantOptions& options) { return accelerated(beta_summand, options); }

BoundedValue neg_zeta_prime_2(std::uint64_t n, Precision prec) {
  n = std::max<std::uint64_t>(n, 3);
  IntervalSum sum(prec);
  for (std::uint64_t m = 2; m <= n; ++m) {
    BoundedValue term = BoundedValue::log_of(m, prec);
    const mpz_class mz(static_cast<unsigned long>(m));
    sum.add(term.div(mz * mz));
  }
  return sum.value() + BoundedValue::hull(BoundedValue::from_integer(0, prec), log_square_tail(n, prec));
}

BoundedValue partial_C(std::uint64_t cutoff, Precision prec) {
  return sum_over_primes(2, cutoff, c_summand, prec, 1).value;
}

BoundedValue partial_beta(std::uint64_t cutoff, Precision prec) {
  return sum_over_primes(2, cutoff, beta_summand, prec, 1).value;
}

const char* to_string(ConstantMode mode) { return mode == ConstantMode::rigorous ? "rigorous" : "accelerated"; }

nlohmann::json ConstantResult::to_json() const {
  nlohmann::json j = {
      {"value_lo", value.lo_double()},
      {"value_hi", value.hi_double()},
      {"primes_used", primes_used},
      {"tail_bound", tail_bound.hi_double()},
      {"mode", to_string(mode)},
      {"cutoff", cutoff},
      {"target_tolerance", target_tolerance},
  };
  if (error_estimate) j["error_estimate"] = *error_estimate;
  return j;
}

}  // namespace legendre
