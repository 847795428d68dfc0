#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace legendre {

// A subset of the integers, either the primes (optionally bounded) or an
// explicit finite list. Elements are distinct and kept ascending.
class IntegerSet {
 public:
  // All primes; materialized on demand.
  static IntegerSet primes();
  static IntegerSet primes_up_to(std::uint64_t limit);
  // Throws DomainError on duplicates.
  static IntegerSet explicit_set(std::vector<std::int64_t> elements);
  // "primes", "primes:<limit>", or comma-separated integers.
  static IntegerSet parse(std::string_view text);
  // One integer per line; blank lines and '#' comments are skipped.
  static IntegerSet from_file(const std::filesystem::path& file);

  bool is_finite() const { return kind_ != Kind::all_primes; }
  // Number of elements; only meaningful for finite sets.
  std::size_t size() const;
  // The `count` smallest elements (fewer if the set is smaller).
  std::vector<std::int64_t> prefix(std::size_t count) const;
  std::string describe() const;

 private:
  enum class Kind { all_primes, bounded_primes, explicit_list };
  IntegerSet(Kind kind, std::uint64_t limit, std::vector<std::int64_t> elements);

  Kind kind_;
  std::uint64_t limit_ = 0;
  std::vector<std::int64_t> elements_;
};

struct POrdering {
  std::uint64_t p = 0;
  std::vector<std::int64_t> sequence;
  // step_valuations[k] = v_p(prod_{i<k} (a_k - a_i)); step 0 is 0.
  std::vector<std::uint64_t> step_valuations;
};

// p-adic valuation of a nonzero integer.
std::uint64_t valuation(std::int64_t x, std::uint64_t p);
std::uint64_t valuation(const mpz_class& x, std::uint64_t p);

// Greedy p-ordering of `length` elements from `pool`, breaking ties by the
// smallest element. Throws TruncationTooSmall if pool.size() < length.
POrdering p_ordering(std::span<const std::int64_t> pool, std::uint64_t p, std::size_t length);
// Same, with ties (including the choice of a_0) broken uniformly at random.
POrdering p_ordering(std::span<const std::int64_t> pool, std::uint64_t p, std::size_t length,
                     std::mt19937_64& rng);

// p-ordering over a set. Finite sets use all their elements; the infinite
// prime set uses the first max(4 length, 64) primes.
POrdering p_ordering(const IntegerSet& s, std::uint64_t p, std::size_t length);

// Pool size used for the infinite prime set before stability doubling.
std::size_t initial_pool_size(std::uint64_t n);

// Step valuations v_0..v_n that are stable under doubling the truncation.
// Throws UnstableTruncation if they have not settled by the pool cap.
std::vector<std::uint64_t> stable_valuations(const IntegerSet& s, std::uint64_t p, std::uint64_t n);

// v_n(S, p) = p^e with e the minimal valuation at step n.
mpz_class v_n(const IntegerSet& s, std::uint64_t p, std::uint64_t n);

struct BhargavaFactorial {
  mpz_class value;
  // (p, v_n(S,p)) for every p <= prime_bound with v_n > 1.
  std::vector<std::pair<std::uint64_t, mpz_class>> breakdown;
  std::uint64_t prime_bound = 0;
};

// Largest difference among the n + 1 smallest elements of S. Primes above it
// cannot divide any difference in a p-ordering prefix of length n + 1.
std::uint64_t prefix_difference_bound(const IntegerSet& s, std::uint64_t n);

// n!_S = prod_{p <= prime_bound} v_n(S, p); prime_bound = 0 selects
// prefix_difference_bound. Throws UnstableTruncation if doubling the bound
// changes the result.
BhargavaFactorial factorial_s(const IntegerSet& s, std::uint64_t n, std::uint64_t prime_bound = 0);

// |prod_{i<j} (a_i - a_j)|.
mpz_class difference_product(std::span<const std::int64_t> elements);

}  // namespace legendre
