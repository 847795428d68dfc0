#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "legendre/bounded_value.hpp"

namespace legendre {

// Largest sieve limit accepted before raising CapacityError.
inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 32;

// All primes <= limit, ascending.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes);

  std::uint64_t limit() const { return limit_; }
  std::size_t size() const { return primes_.size(); }
  bool empty() const { return primes_.empty(); }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::uint64_t operator[](std::size_t i) const { return primes_[i]; }

  // Prefix of primes <= x (x may exceed limit only up to limit).
  std::span<const std::uint64_t> up_to(std::uint64_t x) const;
  // Number of primes <= x; x must not exceed limit().
  std::size_t count_up_to(std::uint64_t x) const;
  bool contains(std::uint64_t n) const;

  friend bool operator==(const PrimeTable&, const PrimeTable&) = default;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

struct SieveOptions {
  // Directory holding "primes-<limit>.bin" files; nullopt disables caching.
  std::optional<std::filesystem::path> cache_dir;
  unsigned threads = 1;
  std::size_t segment_bytes = std::size_t{1} << 18;
};

// Segmented sieve of Eratosthenes. limit < 2 yields an empty table; limits
// above kMaxSieveLimit throw CapacityError.
PrimeTable primes_up_to(std::uint64_t limit, const SieveOptions& options = {});

// Primes in [low, high], ascending, without touching the shared table.
std::vector<std::uint64_t> primes_in_range(std::uint64_t low, std::uint64_t high);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Cache file: "LLPRIME1", u64 limit, u64 count, then count u64 primes, all
// little-endian.
std::filesystem::path prime_cache_file(const std::filesystem::path& dir, std::uint64_t limit);
void write_prime_cache(const std::filesystem::path& file, const PrimeTable& table);
// nullopt when the file is missing, truncated, or for another limit.
std::optional<PrimeTable> read_prime_cache(const std::filesystem::path& file, std::uint64_t limit);

// Process-wide growing prime table shared by the modules. Tables are
// immutable once published, so readers can hold them without locking.
class PrimeSource {
 public:
  static PrimeSource& global();

  // Returns a table whose limit is at least `limit`.
  std::shared_ptr<const PrimeTable> through(std::uint64_t limit);
  void set_options(SieveOptions options);
  SieveOptions options() const;

 private:
  mutable std::mutex mutex_;
  SieveOptions options_;
  std::shared_ptr<const PrimeTable> table_;
};

inline std::shared_ptr<const PrimeTable> primes_through(std::uint64_t limit) {
  return PrimeSource::global().through(limit);
}

// Enclosures of log p for the primes of a table, computed once.
class PrimeLogs {
 public:
  PrimeLogs(std::shared_ptr<const PrimeTable> table, Precision prec);

  const PrimeTable& table() const { return *table_; }
  const BoundedValue& log_at(std::size_t index) const { return logs_[index]; }
  Precision precision() const { return precision_; }

  // Shared instance covering primes <= limit at the given precision.
  static std::shared_ptr<const PrimeLogs> through(std::uint64_t limit, Precision prec);

 private:
  std::shared_ptr<const PrimeTable> table_;
  Precision precision_;
  std::vector<BoundedValue> logs_;
};

// Chebyshev theta: sum of log p over primes p <= x.
BoundedValue theta(std::uint64_t x, Precision prec = kDefaultPrecision);
BoundedValue theta(double x, Precision prec = kDefaultPrecision);

}  // namespace legendre
