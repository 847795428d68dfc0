#include "legendre/prime_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <new>
#include <thread>

#include "legendre/errors.hpp"

namespace legendre {

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
    : limit_(limit), primes_(std::move(primes)) {}

std::span<const std::uint64_t> PrimeTable::up_to(std::uint64_t x) const {
  return std::span<const std::uint64_t>(primes_).first(count_up_to(std::min(x, limit_)));
}

std::size_t PrimeTable::count_up_to(std::uint64_t x) const {
  if (x > limit_) throw CapacityError("prime table does not reach the requested bound");
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

bool PrimeTable::contains(std::uint64_t n) const {
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

namespace {

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd numbers in [low, high) with low odd; byte i stands for low + 2i.
void sieve_segment(std::uint64_t low, std::uint64_t high, std::span<const std::uint64_t> base,
                   std::vector<std::uint8_t>& flags, std::vector<std::uint64_t>& out) {
  const std::size_t count = static_cast<std::size_t>((high - low + 1) / 2);
  flags.assign(count, 1);
  for (std::uint64_t p : base) {
    if (p == 2) continue;
    if (p * p >= high) break;
    std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
    if (start % 2 == 0) start += p;
    for (std::uint64_t m = start; m < high; m += 2 * p) flags[static_cast<std::size_t>((m - low) / 2)] = 0;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t value = low + 2 * i;
    if (flags[i] && value > 1) out.push_back(value);
  }
}

}  // namespace

PrimeTable primes_up_to(std::uint64_t limit, const SieveOptions& options) {
  if (limit < 2) return PrimeTable(limit, {});
  if (limit > kMaxSieveLimit) {
    throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds capacity " +
                        std::to_string(kMaxSieveLimit));
  }

  if (options.cache_dir) {
    if (auto cached = read_prime_cache(prime_cache_file(*options.cache_dir, limit), limit)) {
      return std::move(*cached);
    }
  }

  std::vector<std::uint64_t> primes;
  try {
    const std::vector<std::uint64_t> base = small_primes(isqrt(limit));
    const std::uint64_t span = 2 * std::max<std::size_t>(options.segment_bytes, 64);
    const std::uint64_t end = limit + 1;  // exclusive
    const std::uint64_t segments = (end - 1 + span - 1) / span;  // odd region starts at 1
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(segments)));

    // Segment s covers [1 + s*span, min(1 + (s+1)*span, end)). Threads own
    // contiguous runs of segments; outputs are concatenated in order.
    std::vector<std::vector<std::uint64_t>> parts(threads);
    auto work = [&](unsigned t) {
      std::vector<std::uint8_t> flags;
      const std::uint64_t first = segments * t / threads;
      const std::uint64_t last = segments * (t + 1) / threads;
      for (std::uint64_t s = first; s < last; ++s) {
        const std::uint64_t low = 1 + s * span;
        const std::uint64_t high = std::min(low + span, end);
        sieve_segment(low, high, base, flags, parts[t]);
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    std::size_t total = 1;
    for (const auto& part : parts) total += part.size();
    primes.reserve(total);
    primes.push_back(2);
    for (const auto& part : parts) primes.insert(primes.end(), part.begin(), part.end());
  } catch (const std::bad_alloc&) {
    throw CapacityError("out of memory while sieving to " + std::to_string(limit));
  }

  PrimeTable table(limit, std::move(primes));
  if (options.cache_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options.cache_dir, ec);
    if (!ec) {
      try {
        write_prime_cache(prime_cache_file(*options.cache_dir, limit), table);
      } catch (const Error&) {
        // The cache is an optimization; an unwritable directory is not fatal.
      }
    }
  }
  return table;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t low, std::uint64_t high) {
  std::vector<std::uint64_t> out;
  if (high < 2 || low > high) return out;
  if (high > kMaxSieveLimit) throw CapacityError("range end beyond sieve capacity");
  if (low <= 2) out.push_back(2);
  const std::vector<std::uint64_t> base = small_primes(isqrt(high));
  std::uint64_t start = std::max<std::uint64_t>(low, 3) | 1;
  const std::uint64_t span = std::uint64_t{1} << 19;
  std::vector<std::uint8_t> flags;
  for (std::uint64_t s = start; s <= high; s += span) {
    sieve_segment(s, std::min(s + span, high + 1), base, flags, out);
  }
  return out;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

namespace {

constexpr std::array<char, 8> kMagic = {'L', 'L', 'P', 'R', 'I', 'M', 'E', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(bytes.data(), bytes.size());
}

bool get_u64(std::istream& is, std::uint64_t& v) {
  std::array<unsigned char, 8> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return true;
}

}  // namespace

std::filesystem::path prime_cache_file(const std::filesystem::path& dir, std::uint64_t limit) {
  return dir / ("primes-" + std::to_string(limit) + ".bin");
}

void write_prime_cache(const std::filesystem::path& file, const PrimeTable& table) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open prime cache for writing: " + tmp.string());
    os.write(kMagic.data(), kMagic.size());
    put_u64(os, table.limit());
    put_u64(os, table.size());
    for (std::uint64_t p : table.primes()) put_u64(os, p);
    if (!os) throw Error("failed writing prime cache: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw Error("cannot publish prime cache: " + file.string());
}

std::optional<PrimeTable> read_prime_cache(const std::filesystem::path& file, std::uint64_t limit) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) return std::nullopt;
  std::uint64_t stored_limit = 0, count = 0;
  if (!get_u64(is, stored_limit) || !get_u64(is, count)) return std::nullopt;
  if (stored_limit != limit) return std::nullopt;
  std::error_code ec;
  const auto size = std::filesystem::file_size(file, ec);
  if (ec || size != 24 + 8 * count) return std::nullopt;
  std::vector<std::uint64_t> primes(static_cast<std::size_t>(count));
  for (auto& p : primes) {
    if (!get_u64(is, p)) return std::nullopt;
  }
  if (!std::is_sorted(primes.begin(), primes.end()) || (!primes.empty() && primes.back() > limit)) {
    return std::nullopt;
  }
  return PrimeTable(limit, std::move(primes));
}

PrimeSource& PrimeSource::global() {
  static PrimeSource source;
  return source;
}

std::shared_ptr<const PrimeTable> PrimeSource::through(std::uint64_t limit) {
  std::lock_guard lock(mutex_);
  if (table_ && table_->limit() >= limit) return table_;
  // Power-of-two limits keep the on-disk cache keys stable across queries.
  std::uint64_t rounded = std::bit_ceil(std::max<std::uint64_t>(limit, std::uint64_t{1} << 16));
  if (rounded > kMaxSieveLimit) rounded = std::max(limit, kMaxSieveLimit);
  table_ = std::make_shared<const PrimeTable>(primes_up_to(rounded, options_));
  return table_;
}

void PrimeSource::set_options(SieveOptions options) {
  std::lock_guard lock(mutex_);
  options_ = std::move(options);
}

SieveOptions PrimeSource::options() const {
  std::lock_guard lock(mutex_);
  return options_;
}

PrimeLogs::PrimeLogs(std::shared_ptr<const PrimeTable> table, Precision prec)
    : table_(std::move(table)), precision_(prec) {
  logs_.reserve(table_->size());
  for (std::uint64_t p : table_->primes()) logs_.push_back(BoundedValue::log_of(p, prec));
}

std::shared_ptr<const PrimeLogs> PrimeLogs::through(std::uint64_t limit, Precision prec) {
  static std::mutex mutex;
  static std::map<Precision, std::shared_ptr<const PrimeLogs>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[prec];
  if (!slot || slot->table().limit() < limit) {
    slot = std::make_shared<const PrimeLogs>(primes_through(limit), prec);
  }
  return slot;
}

BoundedValue theta(std::uint64_t x, Precision prec) {
  IntervalSum sum(prec);
  if (x < 2) return sum.value();
  const auto table = primes_through(x);
  for (std::uint64_t p : table->up_to(x)) sum.add(BoundedValue::log_of(p, prec));
  return sum.value();
}

BoundedValue theta(double x, Precision prec) {
  if (!(x >= 0)) throw DomainError("theta: x must be nonnegative");
  if (x >= static_cast<double>(kMaxSieveLimit)) throw CapacityError("theta: x beyond sieve capacity");
  return theta(static_cast<std::uint64_t>(std::floor(x)), prec);
}

}  // namespace legendre
