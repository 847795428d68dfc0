#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <gtest/gtest.h>

#include "legendre/errors.hpp"
#include "legendre/prime_engine.hpp"

using namespace legendre;

namespace {

// Plain trial division, kept separate from the sieve on purpose.
bool trial_division(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("legendre-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(PrimesUpTo, SmallLimits) {
  const PrimeTable ten = primes_up_to(10);
  EXPECT_EQ(ten.primes().size(), 4u);
  const std::vector<std::uint64_t> expected = {2, 3, 5, 7};
  const auto got = ten.primes();
  EXPECT_TRUE(std::equal(got.begin(), got.end(), expected.begin(), expected.end()));
  EXPECT_EQ(primes_up_to(2).size(), 1u);
  EXPECT_EQ(primes_up_to(2)[0], 2u);
  EXPECT_TRUE(primes_up_to(1).empty());
  EXPECT_TRUE(primes_up_to(0).empty());
}

TEST(PrimesUpTo, PrimeCountToAMillion) { EXPECT_EQ(primes_up_to(1000000).size(), 78498u); }

TEST(PrimesUpTo, MatchesTrialDivision) {
  const PrimeTable table = primes_up_to(20000);
  std::vector<std::uint64_t> expected;
  for (std::uint64_t n = 0; n <= 20000; ++n) {
    if (trial_division(n)) expected.push_back(n);
  }
  ASSERT_EQ(table.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(table[i], expected[i]);
}

TEST(PrimesUpTo, SegmentBoundariesAndThreads) {
  SieveOptions tiny;
  tiny.segment_bytes = 64;
  SieveOptions threaded;
  threaded.threads = 4;
  threaded.segment_bytes = 100;
  const PrimeTable reference = primes_up_to(300007);
  EXPECT_EQ(primes_up_to(300007, tiny), reference);
  EXPECT_EQ(primes_up_to(300007, threaded), reference);
  EXPECT_EQ(primes_up_to(300007), reference);
}

TEST(PrimesUpTo, CapacityError) { EXPECT_THROW(primes_up_to(kMaxSieveLimit + 1), CapacityError); }

TEST(PrimesInRange, AgreesWithTable) {
  const PrimeTable table = primes_up_to(3000000);
  for (auto [lo, hi] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
           {0, 100}, {2, 2}, {3, 3}, {4, 4}, {1000000, 2000000}, {999983, 999983}, {1048576, 3000000}}) {
    const auto got = primes_in_range(lo, hi);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t p : table.primes()) {
      if (p >= lo && p <= hi) expected.push_back(p);
    }
    EXPECT_EQ(got, expected) << lo << ".." << hi;
  }
}

TEST(IsPrime, AgreesWithSieveAndKnownValues) {
  const PrimeTable table = primes_up_to(100000);
  for (std::uint64_t n = 0; n <= 100000; ++n) EXPECT_EQ(is_prime(n), table.contains(n)) << n;
  EXPECT_TRUE(is_prime(18446744073709551557ull));
  EXPECT_FALSE(is_prime(18446744073709551555ull));
  EXPECT_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_TRUE(is_prime(4294967291ull));
}

TEST(PrimeTable, CountAndRanges) {
  const PrimeTable table = primes_up_to(100);
  EXPECT_EQ(table.count_up_to(100), 25u);
  EXPECT_EQ(table.count_up_to(1), 0u);
  EXPECT_EQ(table.up_to(10).size(), 4u);
  EXPECT_THROW(table.count_up_to(101), CapacityError);
}

TEST(PrimeCache, RoundTrip) {
  const auto dir = scratch_dir("cache");
  SieveOptions options;
  options.cache_dir = dir;
  const PrimeTable first = primes_up_to(50000, options);
  const auto file = prime_cache_file(dir, 50000);
  ASSERT_TRUE(std::filesystem::exists(file));
  EXPECT_EQ(file.filename(), "primes-50000.bin");
  EXPECT_EQ(std::filesystem::file_size(file), 24 + 8 * first.size());
  const auto loaded = read_prime_cache(file, 50000);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(*loaded, first);
  EXPECT_EQ(primes_up_to(50000, options), first);
  EXPECT_FALSE(read_prime_cache(file, 50001).has_value());
  std::filesystem::remove_all(dir);
}

TEST(PrimeCache, LayoutIsLittleEndian) {
  const auto dir = scratch_dir("layout");
  const auto file = dir / "t.bin";
  write_prime_cache(file, primes_up_to(10));
  std::ifstream in(file, std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ASSERT_EQ(bytes.size(), 24u + 32u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 8), "LLPRIME1");
  EXPECT_EQ(bytes[8], 10);
  EXPECT_EQ(bytes[16], 4);
  EXPECT_EQ(bytes[24], 2);
  EXPECT_EQ(bytes[32], 3);
  EXPECT_EQ(bytes[48], 7);
  std::filesystem::remove_all(dir);
}

TEST(PrimeCache, RejectsCorruptFiles) {
  const auto dir = scratch_dir("corrupt");
  const auto file = dir / "t.bin";
  write_prime_cache(file, primes_up_to(1000));
  std::filesystem::resize_file(file, std::filesystem::file_size(file) - 3);
  EXPECT_FALSE(read_prime_cache(file, 1000).has_value());
  {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out << "NOTPRIME";
  }
  EXPECT_FALSE(read_prime_cache(file, 1000).has_value());
  EXPECT_FALSE(read_prime_cache(dir / "missing.bin", 1000).has_value());
  std::filesystem::remove_all(dir);
}

TEST(Theta, SmallValues) {
  EXPECT_NEAR(theta(std::uint64_t{10}).mid_double(), std::log(210.0), 1e-15);
  EXPECT_TRUE(theta(std::uint64_t{10}).overlaps(BoundedValue::log_of(std::uint64_t{210})));
  EXPECT_TRUE(theta(std::uint64_t{1}).is_point());
  EXPECT_EQ(theta(std::uint64_t{1}).hi_double(), 0.0);
  EXPECT_TRUE(theta(10.9).overlaps(theta(std::uint64_t{10})));
  EXPECT_THROW(theta(-1.0), DomainError);
}

TEST(Theta, AgreesWithLongDoubleSum) {
  long double sum = 0;
  const PrimeTable table = primes_up_to(100000);
  for (std::uint64_t p : table.primes()) sum += std::log(static_cast<long double>(p));
  const BoundedValue t = theta(std::uint64_t{100000});
  EXPECT_NEAR(t.mid_double(), static_cast<double>(sum), 1e-8);
  EXPECT_LT(t.width_double(), 1e-20);
}

TEST(PrimeLogs, SharedInstanceGrows) {
  const auto small = PrimeLogs::through(100, 64);
  const auto large = PrimeLogs::through(1 << 17, 64);
  EXPECT_GE(large->table().limit(), std::uint64_t{1} << 17);
  EXPECT_NEAR(large->log_at(0).mid_double(), std::log(2.0), 1e-16);
  EXPECT_GE(small->table().limit(), 100u);
}
