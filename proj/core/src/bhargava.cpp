#include "legendre/bhargava.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "legendre/errors.hpp"
#include "legendre/prime_engine.hpp"

namespace legendre {

namespace {

constexpr std::size_t kMaxPool = std::size_t{1} << 16;

std::int64_t parse_int(std::string_view token) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("not an integer: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

IntegerSet::IntegerSet(Kind kind, std::uint64_t limit, std::vector<std::int64_t> elements)
    : kind_(kind), limit_(limit), elements_(std::move(elements)) {}

IntegerSet IntegerSet::primes() { return IntegerSet(Kind::all_primes, 0, {}); }

IntegerSet IntegerSet::primes_up_to(std::uint64_t limit) {
  std::vector<std::int64_t> elements;
  if (limit >= 2) {
    const auto table = primes_through(limit);
    for (std::uint64_t p : table->up_to(limit)) elements.push_back(static_cast<std::int64_t>(p));
  }
  return IntegerSet(Kind::bounded_primes, limit, std::move(elements));
}

IntegerSet IntegerSet::explicit_set(std::vector<std::int64_t> elements) {
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
    throw DomainError("integer set elements must be distinct");
  }
  // Differences must fit in int64.
  if (!elements.empty() && (elements.front() < -(std::int64_t{1} << 62) || elements.back() > (std::int64_t{1} << 62))) {
    throw CapacityError("integer set elements must lie within +-2^62");
  }
  return IntegerSet(Kind::explicit_list, 0, std::move(elements));
}

IntegerSet IntegerSet::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "primes") return primes();
  if (s.rfind("primes:", 0) == 0) {
    const std::int64_t limit = parse_int(std::string_view(s).substr(7));
    if (limit < 0) throw ParseError("prime limit must be nonnegative");
    return primes_up_to(static_cast<std::uint64_t>(limit));
  }
  if (s.empty()) throw ParseError("empty integer set");
  std::vector<std::int64_t> elements;
  std::string_view rest(s);
  while (true) {
    const auto comma = rest.find(',');
    elements.push_back(parse_int(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return explicit_set(std::move(elements));
}

IntegerSet IntegerSet::from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open set file: " + file.string());
  std::vector<std::int64_t> elements;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    elements.push_back(parse_int(line));
  }
  return explicit_set(std::move(elements));
}

std::size_t IntegerSet::size() const {
  if (kind_ == Kind::all_primes) throw Unsupported("the set of all primes is infinite");
  return elements_.size();
}

std::vector<std::int64_t> IntegerSet::prefix(std::size_t count) const {
  if (kind_ != Kind::all_primes) {
    const std::size_t take = std::min(count, elements_.size());
    return {elements_.begin(), elements_.begin() + static_cast<std::ptrdiff_t>(take)};
  }
  // p_k < k (log k + log log k) for k >= 6.
  const double k = static_cast<double>(std::max<std::size_t>(count, 6));
  const auto bound = static_cast<std::uint64_t>(k * (std::log(k) + std::log(std::log(k)))) + 16;
  auto table = primes_through(bound);
  if (table->size() < count) throw CapacityError("prime prefix beyond sieve capacity");
  std::vector<std::int64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<std::int64_t>((*table)[i]));
  return out;
}

std::string IntegerSet::describe() const {
  switch (kind_) {
    case Kind::all_primes:
      return "primes";
    case Kind::bounded_primes:
      return "primes:" + std::to_string(limit_);
    case Kind::explicit_list: {
      std::string out;
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(elements_[i]);
      }
      return out;
    }
  }
  return "?";
}

std::uint64_t valuation(std::int64_t x, std::uint64_t p) {
  if (x == 0) throw DomainError("valuation of zero is infinite");
  std::uint64_t u = x < 0 ? static_cast<std::uint64_t>(-(x + 1)) + 1 : static_cast<std::uint64_t>(x);
  std::uint64_t e = 0;
  while (u % p == 0) {
    u /= p;
    ++e;
  }
  return e;
}

std::uint64_t valuation(const mpz_class& x, std::uint64_t p) {
  if (x == 0) throw DomainError("valuation of zero is infinite");
  const mpz_class pz(static_cast<unsigned long>(p));
  mpz_class rest = x;
  return mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t());
}

namespace {

POrdering greedy(std::span<const std::int64_t> pool, std::uint64_t p, std::size_t length, std::mt19937_64* rng) {
  if (p < 2) throw DomainError("p-ordering requires a prime p");
  if (pool.size() < length) {
    throw TruncationTooSmall("p-ordering of length " + std::to_string(length) + " needs at least that many elements; have " +
                             std::to_string(pool.size()));
  }
  POrdering out;
  out.p = p;
  if (length == 0) return out;

  std::vector<std::uint64_t> acc(pool.size(), 0);
  std::vector<bool> used(pool.size(), false);
  std::vector<std::size_t> ties;
  for (std::size_t step = 0; step < length; ++step) {
    std::uint64_t best = UINT64_MAX;
    ties.clear();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      if (acc[i] < best) {
        best = acc[i];
        ties.clear();
      }
      if (acc[i] == best) ties.push_back(i);
    }
    std::size_t pick = ties.front();
    if (rng && ties.size() > 1) {
      std::uniform_int_distribution<std::size_t> dist(0, ties.size() - 1);
      pick = ties[dist(*rng)];
    }
    used[pick] = true;
    out.sequence.push_back(pool[pick]);
    out.step_valuations.push_back(best);
    if (step + 1 == length) break;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!used[i]) acc[i] += valuation(pool[i] - pool[pick], p);
    }
  }
  return out;
}

}  // namespace

POrdering p_ordering(std::span<const std::int64_t> pool, std::uint64_t p, std::size_t length) {
  return greedy(pool, p, length, nullptr);
}

POrdering p_ordering(std::span<const std::int64_t> pool, std::uint64_t p, std::size_t length, std::mt19937_64& rng) {
  return greedy(pool, p, length, &rng);
}

std::size_t initial_pool_size(std::uint64_t n) {
  return std::max<std::size_t>(4 * (static_cast<std::size_t>(n) + 1), 64);
}

POrdering p_ordering(const IntegerSet& s, std::uint64_t p, std::size_t length) {
  const std::size_t pool = s.is_finite() ? s.size() : std::max(initial_pool_size(length), length);
  const std::vector<std::int64_t> elements = s.prefix(pool);
  return p_ordering(elements, p, length);
}

std::vector<std::uint64_t> stable_valuations(const IntegerSet& s, std::uint64_t p, std::uint64_t n) {
  const std::size_t length = static_cast<std::size_t>(n) + 1;
  if (s.is_finite()) {
    const std::vector<std::int64_t> elements = s.prefix(s.size());
    return p_ordering(elements, p, length).step_valuations;
  }
  std::size_t pool = initial_pool_size(n);
  std::vector<std::uint64_t> current = p_ordering(s.prefix(pool), p, length).step_valuations;
  while (pool < kMaxPool) {
    std::vector<std::uint64_t> doubled = p_ordering(s.prefix(2 * pool), p, length).step_valuations;
    if (doubled == current) return current;
    current = std::move(doubled);
    pool *= 2;
  }
  throw UnstableTruncation("p-ordering valuations for p = " + std::to_string(p) + ", n = " + std::to_string(n) +
                           " did not stabilize up to a pool of " + std::to_string(kMaxPool));
}

mpz_class v_n(const IntegerSet& s, std::uint64_t p, std::uint64_t n) {
  const std::uint64_t e = stable_valuations(s, p, n).back();
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return out;
}

std::uint64_t prefix_difference_bound(const IntegerSet& s, std::uint64_t n) {
  const std::vector<std::int64_t> head = s.prefix(static_cast<std::size_t>(n) + 1);
  if (head.size() < n + 1) {
    throw TruncationTooSmall("set has fewer than " + std::to_string(n + 1) + " elements");
  }
  return static_cast<std::uint64_t>(head.back() - head.front());
}

BhargavaFactorial factorial_s(const IntegerSet& s, std::uint64_t n, std::uint64_t prime_bound) {
  const std::uint64_t difference_bound = prefix_difference_bound(s, n);
  BhargavaFactorial out;
  out.prime_bound = prime_bound != 0 ? prime_bound : std::max<std::uint64_t>(difference_bound, 1);
  out.value = 1;
  const auto table = primes_through(2 * out.prime_bound);
  for (std::uint64_t p : table->up_to(2 * out.prime_bound)) {
    mpz_class v = v_n(s, p, n);
    if (v == 1) continue;
    if (p > out.prime_bound) {
      throw UnstableTruncation("doubling the prime bound to " + std::to_string(2 * out.prime_bound) +
                               " changes n!_S (p = " + std::to_string(p) + ")");
    }
    out.value *= v;
    out.breakdown.emplace_back(p, std::move(v));
  }
  return out;
}

mpz_class difference_product(std::span<const std::int64_t> elements) {
  mpz_class out = 1;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      const std::int64_t d = elements[i] - elements[j];
      out *= mpz_class(static_cast<long>(d < 0 ? -d : d));
    }
  }
  return out;
}

}  // namespace legendre
