#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace legendre {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::uint64_t cases = 0;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string text() const;
  nlohmann::json to_json() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240601;

// Suites: legendre, bhargava, chebyshev, constants, all. Randomized cases are
// drawn from a generator seeded with `seed` only. Throws ParseError for an
// unknown suite.
VerifyReport run_verification(std::string_view suite, std::uint64_t seed = kDefaultSeed, unsigned threads = 1);

std::vector<std::string> verification_suites();

}  // namespace legendre
