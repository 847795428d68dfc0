#include <algorithm>

#include <gtest/gtest.h>

#include "legendre/errors.hpp"
#include "legendre/verification.hpp"

using namespace legendre;

TEST(Verification, SuitesPass) {
  for (const char* suite : {"legendre", "bhargava", "chebyshev"}) {
    const VerifyReport report = run_verification(suite, 42);
    EXPECT_TRUE(report.passed()) << report.text();
    EXPECT_FALSE(report.checks.empty());
    for (const CheckResult& c : report.checks) EXPECT_EQ(c.suite, suite);
  }
}

TEST(Verification, ConstantsSuitePasses) {
  const VerifyReport report = run_verification("constants");
  EXPECT_TRUE(report.passed()) << report.text();
}

TEST(Verification, SeededAndDeterministic) {
  const VerifyReport a = run_verification("bhargava", 7), b = run_verification("bhargava", 7);
  EXPECT_EQ(a.text(), b.text());
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.text().rfind("verify bhargava seed=7", 0), 0u);
  EXPECT_EQ(run_verification("legendre", 1, 1).text(), run_verification("legendre", 1, 4).text());
}

TEST(Verification, UnknownSuite) {
  EXPECT_THROW(run_verification("nope"), ParseError);
  const auto suites = verification_suites();
  EXPECT_NE(std::find(suites.begin(), suites.end(), "all"), suites.end());
}
