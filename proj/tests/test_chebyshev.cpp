#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "legendre/chebyshev.hpp"
#include "legendre/errors.hpp"
#include "legendre/prime_engine.hpp"

using namespace legendre;

namespace {

bool small_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// The floor residual evaluated straight from its definition with integer
// comparisons and long double logs; m runs well past the point where every
// summand vanishes.
long double residual_oracle(std::int64_t alpha, std::int64_t M, std::int64_t n) {
  using i128 = __int128;
  std::vector<std::int64_t> primes;
  const std::int64_t top = 4 * alpha * n + 8;
  for (std::int64_t p = 2; p <= top; ++p) {
    if (small_prime(static_cast<std::uint64_t>(p))) primes.push_back(p);
  }
  long double total = 0;
  for (std::int64_t m = 1; m <= 4 * (alpha + M) * n + 4; ++m) {
    // x = alpha n / m; compare by cross-multiplying with alpha p + M > 0.
    const i128 num = static_cast<i128>(alpha) * n;
    for (std::int64_t p : primes) {
      const i128 denom = static_cast<i128>(alpha) * p + M;
      i128 pk = 1;
      for (int k = 0;; ++k) {
        // alpha p^2 p^k / (alpha p + M) <= alpha n / m
        if (static_cast<i128>(alpha) * p * p * pk * m > num * denom) break;
        total += std::log(static_cast<long double>(p));
        pk *= p;
      }
      if (static_cast<i128>(alpha) * p * (p - 1) * m <= num * denom) total -= std::log(static_cast<long double>(p));
    }
  }
  return total / n;
}

long double theta_oracle(std::uint64_t x) {
  long double s = 0;
  for (std::uint64_t p = 2; p <= x; ++p) {
    if (small_prime(p)) s += std::log(static_cast<long double>(p));
  }
  return s;
}

}  // namespace

TEST(ThetaF, SmallValues) {
  // Primes with p - 1 <= 10: 2, 3, 5, 7, 11.
  EXPECT_TRUE(theta_f(FMap::shifted_linear(1, -1), mpq_class(10)).overlaps(BoundedValue::log_of(std::uint64_t{2310})));
  EXPECT_TRUE(theta_f(FMap::identity(), mpq_class(1)).is_point());
  EXPECT_TRUE(theta_f(FMap::quadratic_upper(1, 2), mpq_class(5)).overlaps(BoundedValue::log_of(std::uint64_t{30})));
  EXPECT_THROW(theta_f(FMap::sine_abs(), mpq_class(3)), DivergentFactorial);
  EXPECT_THROW(theta_f(FMap::log_map(), mpq_class(17)), CapacityError);
}

TEST(PsiF, IdentityIsClassicalPsi) {
  EXPECT_TRUE(psi_f(FMap::identity(), mpq_class(4)).overlaps(BoundedValue::log_of(std::uint64_t{12})));
  EXPECT_EQ(psi_k_max(FMap::identity(), mpq_class(8)), 2);
  EXPECT_EQ(psi_k_max(FMap::identity(), mpq_class(1)), -1);
  // Classical psi(x) = sum over prime powers p^j <= x of log p.
  for (std::uint64_t x : {10, 97, 1000}) {
    long double s = 0;
    for (std::uint64_t p = 2; p <= x; ++p) {
      if (!small_prime(p)) continue;
      for (std::uint64_t q = p; q <= x; q *= p) s += std::log(static_cast<long double>(p));
    }
    EXPECT_NEAR(psi_f(FMap::identity(), mpq_class(static_cast<unsigned long>(x))).mid_double(), static_cast<double>(s), 1e-9);
    EXPECT_NEAR(theta_f(FMap::identity(), mpq_class(static_cast<unsigned long>(x))).mid_double(),
                static_cast<double>(theta_oracle(x)), 1e-9);
  }
}

TEST(PsiF, MonotoneAndDominatesTheta) {
  for (const FMap& f : {FMap::identity(), FMap::shifted_linear(1, -1), FMap::half_ceiling(), FMap::log_map()}) {
    BoundedValue previous = BoundedValue::from_integer(0);
    for (long x = 1; x <= (f.kind() == FKind::log_map ? 13 : 60); x += 3) {
      const BoundedValue t = theta_f(f, mpq_class(x)), p = psi_f(f, mpq_class(x));
      EXPECT_TRUE(t.certainly_nonnegative());
      EXPECT_LE(t.lo_double(), p.hi_double());
      EXPECT_LE(previous.lo_double(), p.hi_double()) << f.dsl() << " x=" << x;
      previous = p;
    }
  }
}

TEST(Inverse, FloorValues) {
  EXPECT_EQ(inverse_floor(FMap::identity(), mpq_class(7, 2)), 3u);
  EXPECT_EQ(inverse_floor(FMap::shifted_linear(1, -1), mpq_class(10)), 11u);
  EXPECT_EQ(inverse_floor(FMap::shifted_linear(2, 3), mpq_class(5)), 7u);
  EXPECT_EQ(inverse_floor(FMap::quadratic_upper(1, 2), mpq_class(5)), 6u);
  EXPECT_EQ(inverse_floor(FMap::log_map(), mpq_class(2)), 7u);  // e^2 = 7.389
  EXPECT_NEAR(inverse_value(FMap::log_map(), mpq_class(1)).mid_double(), std::exp(1.0), 1e-15);
  EXPECT_THROW(inverse_floor(FMap::half_ceiling(), mpq_class(3)), Unsupported);
  EXPECT_FALSE(has_closed_form_inverse(FMap::sine_abs()));
}

TEST(Inverse, QuadraticFloorsAgreeWithDirectSearch) {
  for (const FMap& f : {FMap::quadratic_upper(1, 2), FMap::quadratic_upper(2, 4), FMap::quadratic_lower(1, 2),
                        FMap::quadratic_lower(2, 4)}) {
    for (long num = 1; num <= 400; num += 7) {
      const mpq_class x(num, 3);
      // Largest u >= 1 with f(u) <= x, scanning integers with exact values.
      std::uint64_t u = 0;
      for (std::uint64_t t = 1; t < 2000; ++t) {
        const mpq_class a(static_cast<unsigned long>(f.a()));
        const mpq_class tv(static_cast<unsigned long>(t));
        const mpq_class top = f.kind() == FKind::quadratic_upper ? mpq_class(a * tv * tv) : mpq_class(a * tv * (tv - 1));
        const mpq_class value = top / (a * tv + f.m());
        if (value <= x) u = t;
      }
      EXPECT_EQ(inverse_floor(f, x), u) << f.dsl() << " x=" << x.get_str();
    }
  }
}

TEST(Inverse, ChangeOfVariables) {
  std::mt19937_64 rng(11);
  for (const FMap& f : {FMap::identity(), FMap::shifted_linear(1, -1), FMap::shifted_linear(3, 1),
                        FMap::quadratic_upper(2, 4), FMap::log_map()}) {
    for (int i = 0; i < 40; ++i) {
      const long bound = f.kind() == FKind::log_map ? 12 : 3000;
      const mpq_class x(static_cast<long>(1 + rng() % (bound * 16)), 16);
      const InverseCheck c = inverse_change_of_variables(f, x);
      EXPECT_TRUE(c.holds) << f.dsl() << " x=" << x.get_str();
    }
  }
}

TEST(FloorResidual, FrozenValues) {
  struct Case {
    LinearCertificate cert;
    std::uint64_t n;
    double value;
  };
  const std::vector<Case> cases = {
      {{1, 2}, 10, -0.713886699995},  {{1, 2}, 100, -0.157392977899},  {{1, 2}, 1000, -0.050829787666},
      {{2, 4}, 10, -0.604025471128},  {{2, 4}, 100, -0.180746727057},  {{2, 4}, 1000, -0.059922338184},
      {{1, 0}, 10, -0.488280192259},  {{1, 0}, 100, -0.182972825226},  {{1, 0}, 1000, -0.061920862983}};
  for (const Case& c : cases) {
    const BoundedValue r = chebyshev_floor_residual(c.cert, c.n);
    EXPECT_NEAR(r.mid_double(), c.value, 1e-9) << c.cert.alpha << "," << c.cert.M.get_str() << " n=" << c.n;
    EXPECT_LT(r.width_double(), 1e-20);
  }
  EXPECT_THROW(chebyshev_floor_residual({1, 2}, 0), DomainError);
}

TEST(FloorResidual, MatchesDefinition) {
  for (auto [alpha, M] : std::vector<std::pair<int, int>>{{1, 2}, {2, 4}, {1, 0}, {3, 1}}) {
    for (std::int64_t n : {1, 7, 10, 64, 150}) {
      const BoundedValue r = chebyshev_floor_residual({static_cast<std::uint64_t>(alpha), mpq_class(M)}, n);
      EXPECT_NEAR(r.mid_double(), static_cast<double>(residual_oracle(alpha, M, n)), 1e-12)
          << alpha << "," << M << " n=" << n;
    }
  }
}

TEST(FloorResidual, ShrinksWithN) {
  for (const LinearCertificate& cert : {LinearCertificate{1, 2}, LinearCertificate{2, 4}}) {
    double previous = INFINITY;
    for (std::uint64_t n : {10, 100, 1000}) {
      const BoundedValue r = chebyshev_floor_residual(cert, n).abs();
      EXPECT_LT(r.hi_double(), previous);
      previous = r.lo_double();
    }
  }
}
