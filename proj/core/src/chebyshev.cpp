#include "legendre/chebyshev.hpp"

#include <cmath>
#include <vector>

#include "legendre/errors.hpp"
#include "legendre/prime_engine.hpp"

namespace legendre {

namespace {

void require_divergent(const FMap& f) {
  if (f.divergence() != Divergence::tends_to_infinity) {
    throw DivergentFactorial("f-Chebyshev functions need f to tend to infinity along the primes; got " + f.dsl());
  }
}

// Every prime with f(p) p^k <= x satisfies f(p) <= x / 2^k.
std::uint64_t scan_limit(const FMap& f, unsigned k, const mpq_class& x) {
  mpq_class reduced = x;
  mpq_div_2exp(reduced.get_mpq_t(), x.get_mpq_t(), k);
  return f.support_limit(reduced);
}

// Calls visit(index) for each prime index with f(p) p^k <= x; returns the
// number visited.
template <typename Visit>
std::size_t for_each_member(const FMap& f, unsigned k, const mpq_class& x, const PrimeTable& table, Visit&& visit) {
  const std::uint64_t limit = scan_limit(f, k, x);
  if (limit < 2) return 0;
  std::size_t hits = 0;
  const auto primes = table.up_to(limit);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (compare_scaled(f, primes[i], k, x) <= 0) {
      visit(i);
      ++hits;
    }
  }
  return hits;
}

std::uint64_t table_need(const FMap& f, const mpq_class& x) {
  const std::uint64_t need = std::max<std::uint64_t>(scan_limit(f, 0, x), 2);
  if (need > kMaxChebyshevSupport) {
    throw CapacityError("f-Chebyshev sum for f = " + f.dsl() + " needs primes up to " + std::to_string(need) +
                        ", above the capacity " + std::to_string(kMaxChebyshevSupport));
  }
  return need;
}

BoundedValue weighted_log_sum(const std::vector<std::int64_t>& counts, const PrimeLogs& logs, Precision prec) {
  IntervalSum positive(prec), negative(prec);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) positive.add_multiple(logs.log_at(i), static_cast<std::uint64_t>(counts[i]));
    if (counts[i] < 0) negative.add_multiple(logs.log_at(i), static_cast<std::uint64_t>(-counts[i]));
  }
  return positive.value() - negative.value();
}

}  // namespace

BoundedValue theta_g(const FMap& f, unsigned k, const mpq_class& x, Precision prec) {
  require_divergent(f);
  const auto logs = PrimeLogs::through(table_need(f, x), prec);
  IntervalSum sum(prec);
  for_each_member(f, k, x, logs->table(), [&](std::size_t i) { sum.add(logs->log_at(i)); });
  return sum.value();
}

BoundedValue theta_f(const FMap& f, const mpq_class& x, Precision prec) { return theta_g(f, 0, x, prec); }

int psi_k_max(const FMap& f, const mpq_class& x) {
  require_divergent(f);
  const auto table = primes_through(table_need(f, x));
  int k_max = -1;
  // f(p) p^(k+1) > f(p) p^k, so the first empty k ends the series.
  for (unsigned k = 0;; ++k) {
    if (for_each_member(f, k, x, *table, [](std::size_t) {}) == 0) break;
    k_max = static_cast<int>(k);
  }
  return k_max;
}

BoundedValue psi_f(const FMap& f, const mpq_class& x, Precision prec) {
  require_divergent(f);
  const auto logs = PrimeLogs::through(table_need(f, x), prec);
  IntervalSum sum(prec);
  for (unsigned k = 0;; ++k) {
    if (for_each_member(f, k, x, logs->table(), [&](std::size_t i) { sum.add(logs->log_at(i)); }) == 0) break;
  }
  return sum.value();
}

bool has_closed_form_inverse(const FMap& f) {
  switch (f.kind()) {
    case FKind::identity:
    case FKind::shifted_linear:
    case FKind::log_map:
    case FKind::quadratic_upper:
    case FKind::quadratic_lower:
      return true;
    default:
      return false;
  }
}

namespace {

mpz_class floor_of(const mpq_class& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

// Largest integer u with u <= c + sqrt(d), d >= 0, decided exactly:
// u <= c + sqrt(d) iff u - c <= 0 or (u - c)^2 <= d.
mpz_class floor_center_plus_root(const mpq_class& c, const mpq_class& d) {
  auto below = [&](const mpz_class& u) {
    const mpq_class t = mpq_class(u) - c;
    return t <= 0 || t * t <= d;
  };
  const double estimate = c.get_d() + std::sqrt(std::max(0.0, d.get_d()));
  mpz_class u(std::floor(estimate));
  while (!below(u)) --u;
  while (below(u + 1)) ++u;
  return u;
}

}  // namespace

std::uint64_t inverse_floor(const FMap& f, const mpq_class& x) {
  mpz_class u;
  const mpq_class M = f.m();
  const mpq_class alpha(static_cast<long>(f.a()));
  switch (f.kind()) {
    case FKind::identity:
      u = floor_of(x);
      break;
    case FKind::shifted_linear:
      u = floor_of(x * f.a() - f.b());
      break;
    case FKind::quadratic_upper:
      // x/2 + sqrt(x^2/4 + x M / alpha)
      u = floor_center_plus_root(x / 2, x * x / 4 + x * M / alpha);
      break;
    case FKind::quadratic_lower:
      // (x+1)/2 + sqrt((x+1)^2/4 + x M / alpha)
      u = floor_center_plus_root((x + 1) / 2, (x + 1) * (x + 1) / 4 + x * M / alpha);
      break;
    case FKind::log_map:
      u = x < 0 ? 0 : floor_exp(x);
      break;
    default:
      throw Unsupported("no closed-form inverse for " + f.dsl());
  }
  if (u < 0) return 0;
  if (!u.fits_ulong_p()) throw CapacityError("inverse exceeds 64 bits");
  return u.get_ui();
}

BoundedValue inverse_value(const FMap& f, const mpq_class& x, Precision prec) {
  const mpq_class alpha(static_cast<long>(f.a()));
  switch (f.kind()) {
    case FKind::identity:
      return BoundedValue::from_rational(x, prec);
    case FKind::shifted_linear:
      return BoundedValue::from_rational(x * f.a() - f.b(), prec);
    case FKind::quadratic_upper:
      return BoundedValue::from_rational(x / 2, prec) +
             BoundedValue::from_rational(x * x / 4 + x * f.m() / alpha, prec).sqrt();
    case FKind::quadratic_lower:
      return BoundedValue::from_rational((x + 1) / 2, prec) +
             BoundedValue::from_rational((x + 1) * (x + 1) / 4 + x * f.m() / alpha, prec).sqrt();
    case FKind::log_map: {
      BoundedValue out(prec);
      Real xr(prec);
      mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDD);
      mpfr_exp(out.lo().get(), xr.get(), MPFR_RNDD);
      mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDU);
      mpfr_exp(out.hi().get(), xr.get(), MPFR_RNDU);
      return out;
    }
    default:
      throw Unsupported("no closed-form inverse for " + f.dsl());
  }
}

InverseCheck inverse_change_of_variables(const FMap& f, const mpq_class& x, Precision prec) {
  if (!has_closed_form_inverse(f)) throw Unsupported("no closed-form inverse for " + f.dsl());
  InverseCheck out;
  out.inverse_floor = inverse_floor(f, x);
  out.theta_f_value = theta_f(f, x, prec);
  out.theta_of_inverse = theta(out.inverse_floor, prec);
  out.holds = out.theta_f_value.overlaps(out.theta_of_inverse);
  return out;
}

BoundedValue chebyshev_floor_residual(const LinearCertificate& cert, std::uint64_t n, Precision prec) {
  if (n == 0) throw DomainError("residual requires n >= 1");
  const FMap upper = FMap::quadratic_upper(cert.alpha, cert.M);
  const FMap lower = FMap::quadratic_lower(cert.alpha, cert.M);
  const mpz_class alpha_n = mpz_class(static_cast<unsigned long>(cert.alpha)) * static_cast<unsigned long>(n);

  // (alpha + M/2) n bounds the nonzero summands.
  const mpq_class m_bound = (mpq_class(static_cast<unsigned long>(cert.alpha)) + cert.M / 2) * static_cast<unsigned long>(n);
  const mpz_class m_max = floor_of(m_bound);

  const mpq_class x_max(alpha_n);
  const std::uint64_t need = std::max(table_need(upper, x_max), table_need(lower, x_max));
  const auto logs = PrimeLogs::through(need, prec);
  const PrimeTable& table = logs->table();

  // Integer multiplicity of each log p in the residual; one weighted sum at
  // the end keeps the enclosure tight.
  std::vector<std::int64_t> counts(table.count_up_to(need), 0);
  for (mpz_class m = 1; m <= m_max; ++m) {
    const mpq_class x(alpha_n, m);
    for (unsigned k = 0;; ++k) {
      if (for_each_member(upper, k, x, table, [&](std::size_t i) { ++counts[i]; }) == 0) break;
    }
    for_each_member(lower, 0, x, table, [&](std::size_t i) { --counts[i]; });
  }
  BoundedValue out = weighted_log_sum(counts, *logs, prec);
  out.div(mpz_class(static_cast<unsigned long>(n)));
  return out;
}

}  // namespace legendre
