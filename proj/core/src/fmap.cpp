#include "legendre/fmap.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "legendre/errors.hpp"
#include "legendre/prime_engine.hpp"

namespace legendre {

FMap::FMap(FKind kind, std::int64_t a, std::int64_t b, mpq_class m)
    : kind_(kind), a_(a), b_(b), m_(std::move(m)) {
  m_.canonicalize();
}

FMap FMap::identity() { return FMap(FKind::identity, 1, 0, 0); }

FMap FMap::shifted_linear(std::int64_t a, std::int64_t b) {
  if (a < 1) throw DomainError("shifted_linear requires a >= 1");
  if (a == 1 && b == 0) return identity();
  return FMap(FKind::shifted_linear, a, b, 0);
}

FMap FMap::half_ceiling() { return FMap(FKind::half_ceiling, 1, 0, 0); }
FMap FMap::log_map() { return FMap(FKind::log_map, 1, 0, 0); }
FMap FMap::sine_abs() { return FMap(FKind::sine_abs, 1, 0, 0); }

FMap FMap::quadratic_upper(std::uint64_t alpha, const mpq_class& M) {
  if (alpha < 1 || M < 0) throw DomainError("quadratic_upper requires alpha >= 1 and M >= 0");
  return FMap(FKind::quadratic_upper, static_cast<std::int64_t>(alpha), 0, M);
}

FMap FMap::quadratic_lower(std::uint64_t alpha, const mpq_class& M) {
  if (alpha < 1 || M < 0) throw DomainError("quadratic_lower requires alpha >= 1 and M >= 0");
  return FMap(FKind::quadratic_lower, static_cast<std::int64_t>(alpha), 0, M);
}

namespace {

std::string normalize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::int64_t to_int(const std::string& s) {
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    throw ParseError("integer out of range: " + s);
  }
}

mpq_class to_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
  q.canonicalize();
  return q;
}

std::uint64_t coefficient(const std::ssub_match& m) {
  if (!m.matched || m.length() == 0) return 1;
  const std::int64_t v = to_int(m.str());
  if (v < 1) throw ParseError("coefficient must be a positive integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

FMap FMap::parse(std::string_view text) {
  const std::string s = normalize(text);
  static const std::regex kShift(R"(^x([+-]\d+)$)");
  static const std::regex kScaled(R"(^\(x([+-]\d+)?\)/(\d+)$)");
  static const std::regex kScaledBare(R"(^x/(\d+)$)");
  static const std::regex kUpper(R"(^(\d*)x\^2/\((\d*)x\+(\d+(?:/\d+)?)\)$)");
  static const std::regex kLower(R"(^(\d*)x\(x-1\)/\((\d*)x\+(\d+(?:/\d+)?)\)$)");
  std::smatch m;

  if (s == "x") return identity();
  if (s == "ceil((x-1)/2)") return half_ceiling();
  if (s == "log(x)" || s == "ln(x)") return log_map();
  if (s == "abs(sin(x))" || s == "|sin(x)|") return sine_abs();
  if (std::regex_match(s, m, kShift)) return shifted_linear(1, to_int(m[1].str()));
  if (std::regex_match(s, m, kScaled)) {
    const std::int64_t b = m[1].matched ? to_int(m[1].str()) : 0;
    const std::int64_t a = to_int(m[2].str());
    if (a < 1) throw ParseError("divisor must be a positive integer: " + std::string(text));
    return shifted_linear(a, b);
  }
  if (std::regex_match(s, m, kScaledBare)) {
    const std::int64_t a = to_int(m[1].str());
    if (a < 1) throw ParseError("divisor must be a positive integer: " + std::string(text));
    return shifted_linear(a, 0);
  }
  if (std::regex_match(s, m, kUpper) || std::regex_match(s, m, kLower)) {
    const bool upper = std::regex_match(s, kUpper);
    const std::uint64_t a1 = coefficient(m[1]);
    const std::uint64_t a2 = coefficient(m[2]);
    if (a1 != a2) throw ParseError("leading coefficients must agree: " + std::string(text));
    const mpq_class M = to_rational(m[3].str());
    return upper ? quadratic_upper(a1, M) : quadratic_lower(a1, M);
  }
  throw ParseError("unrecognised map: '" + std::string(text) + "'");
}

Divergence FMap::divergence() const {
  return kind_ == FKind::sine_abs ? Divergence::not_divergent : Divergence::tends_to_infinity;
}

std::string FMap::dsl() const {
  const std::string alpha = std::to_string(a_);
  switch (kind_) {
    case FKind::identity:
      return "x";
    case FKind::shifted_linear: {
      std::string shifted = "x";
      if (b_ > 0) shifted += "+" + std::to_string(b_);
      if (b_ < 0) shifted += std::to_string(b_);
      if (a_ == 1) return shifted;
      if (b_ == 0) return "x/" + alpha;
      return "(" + shifted + ")/" + alpha;
    }
    case FKind::half_ceiling:
      return "ceil((x-1)/2)";
    case FKind::log_map:
      return "log(x)";
    case FKind::sine_abs:
      return "abs(sin(x))";
    case FKind::quadratic_upper:
      return alpha + "*x^2/(" + alpha + "*x+" + m_.get_str() + ")";
    case FKind::quadratic_lower:
      return alpha + "*x*(x-1)/(" + alpha + "*x+" + m_.get_str() + ")";
  }
  return "?";
}

bool FMap::is_exact() const { return kind_ != FKind::log_map && kind_ != FKind::sine_abs; }

mpq_class FMap::exact_value(std::uint64_t p) const {
  const mpz_class pz(static_cast<unsigned long>(p));
  mpq_class out;
  switch (kind_) {
    case FKind::identity:
      out = pz;
      break;
    case FKind::shifted_linear:
      out = mpq_class(pz + static_cast<long>(b_), mpz_class(static_cast<long>(a_)));
      break;
    case FKind::half_ceiling:
      // ceil((p - 1) / 2) == floor(p / 2)
      out = mpz_class(pz / 2);
      break;
    case FKind::quadratic_upper: {
      const mpq_class alpha(static_cast<long>(a_));
      out = alpha * pz * pz / (alpha * pz + m_);
      break;
    }
    case FKind::quadratic_lower: {
      const mpq_class alpha(static_cast<long>(a_));
      out = alpha * pz * (pz - 1) / (alpha * pz + m_);
      break;
    }
    case FKind::log_map:
    case FKind::sine_abs:
      throw Unsupported("f(p) is not rational for " + dsl());
  }
  out.canonicalize();
  return out;
}

BoundedValue FMap::enclose(std::uint64_t p, Precision prec) const {
  if (is_exact()) return BoundedValue::from_rational(exact_value(p), prec);
  if (kind_ == FKind::log_map) return BoundedValue::log_of(p, prec);
  // |sin p|: correctly rounded sin in both directions, then abs.
  BoundedValue out(prec);
  Real arg(64);
  mpfr_set_ui(arg.get(), static_cast<unsigned long>(p), MPFR_RNDN);  // exact: p < 2^64
  mpfr_sin(out.lo().get(), arg.get(), MPFR_RNDD);
  mpfr_sin(out.hi().get(), arg.get(), MPFR_RNDU);
  return out.abs();
}

std::uint64_t FMap::support_limit(const mpq_class& x) const {
  if (divergence() != Divergence::tends_to_infinity) {
    throw DivergentFactorial(dsl() + " does not tend to infinity along the primes");
  }
  if (x < 0) return 1;
  mpz_class limit;
  switch (kind_) {
    case FKind::identity:
      mpz_fdiv_q(limit.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      break;
    case FKind::shifted_linear: {
      const mpq_class bound = x * a_ - b_;
      mpz_fdiv_q(limit.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
      break;
    }
    case FKind::half_ceiling: {
      mpz_class fx;
      mpz_fdiv_q(fx.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      limit = 2 * fx + 1;
      break;
    }
    case FKind::quadratic_upper:
    case FKind::quadratic_lower: {
      const mpq_class bound = x + m_ / mpq_class(static_cast<long>(a_));
      mpz_fdiv_q(limit.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
      limit += 1;
      break;
    }
    case FKind::log_map: {
      if (x > 64) throw CapacityError("log(x) support for x > 64 exceeds 64-bit primes");
      Real ex(192), xr(192);
      mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDU);
      mpfr_exp(ex.get(), xr.get(), MPFR_RNDU);
      mpfr_get_z(limit.get_mpz_t(), ex.get(), MPFR_RNDD);
      break;
    }
    case FKind::sine_abs:
      break;
  }
  if (limit < 1) return 1;
  if (limit > kMaxSieveLimit) {
    throw CapacityError("support of " + dsl() + " up to " + x.get_str() + " exceeds sieve capacity");
  }
  return limit.get_ui();
}

FValue eval(const FMap& f, std::uint64_t p, Precision precision) {
  if (precision < 32) throw DomainError("eval: precision must be at least 32 bits");
  if (f.is_exact()) {
    mpq_class v = f.exact_value(p);
    if (v <= 0) throw DomainError("f(" + std::to_string(p) + ") <= 0 for " + f.dsl());
    return v;
  }
  BoundedValue v = f.enclose(p, precision);
  if (mpfr_sgn(v.hi().get()) <= 0) throw DomainError("f(" + std::to_string(p) + ") <= 0 for " + f.dsl());
  return v;
}

namespace {

mpz_class power(std::uint64_t p, unsigned k) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), k);
  return out;
}

}  // namespace

std::uint64_t floor_quotient(std::uint64_t n, const FMap& f, std::uint64_t p, unsigned k, Precision ceiling) {
  const mpz_class nz(static_cast<unsigned long>(n));
  const mpz_class pk = power(p, k);
  if (f.is_exact()) {
    const mpq_class fp = std::get<mpq_class>(eval(f, p));
    mpz_class num = nz * fp.get_den();
    mpz_class den = fp.get_num() * pk;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (!q.fits_ulong_p()) throw CapacityError("floor quotient exceeds 64 bits");
    return q.get_ui();
  }
  for (Precision prec = kFloorStartPrecision;; prec *= 2) {
    prec = std::min(prec, ceiling);
    BoundedValue denom = std::get<BoundedValue>(eval(f, p, prec));
    denom.mul(pk);
    BoundedValue q = BoundedValue::from_integer(nz, prec) / denom;
    mpz_class lo = q.floor_lo(), hi = q.floor_hi();
    if (lo == hi) {
      if (!lo.fits_ulong_p()) throw CapacityError("floor quotient exceeds 64 bits");
      return lo.get_ui();
    }
    if (prec >= ceiling) {
      throw AmbiguousFloor("floor(" + std::to_string(n) + " / (f(" + std::to_string(p) + ") * " +
                               std::to_string(p) + "^" + std::to_string(k) + ")) undetermined at " +
                               std::to_string(ceiling) + " bits for " + f.dsl(),
                           lo, hi);
    }
  }
}

std::uint64_t floor_exp(const mpq_class& x) {
  if (x < 0) throw DomainError("floor_exp: negative argument");
  if (x > 44) throw CapacityError("e^x beyond 64-bit range");
  if (x == 0) return 1;
  for (Precision prec = kFloorStartPrecision;; prec *= 2) {
    Real xr(prec), lo(prec), hi(prec);
    mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_exp(lo.get(), xr.get(), MPFR_RNDD);
    mpfr_set_q(xr.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(hi.get(), xr.get(), MPFR_RNDU);
    mpz_class flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo.get(), MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi.get(), MPFR_RNDD);
    if (flo == fhi) return flo.get_ui();
    if (prec >= kFloorPrecisionCeiling) throw AmbiguousComparison("floor(e^x) undetermined");
  }
}

int compare_scaled(const FMap& f, std::uint64_t p, unsigned k, const mpq_class& x, Precision ceiling) {
  const mpz_class pk = power(p, k);
  if (f.is_exact()) {
    const mpq_class lhs = f.exact_value(p) * pk;
    return cmp(lhs, x) < 0 ? -1 : (cmp(lhs, x) > 0 ? 1 : 0);
  }
  for (Precision prec = kFloorStartPrecision;; prec *= 2) {
    prec = std::min(prec, ceiling);
    BoundedValue v = f.enclose(p, prec);
    v.mul(pk);
    if (mpfr_cmp_q(v.hi().get(), x.get_mpq_t()) < 0) return -1;
    if (mpfr_cmp_q(v.lo().get(), x.get_mpq_t()) > 0) return 1;
    if (prec >= ceiling) {
      throw AmbiguousComparison("f(" + std::to_string(p) + ")*" + std::to_string(p) + "^" + std::to_string(k) +
                                " vs " + x.get_str() + " undetermined for " + f.dsl());
    }
  }
}

namespace {

std::optional<std::string> closed_form(const FMap& f, const LinearCertificate& cert) {
  switch (f.kind()) {
    case FKind::identity:
      if (cert.alpha == 1) return "1/p - 1/p = 0 <= M/p^2";
      break;
    case FKind::shifted_linear:
      if (f.a() == 1 && f.b() == -1 && cert.alpha == 1 && cert.M >= 2) {
        return "1/(p-1) - 1/p = 1/(p(p-1)) <= 2/p^2 since p/(p-1) <= 2";
      }
      break;
    case FKind::half_ceiling:
      if (cert.alpha == 2 && cert.M >= 4) {
        return "p = 2: 1/1 - 2/2 = 0; odd p: 2/(p-1) - 2/p = 2/(p(p-1)) <= 4/p^2";
      }
      break;
    case FKind::quadratic_upper:
      if (f.a() == 1 && cert.alpha == 1 && cert.M >= f.m()) return "1/f(p) - 1/p = M/p^2 exactly";
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace

CertificateReport verify_certificate(const FMap& f, const LinearCertificate& cert, std::uint64_t bound) {
  if (bound < 2) throw DomainError("verify_certificate: bound must be >= 2");
  if (cert.alpha < 1 || cert.M < 0) throw DomainError("certificate requires alpha >= 1 and M >= 0");
  CertificateReport report;
  report.bound = bound;
  report.equality_throughout = true;
  const auto table = primes_through(bound);
  const mpq_class alpha(static_cast<unsigned long>(cert.alpha));

  auto fail = [&](std::uint64_t p, CertificateSide side) {
    report.passed = false;
    report.witness = p;
    report.violated = side;
    report.equality_throughout = false;
    return report;
  };

  for (std::uint64_t p : table->up_to(bound)) {
    ++report.primes_checked;
    const mpz_class pz(static_cast<unsigned long>(p));
    const mpq_class upper_bound = cert.M / mpq_class(pz * pz);
    if (f.is_exact()) {
      const mpq_class fp = std::get<mpq_class>(eval(f, p));
      mpq_class d = 1 / fp - alpha / pz;
      if (d < 0) return fail(p, CertificateSide::lower);
      if (d > upper_bound) return fail(p, CertificateSide::upper);
      if (d != 0) report.equality_throughout = false;
      continue;
    }
    report.equality_throughout = false;
    for (Precision prec = kFloorStartPrecision;; prec *= 2) {
      BoundedValue d = BoundedValue::from_integer(1, prec) / f.enclose(p, prec);
      d -= BoundedValue::from_rational(alpha / pz, prec);
      if (mpfr_sgn(d.hi().get()) < 0) return fail(p, CertificateSide::lower);
      if (mpfr_cmp_q(d.lo().get(), upper_bound.get_mpq_t()) > 0) return fail(p, CertificateSide::upper);
      if (mpfr_sgn(d.lo().get()) >= 0 && mpfr_cmp_q(d.hi().get(), upper_bound.get_mpq_t()) <= 0) break;
      if (prec >= kFloorPrecisionCeiling) {
        throw AmbiguousComparison("certificate check undetermined at p = " + std::to_string(p));
      }
    }
  }
  report.passed = true;
  report.justification = closed_form(f, cert);
  return report;
}

}  // namespace legendre
