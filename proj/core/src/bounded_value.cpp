#include "legendre/bounded_value.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "legendre/errors.hpp"

namespace legendre {

Real::Real(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::fixed(int decimals, mpfr_rnd_t rnd) const {
  char* buffer = nullptr;
  const int length = mpfr_asprintf(&buffer, "%.*R*f", decimals, rnd, value_);
  if (length < 0 || buffer == nullptr) return "nan";
  std::string out(buffer, static_cast<std::size_t>(length));
  mpfr_free_str(buffer);
  return out;
}

namespace {

void set_log_enclosure(Real& lo, Real& hi, mpfr_srcptr exactly_rounded_down, int ternary) {
  mpfr_set(lo.get(), exactly_rounded_down, MPFR_RNDD);
  mpfr_set(hi.get(), exactly_rounded_down, MPFR_RNDU);
  // ternary == 0 means log was exact (only log 1 = 0); otherwise the true
  // value lies strictly between the rounded-down result and its successor.
  if (ternary != 0) mpfr_nextabove(hi.get());
}

}  // namespace

BoundedValue::BoundedValue(Precision prec) : lo_(prec), hi_(prec) {}

BoundedValue BoundedValue::from_integer(long value, Precision prec) {
  BoundedValue out(prec);
  mpfr_set_si(out.lo_.get(), value, MPFR_RNDD);
  mpfr_set_si(out.hi_.get(), value, MPFR_RNDU);
  return out;
}

BoundedValue BoundedValue::from_integer(const mpz_class& value, Precision prec) {
  BoundedValue out(prec);
  mpfr_set_z(out.lo_.get(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_.get(), value.get_mpz_t(), MPFR_RNDU);
  return out;
}

BoundedValue BoundedValue::from_rational(const mpq_class& value, Precision prec) {
  BoundedValue out(prec);
  mpfr_set_q(out.lo_.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_.get(), value.get_mpq_t(), MPFR_RNDU);
  return out;
}

BoundedValue BoundedValue::from_bounds(const mpq_class& lo, const mpq_class& hi, Precision prec) {
  if (lo > hi) throw DomainError("from_bounds: lo > hi");
  BoundedValue out(prec);
  mpfr_set_q(out.lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
  return out;
}

BoundedValue BoundedValue::from_decimal(const std::string& text, Precision prec) {
  BoundedValue out(prec);
  if (mpfr_set_str(out.lo_.get(), text.c_str(), 10, MPFR_RNDD) != 0 ||
      mpfr_set_str(out.hi_.get(), text.c_str(), 10, MPFR_RNDU) != 0) {
    throw ParseError("not a decimal number: " + text);
  }
  return out;
}

BoundedValue BoundedValue::hull(const BoundedValue& a, const BoundedValue& b) {
  BoundedValue out(std::max(a.precision(), b.precision()));
  mpfr_min(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_max(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return out;
}

BoundedValue BoundedValue::log_of(std::uint64_t value, Precision prec) {
  if (value == 0) throw DomainError("log of zero");
  BoundedValue out(prec);
  Real down(prec);
  const int ternary = mpfr_log_ui(down.get(), value, MPFR_RNDD);
  set_log_enclosure(out.lo_, out.hi_, down.get(), ternary);
  return out;
}

BoundedValue BoundedValue::log_of(const mpz_class& value, Precision prec) {
  if (value <= 0) throw DomainError("log of non-positive integer");
  if (value.fits_ulong_p()) return log_of(static_cast<std::uint64_t>(value.get_ui()), prec);
  // Large arguments: convert with directed rounding, then log each side.
  BoundedValue out(prec);
  Real tmp(prec + 64);
  mpfr_set_z(tmp.get(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_log(out.lo_.get(), tmp.get(), MPFR_RNDD);
  mpfr_set_z(tmp.get(), value.get_mpz_t(), MPFR_RNDU);
  mpfr_log(out.hi_.get(), tmp.get(), MPFR_RNDU);
  return out;
}

double BoundedValue::mid_double() const {
  Real mid(precision() + 1);
  mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return mid.to_double();
}

Real BoundedValue::width() const {
  Real w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

double BoundedValue::width_double() const { return width().to_double(MPFR_RNDU); }

bool BoundedValue::contains(double x) const {
  return mpfr_cmp_d(lo_.get(), x) <= 0 && mpfr_cmp_d(hi_.get(), x) >= 0;
}

bool BoundedValue::contains(const mpq_class& x) const {
  return mpfr_cmp_q(lo_.get(), x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), x.get_mpq_t()) >= 0;
}

bool BoundedValue::contains(const BoundedValue& inner) const {
  return mpfr_lessequal_p(lo_.get(), inner.lo_.get()) &&
         mpfr_lessequal_p(inner.hi_.get(), hi_.get());
}

bool BoundedValue::overlaps(const BoundedValue& other) const {
  return mpfr_lessequal_p(lo_.get(), other.hi_.get()) &&
         mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

bool BoundedValue::certainly_less(const BoundedValue& other) const {
  return mpfr_less_p(hi_.get(), other.lo_.get()) != 0;
}

mpz_class BoundedValue::floor_lo() const {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), lo_.get(), MPFR_RNDD);
  return out;
}

mpz_class BoundedValue::floor_hi() const {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), hi_.get(), MPFR_RNDD);
  return out;
}

BoundedValue& BoundedValue::operator+=(const BoundedValue& rhs) {
  mpfr_add(lo_.get(), lo_.get(), rhs.lo_.get(), MPFR_RNDD);
  mpfr_add(hi_.get(), hi_.get(), rhs.hi_.get(), MPFR_RNDU);
  return *this;
}

BoundedValue& BoundedValue::operator-=(const BoundedValue& rhs) {
  // [a,b] - [c,d] = [a-d, b-c]; rhs may alias *this.
  Real new_lo(precision());
  mpfr_sub(new_lo.get(), lo_.get(), rhs.hi_.get(), MPFR_RNDD);
  mpfr_sub(hi_.get(), hi_.get(), rhs.lo_.get(), MPFR_RNDU);
  lo_ = std::move(new_lo);
  return *this;
}

BoundedValue& BoundedValue::operator*=(const BoundedValue& rhs) {
  const Precision prec = precision();
  Real best_lo(prec), best_hi(prec), tmp(prec);
  bool first = true;
  for (const Real* a : {&lo_, &hi_}) {
    for (const Real* b : {&rhs.lo_, &rhs.hi_}) {
      mpfr_mul(tmp.get(), a->get(), b->get(), MPFR_RNDD);
      if (first || mpfr_less_p(tmp.get(), best_lo.get())) mpfr_set(best_lo.get(), tmp.get(), MPFR_RNDD);
      mpfr_mul(tmp.get(), a->get(), b->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(tmp.get(), best_hi.get())) mpfr_set(best_hi.get(), tmp.get(), MPFR_RNDU);
      first = false;
    }
  }
  lo_ = std::move(best_lo);
  hi_ = std::move(best_hi);
  return *this;
}

BoundedValue& BoundedValue::operator/=(const BoundedValue& rhs) {
  if (mpfr_sgn(rhs.lo_.get()) <= 0 && mpfr_sgn(rhs.hi_.get()) >= 0) {
    throw DomainError("interval division by an enclosure containing zero");
  }
  const Precision prec = precision();
  Real best_lo(prec), best_hi(prec), tmp(prec);
  bool first = true;
  for (const Real* a : {&lo_, &hi_}) {
    for (const Real* b : {&rhs.lo_, &rhs.hi_}) {
      mpfr_div(tmp.get(), a->get(), b->get(), MPFR_RNDD);
      if (first || mpfr_less_p(tmp.get(), best_lo.get())) mpfr_set(best_lo.get(), tmp.get(), MPFR_RNDD);
      mpfr_div(tmp.get(), a->get(), b->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(tmp.get(), best_hi.get())) mpfr_set(best_hi.get(), tmp.get(), MPFR_RNDU);
      first = false;
    }
  }
  lo_ = std::move(best_lo);
  hi_ = std::move(best_hi);
  return *this;
}

BoundedValue& BoundedValue::mul(const mpz_class& k) {
  if (k < 0) {
    Real new_lo(precision());
    mpfr_mul_z(new_lo.get(), hi_.get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(hi_.get(), lo_.get(), k.get_mpz_t(), MPFR_RNDU);
    lo_ = std::move(new_lo);
  } else {
    mpfr_mul_z(lo_.get(), lo_.get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(hi_.get(), hi_.get(), k.get_mpz_t(), MPFR_RNDU);
  }
  return *this;
}

BoundedValue& BoundedValue::mul(const mpq_class& q) {
  if (q < 0) {
    Real new_lo(precision());
    mpfr_mul_q(new_lo.get(), hi_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi_.get(), lo_.get(), q.get_mpq_t(), MPFR_RNDU);
    lo_ = std::move(new_lo);
  } else {
    mpfr_mul_q(lo_.get(), lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi_.get(), hi_.get(), q.get_mpq_t(), MPFR_RNDU);
  }
  return *this;
}

BoundedValue& BoundedValue::div(const mpz_class& k) {
  if (k == 0) throw DomainError("division by zero");
  if (k < 0) {
    Real new_lo(precision());
    mpfr_div_z(new_lo.get(), hi_.get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_div_z(hi_.get(), lo_.get(), k.get_mpz_t(), MPFR_RNDU);
    lo_ = std::move(new_lo);
  } else {
    mpfr_div_z(lo_.get(), lo_.get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_div_z(hi_.get(), hi_.get(), k.get_mpz_t(), MPFR_RNDU);
  }
  return *this;
}

BoundedValue BoundedValue::abs() const {
  BoundedValue out(*this);
  if (mpfr_sgn(lo_.get()) >= 0) return out;
  if (mpfr_sgn(hi_.get()) <= 0) {
    mpfr_neg(out.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(out.hi_.get(), lo_.get(), MPFR_RNDU);
    return out;
  }
  mpfr_set_zero(out.lo_.get(), 1);
  mpfr_neg(out.hi_.get(), lo_.get(), MPFR_RNDU);
  mpfr_max(out.hi_.get(), out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

BoundedValue BoundedValue::sqrt() const {
  if (mpfr_sgn(hi_.get()) < 0) throw DomainError("sqrt of a negative enclosure");
  BoundedValue out(precision());
  if (mpfr_sgn(lo_.get()) <= 0) {
    mpfr_set_zero(out.lo_.get(), 1);
  } else {
    mpfr_sqrt(out.lo_.get(), lo_.get(), MPFR_RNDD);
  }
  mpfr_sqrt(out.hi_.get(), hi_.get(), MPFR_RNDU);
  return out;
}

void BoundedValue::set_precision(Precision prec) {
  if (prec <= precision()) return;
  Real lo(prec), hi(prec);
  mpfr_set(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_set(hi.get(), hi_.get(), MPFR_RNDU);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
}

std::string BoundedValue::to_string(int decimals) const {
  return "[" + lo_.fixed(decimals, MPFR_RNDD) + ", " + hi_.fixed(decimals, MPFR_RNDU) + "]";
}

BoundedValue operator+(BoundedValue a, const BoundedValue& b) { return a += b; }
BoundedValue operator-(BoundedValue a, const BoundedValue& b) { return a -= b; }
BoundedValue operator*(BoundedValue a, const BoundedValue& b) { return a *= b; }
BoundedValue operator/(BoundedValue a, const BoundedValue& b) { return a /= b; }

IntervalSum::IntervalSum(Precision prec) : lo_(prec), hi_(prec), scratch_(prec) {}

void IntervalSum::add(const BoundedValue& term) {
  mpfr_add(lo_.get(), lo_.get(), term.lo().get(), MPFR_RNDD);
  mpfr_add(hi_.get(), hi_.get(), term.hi().get(), MPFR_RNDU);
}

void IntervalSum::add_multiple(const BoundedValue& term, std::uint64_t count) {
  if (count == 0) return;
  if (count == 1) {
    add(term);
    return;
  }
  mpfr_mul_ui(scratch_.get(), term.lo().get(), count, MPFR_RNDD);
  mpfr_add(lo_.get(), lo_.get(), scratch_.get(), MPFR_RNDD);
  mpfr_mul_ui(scratch_.get(), term.hi().get(), count, MPFR_RNDU);
  mpfr_add(hi_.get(), hi_.get(), scratch_.get(), MPFR_RNDU);
}

void IntervalSum::add(const IntervalSum& other) {
  mpfr_add(lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_add(hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
}

BoundedValue IntervalSum::value() const {
  BoundedValue out(precision());
  mpfr_set(out.lo().get(), lo_.get(), MPFR_RNDD);
  mpfr_set(out.hi().get(), hi_.get(), MPFR_RNDU);
  return out;
}

}  // namespace legendre
