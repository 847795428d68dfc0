#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace legendre {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;

// Owning wrapper around an mpfr_t.
class Real {
 public:
  explicit Real(Precision prec = kDefaultPrecision);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  Precision precision() const { return mpfr_get_prec(value_); }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }

  // Fixed-point rendering with `decimals` digits after the point.
  std::string fixed(int decimals, mpfr_rnd_t rnd = MPFR_RNDN) const;

 private:
  mpfr_t value_;
};

// A real number carried as a guaranteed enclosure [lo, hi]. Every operation
// rounds lo toward -inf and hi toward +inf.
class BoundedValue {
 public:
  explicit BoundedValue(Precision prec = kDefaultPrecision);

  static BoundedValue from_integer(long value, Precision prec = kDefaultPrecision);
  static BoundedValue from_integer(const mpz_class& value, Precision prec = kDefaultPrecision);
  static BoundedValue from_rational(const mpq_class& value, Precision prec = kDefaultPrecision);
  static BoundedValue from_bounds(const mpq_class& lo, const mpq_class& hi,
                                  Precision prec = kDefaultPrecision);
  // Enclosure of a decimal literal such as "1.2269688".
  static BoundedValue from_decimal(const std::string& text, Precision prec = kDefaultPrecision);
  // Union of two enclosures.
  static BoundedValue hull(const BoundedValue& a, const BoundedValue& b);

  // log(value) for value >= 1.
  static BoundedValue log_of(std::uint64_t value, Precision prec = kDefaultPrecision);
  static BoundedValue log_of(const mpz_class& value, Precision prec = kDefaultPrecision);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  Real& lo() { return lo_; }
  Real& hi() { return hi_; }
  Precision precision() const { return lo_.precision(); }

  double lo_double() const { return lo_.to_double(MPFR_RNDD); }
  double hi_double() const { return hi_.to_double(MPFR_RNDU); }
  double mid_double() const;
  double width_double() const;
  Real width() const;

  bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  bool contains(double x) const;
  bool contains(const mpq_class& x) const;
  // True when `inner` lies entirely inside this enclosure.
  bool contains(const BoundedValue& inner) const;
  bool overlaps(const BoundedValue& other) const;
  bool certainly_less(const BoundedValue& other) const;
  bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool certainly_nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }

  // floor(lo) and floor(hi); equal iff the floor of the value is determined.
  mpz_class floor_lo() const;
  mpz_class floor_hi() const;

  BoundedValue& operator+=(const BoundedValue& rhs);
  BoundedValue& operator-=(const BoundedValue& rhs);
  BoundedValue& operator*=(const BoundedValue& rhs);
  // Throws DomainError when the divisor straddles zero.
  BoundedValue& operator/=(const BoundedValue& rhs);

  BoundedValue& mul(const mpz_class& k);
  BoundedValue& mul(const mpq_class& q);
  BoundedValue& div(const mpz_class& k);

  BoundedValue abs() const;
  BoundedValue sqrt() const;
  // Raises precision in place; never narrows the enclosure.
  void set_precision(Precision prec);

  std::string to_string(int decimals = 10) const;

 private:
  Real lo_;
  Real hi_;
};

BoundedValue operator+(BoundedValue a, const BoundedValue& b);
BoundedValue operator-(BoundedValue a, const BoundedValue& b);
BoundedValue operator*(BoundedValue a, const BoundedValue& b);
BoundedValue operator/(BoundedValue a, const BoundedValue& b);

// Running outward-rounded sum. Keeps lo and hi as scalars so the hot loops
// over primes avoid temporary enclosures.
class IntervalSum {
 public:
  explicit IntervalSum(Precision prec = kDefaultPrecision);

  void add(const BoundedValue& term);
  // term * count with count >= 0.
  void add_multiple(const BoundedValue& term, std::uint64_t count);
  void add(const IntervalSum& other);

  BoundedValue value() const;
  Precision precision() const { return lo_.precision(); }

 private:
  Real lo_;
  Real hi_;
  Real scratch_;
};

}  // namespace legendre
