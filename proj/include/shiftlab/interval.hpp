#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "shiftlab/rational.hpp"
#include "shiftlab/sign.hpp"

namespace shiftlab {

// Closed interval [lo, hi] with endpoints rounded outward at a fixed
// working precision. Every operation preserves the enclosure property:
// if the true operands lie inside their intervals, the true result lies
// inside the returned interval.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval from_rational(const Rational& q, mpfr_prec_t prec);
  static Interval from_long(long v, mpfr_prec_t prec);
  // Enclosure of the Euler-Mascheroni constant.
  static Interval euler_constant(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }

  bool contains_zero() const;
  bool contains(const Rational& q) const;
  // Negative/Positive when the interval excludes zero, Zero when the
  // interval is exactly [0,0], Undecided otherwise.
  Sign sign() const;
  // hi - lo <= 2^-bits (rounded up when checking).
  bool width_below(long bits) const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  // Throws PrecisionLoss when the divisor straddles zero, DomainError
  // when it is exactly [0,0].
  friend Interval operator/(const Interval& a, const Interval& b);

  Interval scaled(const Rational& c) const;  // c * [lo, hi], exact c
  Interval add_rational(const Rational& c) const;

  Interval exp_() const;
  // Requires a provably positive argument: throws PrecisionLoss when lo <= 0 < hi,
  // DomainError when hi <= 0.
  Interval ln_() const;
  Interval sqrt_() const;
  Interval pow_int(long e) const;
  Interval pow_rational(const Rational& e) const;
  // Gamma and digamma on provably positive arguments.
  Interval gamma_() const;
  Interval digamma_() const;

  // Decimal endpoint strings, lo rounded down / hi rounded up.
  std::pair<std::string, std::string> to_decimal_strings() const;
  double midpoint_double() const;

 private:
  Interval(mpfr_prec_t prec, int /*uninit tag*/);
  void require_positive(const char* op) const;

  mpfr_t lo_;
  mpfr_t hi_;
  mpfr_prec_t prec_;
};

}  // namespace shiftlab
