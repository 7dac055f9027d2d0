#include "shiftlab/interval.hpp"

#include <algorithm>
#include <cstdlib>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {

mpfr_prec_t combine(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(mpfr_prec_t prec, int) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
  lo_[0] = o.lo_[0];
  hi_[0] = o.hi_[0];
  // Leave the source in a destructible state.
  mpfr_init2(o.lo_, MPFR_PREC_MIN);
  mpfr_init2(o.hi_, MPFR_PREC_MIN);
}

Interval& Interval::operator=(const Interval& o) {
  if (this == &o) return *this;
  mpfr_set_prec(lo_, o.prec_);
  mpfr_set_prec(hi_, o.prec_);
  prec_ = o.prec_;
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  std::swap(prec_, o.prec_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t prec) {
  Interval r(prec, 0);
  mpfr_set_q(r.lo_, q.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.raw().get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_long(long v, mpfr_prec_t prec) {
  Interval r(prec, 0);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::euler_constant(mpfr_prec_t prec) {
  Interval r(prec, 0);
  mpfr_const_euler(r.lo_, MPFR_RNDD);
  mpfr_const_euler(r.hi_, MPFR_RNDU);
  return r;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.raw().get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_, q.raw().get_mpq_t()) >= 0;
}

Sign Interval::sign() const {
  if (mpfr_sgn(hi_) < 0) return Sign::Negative;
  if (mpfr_sgn(lo_) > 0) return Sign::Positive;
  if (mpfr_zero_p(lo_) && mpfr_zero_p(hi_)) return Sign::Zero;
  return Sign::Undecided;
}

bool Interval::width_below(long bits) const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  bool ok;
  if (mpfr_zero_p(w)) {
    ok = true;
  } else if (mpfr_sgn(w) < 0) {
    ok = true;  // cannot happen with a valid interval
  } else {
    // w <= 2^-bits  <=>  exponent(w) <= -bits (w normalized, mantissa < 1 form:
    // mpfr_get_exp gives e with 0.5 <= m < 1, w = m * 2^e, so w <= 2^e).
    ok = mpfr_get_exp(w) <= -bits;
  }
  mpfr_clear(w);
  return ok;
}

Interval Interval::operator-() const {
  Interval r(prec_, 0);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(combine(a, b), 0);
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(combine(a, b), 0);
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const mpfr_prec_t prec = combine(a, b);
  Interval r(prec, 0);
  mpfr_t t;
  mpfr_init2(t, prec);

  mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);

  mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
  mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);

  mpfr_clear(t);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (mpfr_zero_p(b.lo_) && mpfr_zero_p(b.hi_))
    throw DomainError("interval division by zero");
  if (b.contains_zero())
    throw PrecisionLoss("interval divisor straddles zero");
  const mpfr_prec_t prec = combine(a, b);
  Interval r(prec, 0);
  mpfr_t t;
  mpfr_init2(t, prec);

  mpfr_div(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_div(t, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, a.hi_, b.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, a.hi_, b.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);

  mpfr_div(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
  mpfr_div(t, a.lo_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, a.hi_, b.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, a.hi_, b.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);

  mpfr_clear(t);
  return r;
}

Interval Interval::scaled(const Rational& c) const {
  Interval r(prec_, 0);
  if (c.sgn() >= 0) {
    mpfr_mul_q(r.lo_, lo_, c.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.hi_, hi_, c.raw().get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(r.lo_, hi_, c.raw().get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.hi_, lo_, c.raw().get_mpq_t(), MPFR_RNDU);
  }
  return r;
}

Interval Interval::add_rational(const Rational& c) const {
  Interval r(prec_, 0);
  mpfr_add_q(r.lo_, lo_, c.raw().get_mpq_t(), MPFR_RNDD);
  mpfr_add_q(r.hi_, hi_, c.raw().get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::exp_() const {
  Interval r(prec_, 0);
  mpfr_exp(r.lo_, lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, hi_, MPFR_RNDU);
  return r;
}

void Interval::require_positive(const char* op) const {
  if (mpfr_sgn(hi_) <= 0)
    throw DomainError(std::string(op) + " of a non-positive value");
  if (mpfr_sgn(lo_) <= 0)
    throw PrecisionLoss(std::string(op) + " argument not separated from zero");
}

Interval Interval::ln_() const {
  require_positive("ln");
  Interval r(prec_, 0);
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt_() const {
  if (mpfr_sgn(hi_) < 0) throw DomainError("sqrt of a negative value");
  if (mpfr_sgn(lo_) < 0)
    throw PrecisionLoss("sqrt argument not separated from zero");
  Interval r(prec_, 0);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::pow_int(long e) const {
  if (e == 0) return from_long(1, prec_);
  Interval r(prec_, 0);
  if (e > 0) {
    if (e % 2 == 1 || mpfr_sgn(lo_) >= 0) {
      mpfr_pow_si(r.lo_, lo_, e, MPFR_RNDD);
      mpfr_pow_si(r.hi_, hi_, e, MPFR_RNDU);
      return r;
    }
    if (mpfr_sgn(hi_) <= 0) {  // even power of a non-positive interval
      mpfr_pow_si(r.lo_, hi_, e, MPFR_RNDD);
      mpfr_pow_si(r.hi_, lo_, e, MPFR_RNDU);
      return r;
    }
    // even power straddling zero: [0, max(|lo|, hi)^e]
    mpfr_set_zero(r.lo_, 1);
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_neg(m, lo_, MPFR_RNDU);
    mpfr_max(m, m, hi_, MPFR_RNDU);
    mpfr_pow_si(r.hi_, m, e, MPFR_RNDU);
    mpfr_clear(m);
    return r;
  }
  // negative exponent: invert then positive power
  Interval one = from_long(1, prec_);
  return (one / *this).pow_int(-e);
}

Interval Interval::pow_rational(const Rational& e) const {
  if (e.is_integer()) {
    if (!e.numerator().fits_slong_p())
      throw DomainError("integer exponent too large");
    return pow_int(e.numerator().get_si());
  }
  if (e == Rational(1, 2)) return sqrt_();
  require_positive("rational power");
  // x^e = exp(e * ln x); exp/ln directed rounding keeps the enclosure.
  return ln_().scaled(e).exp_();
}

namespace {

// Location of the minimum of Gamma on (0, inf) is ~1.4616321; these two
// rationals bracket it safely.
const double kGammaMinLeft = 1.4616;
const double kGammaMinRight = 1.4617;
// Gamma(x_min) = 0.8856031944...; any lower bound below it is sound.
const double kGammaMinValue = 0.88560319;

}  // namespace

Interval Interval::gamma_() const {
  require_positive("gamma");
  Interval r(prec_, 0);
  if (mpfr_cmp_d(hi_, kGammaMinLeft) <= 0) {
    // decreasing on (0, x_min)
    mpfr_gamma(r.lo_, hi_, MPFR_RNDD);
    mpfr_gamma(r.hi_, lo_, MPFR_RNDU);
  } else if (mpfr_cmp_d(lo_, kGammaMinRight) >= 0) {
    // increasing on (x_min, inf)
    mpfr_gamma(r.lo_, lo_, MPFR_RNDD);
    mpfr_gamma(r.hi_, hi_, MPFR_RNDU);
  } else {
    // straddles the minimum
    mpfr_set_d(r.lo_, kGammaMinValue, MPFR_RNDD);
    mpfr_t a, b;
    mpfr_init2(a, prec_);
    mpfr_init2(b, prec_);
    mpfr_gamma(a, lo_, MPFR_RNDU);
    mpfr_gamma(b, hi_, MPFR_RNDU);
    mpfr_max(r.hi_, a, b, MPFR_RNDU);
    mpfr_clear(a);
    mpfr_clear(b);
  }
  return r;
}

Interval Interval::digamma_() const {
  require_positive("digamma");
  // digamma is increasing on (0, inf)
  Interval r(prec_, 0);
  mpfr_digamma(r.lo_, lo_, MPFR_RNDD);
  mpfr_digamma(r.hi_, hi_, MPFR_RNDU);
  return r;
}

std::pair<std::string, std::string> Interval::to_decimal_strings() const {
  const int digits = static_cast<int>(static_cast<double>(prec_) * 0.30103) + 2;
  char* s_lo = nullptr;
  char* s_hi = nullptr;
  mpfr_asprintf(&s_lo, "%.*RDe", digits, lo_);
  mpfr_asprintf(&s_hi, "%.*RUe", digits, hi_);
  std::pair<std::string, std::string> out{s_lo, s_hi};
  mpfr_free_str(s_lo);
  mpfr_free_str(s_hi);
  return out;
}

double Interval::midpoint_double() const {
  const double a = mpfr_get_d(lo_, MPFR_RNDN);
  const double b = mpfr_get_d(hi_, MPFR_RNDN);
  return 0.5 * (a + b);
}

}  // namespace shiftlab
