#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "shiftlab/sign.hpp"

namespace shiftlab {

// Arbitrary-precision rational, always reduced, denominator > 0.
// Thin wrapper over GMP's mpq_class that enforces canonical form on
// every construction path.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit by design
  Rational(long num, long den);
  explicit Rational(const mpz_class& z) : q_(z) {}
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpq_class& q);

  // Parses "p/q" or "p" (base 10). Throws ParseError on malformed input.
  static Rational from_string(const std::string& s);

  const mpq_class& raw() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sgn() const { return ::sgn(q_); }
  Sign sign() const { return sign_of_int(sgn()); }
  bool is_zero() const { return sgn() == 0; }
  bool is_one() const { return q_ == 1; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t()) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // Integer power; negative exponents require a nonzero base.
  Rational pow(long e) const;

  Rational abs() const { return sgn() < 0 ? -*this : *this; }
  Rational reciprocal() const;

  // "p/q", or "p" when the denominator is 1.
  std::string to_string() const;
  double to_double() const { return q_.get_d(); }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Exact lcm of denominators; both arguments must represent integers > 0.
mpz_class lcm(const mpz_class& a, const mpz_class& b);

}  // namespace shiftlab
