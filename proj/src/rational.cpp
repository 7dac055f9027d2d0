#include "shiftlab/rational.hpp"

#include <ostream>

#include "shiftlab/errors.hpp"

namespace shiftlab {

Rational::Rational(long num, long den) : q_(num, den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) : q_(num, den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::from_string(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal", s);
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw ParseError("malformed rational literal", s);
  if (q.get_den() == 0) throw ParseError("zero denominator", s);
  q.canonicalize();
  return Rational(q);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero rational");
  q_ /= o.q_;
  return *this;
}

Rational Rational::pow(long e) const {
  if (e == 0) return Rational(1);
  if (is_zero() && e < 0) throw DomainError("negative power of zero");
  const unsigned long mag = e < 0 ? -static_cast<unsigned long>(e) : e;
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q_.get_num().get_mpz_t(), mag);
  mpz_pow_ui(den.get_mpz_t(), q_.get_den().get_mpz_t(), mag);
  return e > 0 ? Rational(num, den) : Rational(den, num);
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw DomainError("reciprocal of zero");
  return Rational(q_.get_den(), q_.get_num());
}

std::string Rational::to_string() const {
  return q_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

mpz_class lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace shiftlab
