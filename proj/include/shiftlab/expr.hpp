#pragma once

#include <memory>
#include <optional>
#include <string>

#include "shiftlab/interval.hpp"
#include "shiftlab/log_combination.hpp"

namespace shiftlab {

// Immutable symbolic expression over {+, -, *, /, exp, ln, power, Gamma,
// digamma, Euler constant} with rational leaves. Supports interval
// evaluation at any precision and exact extraction for the fragment
// that reduces to rational + log-combination.
class Expr {
 public:
  Expr();  // zero

  static Expr constant(const Rational& q);
  static Expr constant(long v) { return constant(Rational(v)); }
  static Expr euler_constant();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  static Expr exp(const Expr& x);
  static Expr ln(const Expr& x);
  static Expr pow(const Expr& base, const Rational& exponent);
  static Expr gamma(const Expr& x);
  static Expr digamma(const Expr& x);

  // Enclosure at the given working precision. Deterministic for fixed
  // precision. Throws PrecisionLoss when an intermediate interval is too
  // wide for a domain-restricted operation, DomainError on true domain
  // violations.
  Interval eval(mpfr_prec_t precision_bits) const;

  // Exact value when the expression lies in the rational+log fragment.
  std::optional<ExactReal> exact() const;

  std::string to_string() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Enclosure of expr; widths shrink as precision grows.
Interval eval_interval(const Expr& expr, mpfr_prec_t precision_bits);

// Doubles precision from start_bits until the enclosure excludes zero or
// max_bits is passed; Zero only via exact simplification.
Sign sign_adaptive(const Expr& expr, mpfr_prec_t start_bits, mpfr_prec_t max_bits);

}  // namespace shiftlab
