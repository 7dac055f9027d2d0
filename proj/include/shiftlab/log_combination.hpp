#pragma once

#include <optional>
#include <vector>

#include "shiftlab/interval.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/sign.hpp"

namespace shiftlab {

struct LogTerm {
  Rational base;      // > 0
  Rational exponent;  // rational, nonzero after normalization
};

// Formal sum  sum_i exponent_i * ln(base_i)  with positive rational
// bases. Normalized form: every base > 1 (ln(p/q) = -ln(q/p)), terms
// merged by base and sorted, zero exponents dropped.
class LogCombination {
 public:
  LogCombination() = default;
  explicit LogCombination(std::vector<LogTerm> terms);

  static LogCombination ln(const Rational& base, const Rational& exponent = Rational(1));

  const std::vector<LogTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  LogCombination operator-() const;
  friend LogCombination operator+(const LogCombination& a, const LogCombination& b);
  friend LogCombination operator-(const LogCombination& a, const LogCombination& b);
  LogCombination scaled(const Rational& c) const;

  friend bool operator==(const LogCombination& a, const LogCombination& b);

  Interval enclosure(mpfr_prec_t prec) const;

 private:
  void normalize();
  std::vector<LogTerm> terms_;
};

// Exact sign of the combination, by clearing exponent denominators and
// comparing the resulting big-integer products. Never returns Undecided.
Sign sign_of_log_combination(const LogCombination& c);

// A real number represented exactly as  rational + log-combination.
// Closed under addition, negation and rational scaling, which is all
// the difference operator needs. Covers every exact evaluation path in
// the library: plain rationals, logs of products of rational powers,
// and harmonic-minus-log terms.
class ExactReal {
 public:
  ExactReal() = default;
  explicit ExactReal(Rational r) : affine_(std::move(r)) {}
  explicit ExactReal(LogCombination logs) : logs_(std::move(logs)) {}
  ExactReal(Rational r, LogCombination logs)
      : affine_(std::move(r)), logs_(std::move(logs)) {}

  const Rational& rational_part() const { return affine_; }
  const LogCombination& log_part() const { return logs_; }
  bool is_rational() const { return logs_.empty(); }
  std::optional<Rational> as_rational() const;

  ExactReal operator-() const { return ExactReal(-affine_, -logs_); }
  friend ExactReal operator+(const ExactReal& a, const ExactReal& b) {
    return ExactReal(a.affine_ + b.affine_, a.logs_ + b.logs_);
  }
  friend ExactReal operator-(const ExactReal& a, const ExactReal& b) {
    return ExactReal(a.affine_ - b.affine_, a.logs_ - b.logs_);
  }
  ExactReal scaled(const Rational& c) const {
    return ExactReal(affine_ * c, logs_.scaled(c));
  }

  Interval enclosure(mpfr_prec_t prec) const;

  // Exact when either part vanishes. A mixed value q + sum e ln b with
  // both parts nonzero is never zero, so interval escalation decides it;
  // Undecided only if max_bits is hit first.
  Sign sign(mpfr_prec_t start_bits, mpfr_prec_t max_bits) const;

  std::string to_string() const;

 private:
  Rational affine_;
  LogCombination logs_;
};

}  // namespace shiftlab
