#include "shiftlab/log_combination.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "shiftlab/errors.hpp"

namespace shiftlab {

LogCombination::LogCombination(std::vector<LogTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.base.sgn() <= 0)
      throw DomainError("log combination requires positive bases");
  }
  normalize();
}

LogCombination LogCombination::ln(const Rational& base, const Rational& exponent) {
  return LogCombination({LogTerm{base, exponent}});
}

void LogCombination::normalize() {
  std::map<Rational, Rational> merged;
  for (auto& t : terms_) {
    if (t.exponent.is_zero() || t.base.is_one()) continue;
    // Flip bases below 1 so equal magnitudes cancel regardless of
    // orientation: e*ln(p/q) = -e*ln(q/p).
    if (t.base < Rational(1))
      merged[t.base.reciprocal()] -= t.exponent;
    else
      merged[t.base] += t.exponent;
  }
  terms_.clear();
  terms_.reserve(merged.size());
  for (auto& [base, exp] : merged) {
    if (!exp.is_zero()) terms_.push_back(LogTerm{base, exp});
  }
}

LogCombination LogCombination::operator-() const {
  LogCombination r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(LogTerm{t.base, -t.exponent});
  return r;
}

LogCombination operator+(const LogCombination& a, const LogCombination& b) {
  LogCombination r;
  r.terms_ = a.terms_;
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  r.normalize();
  return r;
}

LogCombination operator-(const LogCombination& a, const LogCombination& b) {
  return a + (-b);
}

LogCombination LogCombination::scaled(const Rational& c) const {
  if (c.is_zero()) return LogCombination();
  LogCombination r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(LogTerm{t.base, t.exponent * c});
  if (c.sgn() < 0) {
    // exponent sign flips do not disturb the base>1 canonical form,
    // but keep terms sorted-merged anyway
    r.normalize();
  }
  return r;
}

bool operator==(const LogCombination& a, const LogCombination& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].base != b.terms_[i].base) return false;
    if (a.terms_[i].exponent != b.terms_[i].exponent) return false;
  }
  return true;
}

Interval LogCombination::enclosure(mpfr_prec_t prec) const {
  Interval acc(prec);
  for (const auto& t : terms_) {
    Interval l = Interval::from_rational(t.base, prec).ln_();
    acc = acc + l.scaled(t.exponent);
  }
  return acc;
}

namespace {

// Small primes for splitting merged integer factors; paper families only
// produce factors well below the square of the largest entry, so trial
// division either factors them completely or leaves one opaque cofactor.
const unsigned kSmallPrimes[] = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,  37,  41,  43,  47,  53,
    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
    211, 223, 227, 229, 233, 239, 241, 251};

// factor -> signed exponent, factors > 1
using FactorMap = std::map<mpz_class, mpz_class>;

void add_factored(FactorMap& m, mpz_class v, const mpz_class& e) {
  if (v == 1) return;
  for (unsigned p : kSmallPrimes) {
    if (v == 1) break;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
      m[mpz_class(p)] += e;
    }
  }
  if (v != 1) m[v] += e;
}

// Accumulates bit-length bounds of prod f^e over nonneg exponents:
// log2(prod) in [sum e*(bits(f)-1), sum e*bits(f)].
struct BitBounds {
  mpz_class lo = 0;
  mpz_class hi = 0;
  void add(const mpz_class& f, const mpz_class& e) {
    const size_t bits = mpz_sizeinbase(f.get_mpz_t(), 2);
    hi += e * static_cast<unsigned long>(bits);
    lo += e * static_cast<unsigned long>(bits - 1);
  }
};

mpz_class product_of_powers(const std::vector<std::pair<mpz_class, mpz_class>>& fs) {
  mpz_class acc(1), p;
  for (const auto& [f, e] : fs) {
    if (!e.fits_ulong_p())
      throw DomainError("log-combination exponent too large to decide exactly");
    mpz_pow_ui(p.get_mpz_t(), f.get_mpz_t(), e.get_ui());
    acc *= p;
  }
  return acc;
}

}  // namespace

Sign sign_of_log_combination(const LogCombination& c) {
  if (c.empty()) return Sign::Zero;

  // Clear exponent denominators: multiplying all exponents by L > 0
  // leaves the sign unchanged.
  mpz_class L(1);
  for (const auto& t : c.terms()) L = lcm(L, t.exponent.denominator());

  FactorMap factors;
  for (const auto& t : c.terms()) {
    mpz_class e = t.exponent.numerator() * (L / t.exponent.denominator());
    // base = p/q contributes p^e / q^e
    add_factored(factors, t.base.numerator(), e);
    add_factored(factors, t.base.denominator(), -e);
  }

  std::vector<std::pair<mpz_class, mpz_class>> pos, neg;
  for (auto& [f, e] : factors) {
    if (e > 0)
      pos.emplace_back(f, e);
    else if (e < 0)
      neg.emplace_back(f, -e);
  }
  if (pos.empty() && neg.empty()) return Sign::Zero;
  if (neg.empty()) return Sign::Positive;  // product of factors > 1
  if (pos.empty()) return Sign::Negative;

  // Bit-length bounds first; exact cross-multiplication only when the
  // bounds overlap.
  BitBounds bp, bn;
  for (const auto& [f, e] : pos) bp.add(f, e);
  for (const auto& [f, e] : neg) bn.add(f, e);
  if (bp.lo > bn.hi) return Sign::Positive;
  if (bp.hi < bn.lo) return Sign::Negative;

  const mpz_class A = product_of_powers(pos);
  const mpz_class B = product_of_powers(neg);
  return sign_of_int(cmp(A, B));
}

std::optional<Rational> ExactReal::as_rational() const {
  if (!logs_.empty()) return std::nullopt;
  return affine_;
}

Interval ExactReal::enclosure(mpfr_prec_t prec) const {
  return logs_.enclosure(prec).add_rational(affine_);
}

Sign ExactReal::sign(mpfr_prec_t start_bits, mpfr_prec_t max_bits) const {
  if (logs_.empty()) return affine_.sign();
  if (affine_.is_zero()) return sign_of_log_combination(logs_);
  // Mixed: q + sum e ln b = 0 would force e^-q rational, impossible for
  // rational q != 0, so escalation terminates for every true value; the
  // precision cap is the only source of Undecided.
  for (mpfr_prec_t bits = start_bits; bits <= max_bits; bits *= 2) {
    const Sign s = enclosure(bits).sign();
    if (s == Sign::Negative || s == Sign::Positive) return s;
  }
  return Sign::Undecided;
}

std::string ExactReal::to_string() const {
  std::ostringstream os;
  os << affine_.to_string();
  for (const auto& t : logs_.terms())
    os << " + " << t.exponent.to_string() << "*ln(" << t.base.to_string() << ")";
  return os.str();
}

}  // namespace shiftlab
