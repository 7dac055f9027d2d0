#include "shiftlab/transforms.hpp"

#include "shiftlab/binomial.hpp"
#include "shiftlab/errors.hpp"

namespace shiftlab::transforms {

namespace {

// sign of (term - r) for the perturbation guard
Sign compare_term_to(const TermChannels& t, const Rational& r, long start_bits,
                     long max_bits) {
  if (t.exact) return (*t.exact - r).sign();
  if (t.value_form) return (*t.value_form - ExactReal(r)).sign(start_bits, max_bits);
  if (t.log_form && r.sgn() > 0)
    return (*t.log_form - ExactReal(LogCombination::ln(r))).sign(start_bits, max_bits);
  return sign_adaptive(t.expr - Expr::constant(r), start_bits, max_bits);
}

}  // namespace

SequenceDef apply(const TransformTag& tag, const SequenceDef& s) {
  return std::visit(
      [&](const auto& t) -> SequenceDef {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SchurPowerTag>) {
          if (t.p.sgn() <= 0) throw DomainError("schur_power requires p > 0");
        } else if constexpr (std::is_same_v<T, AluthgeIterTag>) {
          if (t.m < 0) throw DomainError("aluthge_iter requires m >= 0");
          SequenceDef out = s;
          for (long i = 0; i < t.m; ++i)
            out = SequenceDef::transformed(AluthgeTag{}, out);
          return out;
        } else if constexpr (std::is_same_v<T, GeneralizedMeanTag>) {
          if (t.t < Rational(0) || t.t > Rational(1, 2))
            throw DomainError("generalized_mean requires 0 <= t <= 1/2");
        } else if constexpr (std::is_same_v<T, CesaroWindowTag>) {
          if (t.k < 1) throw DomainError("cesaro_window requires k >= 1");
        } else if constexpr (std::is_same_v<T, GeometricCesaroWindowTag>) {
          if (t.k < 1) throw DomainError("geometric_cesaro_window requires k >= 1");
        } else if constexpr (std::is_same_v<T, RestrictionTag>) {
          if (t.r < 0) throw DomainError("restriction requires r >= 0");
        } else if constexpr (std::is_same_v<T, PerturbZerothTag>) {
          if (t.new_alpha0.sgn() <= 0)
            throw DomainError("perturb_zeroth requires a positive weight");
          if (!t.allow_increase) {
            const Sign cmp = compare_term_to(s.term(0), t.new_alpha0, 256, 4096);
            if (cmp == Sign::Negative)
              throw DomainError(
                  "perturb_zeroth only guarantees preservation when the zeroth "
                  "weight decreases; pass allow_increase to override");
            if (cmp == Sign::Undecided)
              throw PrecisionExhausted(
                  "cannot compare the new zeroth weight with the original");
          }
        } else if constexpr (std::is_same_v<T, ExpNormalizedTag>) {
          const BoundAnalysis b = s.bounds();
          if (!b.sup_exact && !b.sup_expr)
            throw DomainError(
                "exp_normalized requires a supremum certificate; none is known "
                "for this sequence");
        }
        return SequenceDef::transformed(tag, s);
      },
      tag);
}

Value mean_transform_weights(const SequenceDef& s, const Rational& t, long n,
                             long start_bits, long max_bits) {
  SequenceDef m = apply(GeneralizedMeanTag{t}, s);
  return m.value(n, start_bits, max_bits);
}

bool cesaro_difference_identity_check(const SequenceDef& x, long m, long j) {
  if (m < 1 || j < 0) throw DomainError("identity requires m >= 1, j >= 0");

  auto term = [&](long i) -> Rational {
    const TermChannels t = x.term(i);
    if (!t.exact)
      throw DomainError("cesaro difference identity needs a rational sequence");
    return *t.exact;
  };

  // differences of the source
  auto D = [&](long mm, long jj) {
    Rational acc(0);
    const auto& row = binomial_row(static_cast<unsigned>(mm));
    for (long i = 0; i <= mm; ++i) {
      Rational contrib = Rational(row[i]) * term(jj + i);
      acc += (i % 2 == 0) ? contrib : -contrib;
    }
    return acc;
  };

  // differences of the running-average transform
  std::vector<Rational> csum;  // partial sums
  const long need = m + j + 1;
  csum.reserve(need);
  Rational run(0);
  for (long i = 0; i < need; ++i) {
    run += term(i);
    csum.push_back(run);
  }
  auto C = [&](long mm, long jj) {
    Rational acc(0);
    const auto& row = binomial_row(static_cast<unsigned>(mm));
    for (long i = 0; i <= mm; ++i) {
      Rational c = csum[jj + i] / Rational(jj + i + 1);
      Rational contrib = Rational(row[i]) * c;
      acc += (i % 2 == 0) ? contrib : -contrib;
    }
    return acc;
  };

  // factorial ratio m! j! / (m+j+1)!
  mpz_class num(1);
  for (long i = 2; i <= m; ++i) num *= i;
  for (long i = 2; i <= j; ++i) num *= i;
  mpz_class den(1);
  for (long i = 2; i <= m + j + 1; ++i) den *= i;
  const Rational ratio{mpz_class(num), mpz_class(den)};

  Rational rhs(0);
  for (long k = 0; k <= j; ++k)
    rhs += Rational(binomial(static_cast<unsigned>(m + k), static_cast<unsigned>(m))) * D(m, k);
  rhs *= ratio;

  return C(m, j) == rhs;
}

std::pair<Rational, Interval> gamma_cesaro_weights(long n, long bits) {
  if (n < 0) throw DomainError("index must be nonnegative");
  // exact running average of (i+1)/(i+2), i = 0..n
  const Rational exact = (Rational(n + 2) - harmonic(n + 2)) / Rational(n + 1);
  // digamma form of the same quantity
  Expr e = (Expr::constant(2) - Expr::euler_constant() + Expr::constant(n) -
            Expr::digamma(Expr::constant(n + 3))) /
           Expr::constant(n + 1);
  return {exact, e.eval(bits)};
}

}  // namespace shiftlab::transforms
