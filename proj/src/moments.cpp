#include "shiftlab/moments.hpp"

#include "shiftlab/errors.hpp"

namespace shiftlab {

MomentSequence::MomentSequence(SequenceDef weights) : weights_(std::move(weights)) {}

void MomentSequence::grow(long n) const {
  std::lock_guard lk(mu_);
  if (exact_.empty()) {
    exact_.push_back(Rational(1));
    logf_.push_back(ExactReal(Rational(0)));
    expr_.push_back(Expr::constant(1));
  }
  while (static_cast<long>(exact_.size()) <= n) {
    const long i = static_cast<long>(exact_.size()) - 1;
    const TermChannels t = weights_.term(i);

    // alpha_i^2 channels
    std::optional<Rational> sq;
    std::optional<ExactReal> sq_log;
    if (t.exact) {
      sq = *t.exact * *t.exact;
      sq_log = ExactReal(LogCombination::ln(*sq));
    } else if (t.log_form) {
      sq_log = t.log_form->scaled(Rational(2));
    }
    Expr sq_expr = Expr::pow(t.expr, Rational(2));

    const auto& pe = exact_.back();
    const auto& pl = logf_.back();
    exact_.push_back(pe && sq ? std::optional<Rational>(*pe * *sq) : std::nullopt);
    logf_.push_back(pl && sq_log ? std::optional<ExactReal>(*pl + *sq_log)
                                 : std::nullopt);
    expr_.push_back(expr_.back() * sq_expr);
  }
}

std::optional<Rational> MomentSequence::exact(long n) const {
  if (n < 0) throw DomainError("moment index must be nonnegative");
  grow(n);
  std::lock_guard lk(mu_);
  return exact_[n];
}

std::optional<ExactReal> MomentSequence::log_form(long n) const {
  if (n < 0) throw DomainError("moment index must be nonnegative");
  grow(n);
  std::lock_guard lk(mu_);
  return logf_[n];
}

Expr MomentSequence::expr(long n) const {
  if (n < 0) throw DomainError("moment index must be nonnegative");
  grow(n);
  std::lock_guard lk(mu_);
  return expr_[n];
}

Interval MomentSequence::enclosure(long n, long bits) const {
  if (auto q = exact(n)) return Interval::from_rational(*q, bits);
  if (auto lf = log_form(n)) return lf->enclosure(bits).exp_();
  return expr(n).eval(bits);
}

std::vector<Rational> MomentSequence::exact_prefix(long N) const {
  std::vector<Rational> out;
  out.reserve(N + 1);
  for (long n = 0; n <= N; ++n) {
    auto q = exact(n);
    if (!q)
      throw DomainError(
          "moments are not exactly rational; this operation needs the exact path");
    out.push_back(*q);
  }
  return out;
}

std::vector<Value> moments_from_weights(const SequenceDef& s, long N,
                                        long start_bits, long max_bits) {
  MomentSequence ms(s);
  std::vector<Value> out;
  out.reserve(N + 1);
  for (long n = 0; n <= N; ++n) {
    if (auto q = ms.exact(n)) {
      out.emplace_back(*q);
      continue;
    }
    long bits = start_bits;
    for (;; bits *= 2) {
      try {
        out.emplace_back(ms.enclosure(n, bits));
        break;
      } catch (const PrecisionLoss&) {
        if (bits * 2 > max_bits)
          throw PrecisionExhausted("moment enclosure failed at maximum precision");
      }
    }
  }
  return out;
}

std::vector<Rational> exact_moments_from_weights(const SequenceDef& s, long N) {
  return MomentSequence(s).exact_prefix(N);
}

std::vector<Rational> weights_from_moments(const std::vector<Rational>& gamma) {
  if (gamma.empty()) throw DomainError("moment list is empty");
  if (!gamma[0].is_one()) throw DomainError("moment list must start with gamma_0 = 1");
  std::vector<Rational> out;
  out.reserve(gamma.size() - 1);
  for (size_t n = 0; n + 1 < gamma.size(); ++n) {
    if (gamma[n + 1].sgn() <= 0) throw DomainError("moments must be positive");
    out.push_back(gamma[n + 1] / gamma[n]);
  }
  return out;
}

}  // namespace shiftlab
