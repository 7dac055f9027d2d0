#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "shiftlab/sequence.hpp"

namespace shiftlab {

// Moment sequence gamma of a weight sequence: gamma_0 = 1,
// gamma_n = prod_{i<n} alpha_i^2. Channels follow the weights: exact
// rational products when the squared weights are rational, a log form
// when the squared weights carry one, and a product expression always.
class MomentSequence {
 public:
  explicit MomentSequence(SequenceDef weights);

  const SequenceDef& weights() const { return weights_; }

  std::optional<Rational> exact(long n) const;
  std::optional<ExactReal> log_form(long n) const;  // ln gamma_n
  Expr expr(long n) const;
  Interval enclosure(long n, long bits) const;

  // gamma_0..gamma_N, throwing DomainError when not exactly rational.
  std::vector<Rational> exact_prefix(long N) const;

 private:
  void grow(long n) const;

  SequenceDef weights_;
  mutable std::mutex mu_;
  mutable std::vector<std::optional<Rational>> exact_;
  mutable std::vector<std::optional<ExactReal>> logf_;
  mutable std::vector<Expr> expr_;
};

// gamma_0..gamma_N; rationals on the exact path, interval enclosures
// otherwise.
std::vector<Value> moments_from_weights(const SequenceDef& s, long N,
                                        long start_bits, long max_bits);

// Exact variant; throws DomainError when any moment is not rational.
std::vector<Rational> exact_moments_from_weights(const SequenceDef& s, long N);

// Ratios gamma_{n+1}/gamma_n = alpha_n^2. Requires gamma_0 = 1 and all
// moments positive.
std::vector<Rational> weights_from_moments(const std::vector<Rational>& gamma);

}  // namespace shiftlab
