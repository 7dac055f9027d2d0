#pragma once

#include <utility>

#include "shiftlab/sequence.hpp"

namespace shiftlab::transforms {

// Validates the tag's parameter domain against the inner sequence and
// returns the transformed sequence. Iterated Aluthge tags expand into
// nested single Aluthge wrappers.
SequenceDef apply(const TransformTag& tag, const SequenceDef& s);

// Weight of the generalized mean transform at index n,
// (a_n^{1-t} a_{n+1}^t + a_n^t a_{n+1}^{1-t}) / 2 with 0 <= t <= 1/2.
// Exact rational when the weights are rational and t = 0.
Value mean_transform_weights(const SequenceDef& s, const Rational& t, long n,
                             long start_bits, long max_bits);

// Verifies the exact identity linking order-m differences of a sequence
// to those of its running-average transform:
//   C(m,j) = m! j! / (m+j+1)! * sum_{k=0}^{j} C(m+k,m) D(m,k).
// Requires an exactly rational sequence.
bool cesaro_difference_identity_check(const SequenceDef& x, long m, long j);

// Running average of the squared Bergman weights: the exact value
// (n + 2 - H_{n+2})/(n+1) paired with the interval evaluation of the
// equivalent digamma form (2 - euler + n - digamma(n+3))/(n+1).
std::pair<Rational, Interval> gamma_cesaro_weights(long n, long bits);

}  // namespace shiftlab::transforms
