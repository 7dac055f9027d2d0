#pragma once

#include <gmpxx.h>

#include <vector>

namespace shiftlab {

// C(k, i) with a shared memo table; throws DomainError when i > k.
// Safe to call from many threads.
const mpz_class& binomial(unsigned k, unsigned i);

// Full row C(k, 0..k); the returned reference stays valid for the
// process lifetime.
const std::vector<mpz_class>& binomial_row(unsigned k);

}  // namespace shiftlab
