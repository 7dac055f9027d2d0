#include "shiftlab/binomial.hpp"

#include <memory>
#include <mutex>
#include <shared_mutex>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {

// Rows are append-only and never reallocated once published, so readers
// can hold references without a lock after the shared-lock lookup.
struct PascalTable {
  std::shared_mutex mutex;
  std::vector<std::unique_ptr<std::vector<mpz_class>>> rows;
};

PascalTable& table() {
  static PascalTable t;
  return t;
}

}  // namespace

const std::vector<mpz_class>& binomial_row(unsigned k) {
  PascalTable& t = table();
  {
    std::shared_lock lk(t.mutex);
    if (k < t.rows.size()) return *t.rows[k];
  }
  std::unique_lock lk(t.mutex);
  while (t.rows.size() <= k) {
    const unsigned r = static_cast<unsigned>(t.rows.size());
    auto row = std::make_unique<std::vector<mpz_class>>(r + 1);
    (*row)[0] = 1;
    (*row)[r] = 1;
    for (unsigned i = 1; i < r; ++i)
      (*row)[i] = (*t.rows[r - 1])[i - 1] + (*t.rows[r - 1])[i];
    t.rows.push_back(std::move(row));
  }
  return *t.rows[k];
}

const mpz_class& binomial(unsigned k, unsigned i) {
  if (i > k) throw DomainError("binomial(k, i) requires i <= k");
  return binomial_row(k)[i];
}

}  // namespace shiftlab
