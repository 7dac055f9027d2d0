#pragma once

#include <string>
#include <vector>

#include "shiftlab/difference.hpp"
#include "shiftlab/moments.hpp"
#include "shiftlab/verdict.hpp"

namespace shiftlab {

// Dense symmetric matrix of rationals; writes mirror automatically.
class SymRationalMatrix {
 public:
  explicit SymRationalMatrix(long n) : n_(n), a_(n * n) {}

  long size() const { return n_; }
  const Rational& at(long i, long j) const { return a_[i * n_ + j]; }
  void set(long i, long j, const Rational& v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  // Construction from full row-major data; throws DomainError when the
  // data is not symmetric.
  static SymRationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

 private:
  long n_;
  std::vector<Rational> a_;
};

// Moment Hankel block H(n,k) with entries gamma_{n+i+j}, i,j = 0..k.
struct HankelMatrix {
  long base_n = 0;
  long order_k = 1;
  std::vector<Rational> gamma;  // gamma_n .. gamma_{n+2k}

  long size() const { return order_k + 1; }
  const Rational& entry(long i, long j) const { return gamma[i + j]; }
  SymRationalMatrix matrix() const;
  std::string to_csv() const;
};

// Requires exactly rational moments; k is capped by hankel_cap.
HankelMatrix hankel_matrix(const MomentSequence& moments, long n, long k,
                           long hankel_cap);

// Exact positive-semidefiniteness via fraction LDL^T with symmetric
// pivoting on the largest remaining diagonal entry.
bool is_psd_exact(const SymRationalMatrix& m);

// H(n,k) positive semidefinite for all 0 <= n <= N, 1 <= k <= K; when
// sum_cap >= 0 only cells with n + k <= sum_cap are tested. Fail carries
// the minimal violating cell in (n, k) lexicographic order (witness.n,
// witness.k).
Verdict bram_halmos_verdict(const SequenceDef& weights, long N, long K,
                            long hankel_cap, const EvalOptions& opt,
                            long sum_cap = -1);

enum class PsdProbe { PSD, NOT_PSD, UNDECIDED };

std::string to_string(PsdProbe p);

// Entrywise p-th powers of H(n,k): exact LDL^T for integer p, adaptive
// interval LDL^T otherwise (UNDECIDED when a pivot straddles zero at
// every precision up to the cap).
std::vector<std::pair<Rational, PsdProbe>> schur_power_psd_probe(
    const MomentSequence& moments, const std::vector<Rational>& p_list, long n,
    long k, long hankel_cap, const EvalOptions& opt);

}  // namespace shiftlab
