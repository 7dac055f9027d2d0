#pragma once

#include "shiftlab/difference.hpp"
#include "shiftlab/verdict.hpp"

namespace shiftlab {

// Which inequality every grid cell must satisfy.
enum class CellTest { NonPositive, NonNegative };

// Sweeps nabla^k src(n) over k in [k_lo, K], n in [0, N] and folds the
// cell signs into a verdict. Exact forms are decided exactly; remaining
// cells go through adaptive-precision intervals. Fail witnesses are
// lexicographically minimal in (k, n) among decided cells, and
// undecided cells never mask a decided violation.
Verdict sweep_verdict(const TermSource& src, long k_lo, long K, long N,
                      CellTest test, const EvalOptions& opt);

Verdict k_alternating_verdict(const SequenceDef& s, long k, long N,
                              const EvalOptions& opt);
Verdict completely_alternating_verdict(const SequenceDef& s, long K, long N,
                                       const EvalOptions& opt);
Verdict completely_monotone_verdict(const SequenceDef& s, long K, long N,
                                    const EvalOptions& opt);
Verdict log_completely_alternating_verdict(const SequenceDef& s, long K, long N,
                                           const EvalOptions& opt);

// Moment infinite divisibility for a contractive weight sequence: the
// log-difference grid of the squared weights must stay nonpositive.
// Throws ContractivityError when no contractivity certificate exists and
// the window verification (nondecreasing, bounded by 1) fails.
Verdict mid_verdict(const SequenceDef& weights, long K, long N,
                    const EvalOptions& opt);

// nabla^order gamma(m) >= 0 for 0 <= m <= M.
Verdict n_contractive_verdict(const SequenceDef& weights, long order, long M,
                              const EvalOptions& opt);

// Moment sequence completely alternating on the grid; on pass the
// weights >= 1 side condition is verified on the window.
Verdict hyperexpansive_verdict(const SequenceDef& weights, long K, long N,
                               const EvalOptions& opt);

// Smallest-order violation search with a doubling window. Returns the
// largest order k such that rows 1..k stayed nonpositive on the final
// window, and the witness at order k+1.
OrderReport alternating_order(const SequenceDef& s, long K_max, long N_start,
                              long window_cap, const EvalOptions& opt);

struct ExpansivityPoint {
  Rational p;
  std::string value;
  Sign sign = Sign::Undecided;
  std::optional<bool> satisfied;  // value <= 0; empty when undecided
};

// f(p) = 1 - 2 a0sq^p + (a0sq*a1sq)^p for each p; exact for integer p.
std::vector<ExpansivityPoint> expansivity_power_profile(
    const Rational& a0sq, const Rational& a1sq, const std::vector<Rational>& ps,
    const EvalOptions& opt);

}  // namespace shiftlab
