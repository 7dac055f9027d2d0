#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "shiftlab/difference.hpp"
#include "shiftlab/verdict.hpp"

namespace shiftlab {

// Finitely many atoms on [0,1].
struct AtomicMeasure {
  std::vector<std::pair<Rational, Rational>> atoms;  // (location, mass > 0)
};

// Density sum_j c_j t^j on [0,1]. Nonnegativity of the density on [0,1]
// is the caller's responsibility and is not enforced here.
struct PolyDensityMeasure {
  std::vector<Rational> coeffs;  // c_0 .. c_d
};

// Density (1/Gamma(q)) (-ln u)^{q-1} on (0,1), q > 0.
struct LogPowerMeasure {
  Rational q;
};

using Measure = std::variant<AtomicMeasure, PolyDensityMeasure, LogPowerMeasure>;

Measure measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const Measure& m);
std::string describe(const Measure& m);

struct LevyKhintchinTriple {
  Rational a;
  Rational b;
  Measure mu;
};

// psi(n) = a + b n + integral of (1 - t^{n+index_offset}) dmu, with the
// convention t^0 = 1 (so the integral term vanishes when the exponent is
// zero). Exact for atomic and polynomial-density measures; the log-power
// kind is a Berger measure only and is rejected here.
Rational lk_sequence(const LevyKhintchinTriple& t, long n, long index_offset = 0);

// Triple (a = 1/j, b = 0, density (j-1) t^{j-1}) whose sequence equals
// (n+1)/(n+j) for all n; requires j >= 2.
LevyKhintchinTriple agler_lk_triple(long j);

// integral of t^n dmu: exact for atomic and polynomial densities; for
// log_power(q) equal to (n+1)^{-q}, exact when q is a positive integer
// and an interval enclosure otherwise.
Value berger_moment(const Measure& m, long n, const EvalOptions& opt);

// gamma_n(weights) == berger_moment(m, n) for 0 <= n <= N: exact equality
// on rational paths, interval overlap with both widths below
// 2^-tolerance_bits otherwise.
Verdict moment_match_verdict(const SequenceDef& weights, const Measure& m,
                             long N, long tolerance_bits, const EvalOptions& opt);

}  // namespace shiftlab
