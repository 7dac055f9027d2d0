#include "shiftlab/hankel.hpp"

#include <sstream>

#include "shiftlab/errors.hpp"

namespace shiftlab {

SymRationalMatrix SymRationalMatrix::from_rows(
    const std::vector<std::vector<Rational>>& rows) {
  const long n = static_cast<long>(rows.size());
  SymRationalMatrix m(n);
  for (long i = 0; i < n; ++i) {
    if (static_cast<long>(rows[i].size()) != n)
      throw DomainError("matrix rows must form a square matrix");
    for (long j = 0; j < n; ++j) m.a_[i * n + j] = rows[i][j];
  }
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (m.at(i, j) != m.at(j, i))
        throw DomainError("matrix is not symmetric");
  return m;
}

SymRationalMatrix HankelMatrix::matrix() const {
  SymRationalMatrix m(size());
  for (long i = 0; i < size(); ++i)
    for (long j = i; j < size(); ++j) m.set(i, j, entry(i, j));
  return m;
}

std::string HankelMatrix::to_csv() const {
  std::ostringstream os;
  for (long i = 0; i < size(); ++i) {
    for (long j = 0; j < size(); ++j)
      os << (j ? "," : "") << entry(i, j).to_string();
    os << "\n";
  }
  return os.str();
}

HankelMatrix hankel_matrix(const MomentSequence& moments, long n, long k,
                           long hankel_cap) {
  if (n < 0 || k < 1) throw DomainError("hankel_matrix requires n >= 0, k >= 1");
  if (k > hankel_cap)
    throw DomainError("hankel block order k exceeds the configured cap (" +
                      std::to_string(hankel_cap) + ")");
  HankelMatrix h;
  h.base_n = n;
  h.order_k = k;
  h.gamma.reserve(2 * k + 1);
  for (long i = 0; i <= 2 * k; ++i) {
    auto q = moments.exact(n + i);
    if (!q) throw DomainError("hankel matrices need exactly rational moments");
    h.gamma.push_back(*q);
  }
  return h;
}

bool is_psd_exact(const SymRationalMatrix& m) {
  const long n = m.size();
  if (n == 0) return true;
  // working copy
  std::vector<Rational> a(n * n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) a[i * n + j] = m.at(i, j);
  std::vector<long> active;
  for (long i = 0; i < n; ++i) active.push_back(i);

  while (!active.empty()) {
    // symmetric pivoting: largest remaining diagonal entry
    long p = active[0];
    for (long i : active)
      if (a[i * n + i] > a[p * n + p]) p = i;
    const Rational pivot = a[p * n + p];
    if (pivot.sgn() < 0) return false;
    if (pivot.is_zero()) {
      // all remaining diagonals are <= 0; PSD forces an all-zero block
      for (long i : active) {
        if (a[i * n + i].sgn() < 0) return false;
        for (long j : active)
          if (!a[i * n + j].is_zero()) return false;
      }
      return true;
    }
    std::vector<long> rest;
    for (long i : active)
      if (i != p) rest.push_back(i);
    for (size_t x = 0; x < rest.size(); ++x) {
      const long i = rest[x];
      for (size_t y = x; y < rest.size(); ++y) {
        const long j = rest[y];
        const Rational v = a[i * n + j] - a[i * n + p] * a[p * n + j] / pivot;
        a[i * n + j] = v;
        a[j * n + i] = v;
      }
    }
    active = std::move(rest);
  }
  return true;
}

Verdict bram_halmos_verdict(const SequenceDef& weights, long N, long K,
                            long hankel_cap, const EvalOptions& opt,
                            long sum_cap) {
  if (N < 0 || K < 1) throw DomainError("bram-halmos requires N >= 0, K >= 1");
  (void)opt;
  MomentSequence moments(weights);
  Verdict v;
  v.tested_order = K;
  v.tested_window = N;
  for (long n = 0; n <= N; ++n) {
    for (long k = 1; k <= K; ++k) {
      if (sum_cap >= 0 && n + k > sum_cap) continue;
      const HankelMatrix h = hankel_matrix(moments, n, k, hankel_cap);
      if (!is_psd_exact(h.matrix())) {
        v.status = Verdict::Status::Fail;
        Witness w;
        w.n = n;
        w.k = k;
        w.sign = Sign::Negative;
        w.value = "H(" + std::to_string(n) + "," + std::to_string(k) +
                  ") is not positive semidefinite";
        v.witness = w;
        return v;
      }
    }
  }
  v.status = Verdict::Status::Pass;
  return v;
}

std::string to_string(PsdProbe p) {
  switch (p) {
    case PsdProbe::PSD: return "psd";
    case PsdProbe::NOT_PSD: return "not_psd";
    default: return "undecided";
  }
}

namespace {

PsdProbe interval_psd(std::vector<std::vector<Interval>> a) {
  const long n = static_cast<long>(a.size());
  std::vector<long> active;
  for (long i = 0; i < n; ++i) active.push_back(i);

  while (!active.empty()) {
    // any provably negative diagonal refutes
    for (long i : active)
      if (a[i][i].sign() == Sign::Negative) return PsdProbe::NOT_PSD;
    // pivot: provably positive diagonal with the largest midpoint
    long p = -1;
    double best = 0;
    for (long i : active) {
      if (a[i][i].sign() == Sign::Positive) {
        const double mid = a[i][i].midpoint_double();
        if (p < 0 || mid > best) {
          p = i;
          best = mid;
        }
      }
    }
    if (p < 0) {
      // remaining diagonals straddle zero: only an exactly zero block
      // could still be PSD, and intervals cannot certify that
      bool all_exact_zero = true;
      for (long i : active)
        for (long j : active)
          all_exact_zero = all_exact_zero && a[i][j].sign() == Sign::Zero;
      return all_exact_zero ? PsdProbe::PSD : PsdProbe::UNDECIDED;
    }
    std::vector<long> rest;
    for (long i : active)
      if (i != p) rest.push_back(i);
    for (size_t x = 0; x < rest.size(); ++x) {
      const long i = rest[x];
      for (size_t y = x; y < rest.size(); ++y) {
        const long j = rest[y];
        const Interval v = a[i][j] - a[i][p] * a[p][j] / a[p][p];
        a[i][j] = v;
        a[j][i] = v;
      }
    }
    active = std::move(rest);
  }
  return PsdProbe::PSD;
}

}  // namespace

std::vector<std::pair<Rational, PsdProbe>> schur_power_psd_probe(
    const MomentSequence& moments, const std::vector<Rational>& p_list, long n,
    long k, long hankel_cap, const EvalOptions& opt) {
  const HankelMatrix h = hankel_matrix(moments, n, k, hankel_cap);
  for (long i = 0; i <= 2 * k; ++i)
    if (h.gamma[i].sgn() <= 0)
      throw DomainError("schur power probe requires positive moments");

  std::vector<std::pair<Rational, PsdProbe>> out;
  out.reserve(p_list.size());
  const long m = h.size();
  for (const auto& p : p_list) {
    if (p.sgn() < 0) throw DomainError("schur power probe requires p >= 0");
    if (p.is_integer() && p.numerator().fits_slong_p()) {
      const long e = p.numerator().get_si();
      SymRationalMatrix mm(m);
      for (long i = 0; i < m; ++i)
        for (long j = i; j < m; ++j) mm.set(i, j, h.entry(i, j).pow(e));
      out.emplace_back(p, is_psd_exact(mm) ? PsdProbe::PSD : PsdProbe::NOT_PSD);
      continue;
    }
    PsdProbe res = PsdProbe::UNDECIDED;
    for (long bits = opt.start_bits; bits <= opt.max_bits; bits *= 2) {
      if (opt.stats) opt.stats->note_bits(bits);
      std::vector<std::vector<Interval>> a(m, std::vector<Interval>(m, Interval(bits)));
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j)
          a[i][j] = Interval::from_rational(h.entry(i, j), bits).pow_rational(p);
      try {
        res = interval_psd(std::move(a));
      } catch (const PrecisionLoss&) {
        res = PsdProbe::UNDECIDED;
      }
      if (res != PsdProbe::UNDECIDED) break;
    }
    out.emplace_back(p, res);
  }
  return out;
}

}  // namespace shiftlab
