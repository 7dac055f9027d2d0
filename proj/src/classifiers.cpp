#include "shiftlab/classifiers.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {

bool violates(Sign s, CellTest test) {
  return test == CellTest::NonPositive ? s == Sign::Positive : s == Sign::Negative;
}

struct Cell {
  long k;
  long n;
};

bool lex_less(const Cell& a, const Cell& b) {
  return a.k != b.k ? a.k < b.k : a.n < b.n;
}

std::string interval_witness_string(const Interval& iv) {
  const auto [lo, hi] = iv.to_decimal_strings();
  return "[" + lo + ", " + hi + "] @" + std::to_string(iv.precision()) + "b";
}

std::string exact_witness_string(const ExactReal& v, const EvalOptions& opt) {
  if (auto q = v.as_rational()) return q->to_string();
  return v.to_string() + " ~ " + interval_witness_string(v.enclosure(opt.start_bits));
}

}  // namespace

Verdict sweep_verdict(const TermSource& src, long k_lo, long K, long N,
                      CellTest test, const EvalOptions& opt) {
  if (k_lo < 0 || K < k_lo || N < 0)
    throw DomainError("sweep grid requires 0 <= k_lo <= K and N >= 0");

  Verdict out;
  out.tested_order = K;
  out.tested_window = N;

  const long width = N + K + 1;
  std::vector<std::optional<ExactReal>> forms(width);
  for (long n = 0; n < width; ++n) forms[n] = src.exact_form(n);

  auto cell_is_exact = [&](const Cell& c) {
    for (long i = 0; i <= c.k; ++i)
      if (!forms[c.n + i]) return false;
    return true;
  };

  std::vector<Cell> exact_cells, deferred;
  for (long k = k_lo; k <= K; ++k)
    for (long n = 0; n <= N; ++n) {
      const Cell c{k, n};
      (cell_is_exact(c) ? exact_cells : deferred).push_back(c);
    }

  std::optional<Cell> fail_cell;
  std::optional<ExactReal> fail_exact_value;
  std::optional<Interval> fail_interval_value;
  std::vector<Cell> undecided;

  auto exact_sign_of = [&](const Cell& c) -> std::pair<Sign, ExactReal> {
    ExactReal cell = *difference_cell_exact(src, c.k, c.n);
    return {cell.sign(opt.start_bits, opt.max_bits), std::move(cell)};
  };

  if (!opt.parallel) {
    for (const Cell& c : exact_cells) {
      auto [s, v] = exact_sign_of(c);
      if (violates(s, test)) {
        fail_cell = c;
        fail_exact_value = std::move(v);
        break;
      }
      if (s == Sign::Undecided) undecided.push_back(c);
    }
  } else {
    const size_t nthreads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Sign> signs(exact_cells.size());
    std::vector<std::future<void>> jobs;
    const size_t chunk = (exact_cells.size() + nthreads - 1) / std::max<size_t>(nthreads, 1);
    for (size_t start = 0; start < exact_cells.size(); start += chunk) {
      const size_t stop = std::min(start + chunk, exact_cells.size());
      jobs.push_back(std::async(std::launch::async, [&, start, stop] {
        for (size_t i = start; i < stop; ++i)
          signs[i] = exact_sign_of(exact_cells[i]).first;
      }));
    }
    for (auto& j : jobs) j.get();
    for (size_t i = 0; i < exact_cells.size(); ++i) {
      if (violates(signs[i], test)) {
        fail_cell = exact_cells[i];
        fail_exact_value = exact_sign_of(exact_cells[i]).second;
        break;
      }
      if (signs[i] == Sign::Undecided) undecided.push_back(exact_cells[i]);
    }
  }

  // Interval phase: only cells lexicographically before a known exact
  // violation can improve the witness.
  std::vector<Cell> pending;
  for (const Cell& c : deferred)
    if (!fail_cell || lex_less(c, *fail_cell)) pending.push_back(c);

  if (!pending.empty()) {
    for (long bits = opt.start_bits; !pending.empty() && bits <= opt.max_bits; bits *= 2) {
      if (opt.stats) opt.stats->note_bits(bits);
      // term enclosures needed this round
      std::vector<std::optional<Interval>> terms(width);
      auto term_at = [&](long n) -> const std::optional<Interval>& {
        if (!terms[n]) {
          try {
            terms[n] = src.enclosure(n, bits);
          } catch (const PrecisionLoss&) {
            // stays empty this round
          }
        }
        return terms[n];
      };

      std::vector<Cell> still;
      std::optional<Cell> round_fail;
      std::optional<Interval> round_fail_value;
      for (const Cell& c : pending) {
        if (round_fail && !lex_less(c, *round_fail)) continue;
        bool have_all = true;
        for (long i = 0; i <= c.k && have_all; ++i) have_all = term_at(c.n + i).has_value();
        if (!have_all) {
          still.push_back(c);
          continue;
        }
        const auto& row = binomial_row(static_cast<unsigned>(c.k));
        Interval acc(bits);
        for (long i = 0; i <= c.k; ++i) {
          const Rational coeff = (i % 2 == 0) ? Rational(row[i]) : -Rational(row[i]);
          acc = acc + terms[c.n + i]->scaled(coeff);
        }
        const Sign s = acc.sign();
        if (violates(s, test)) {
          round_fail = c;
          round_fail_value = acc;
          continue;
        }
        if (s == Sign::Undecided) still.push_back(c);
      }
      if (round_fail) {
        // a decided interval violation beats any exact violation after it
        if (!fail_cell || lex_less(*round_fail, *fail_cell)) {
          fail_cell = round_fail;
          fail_exact_value.reset();
          fail_interval_value = round_fail_value;
        }
        // cells before the new witness that are still unresolved stay pending
        std::vector<Cell> before;
        for (const Cell& c : still)
          if (lex_less(c, *fail_cell)) before.push_back(c);
        pending = std::move(before);
      } else {
        pending = std::move(still);
      }
    }
    for (const Cell& c : pending) undecided.push_back(c);
  }

  std::sort(undecided.begin(), undecided.end(), lex_less);
  if (fail_cell) {
    out.status = Verdict::Status::Fail;
    Witness w;
    w.k = fail_cell->k;
    w.n = fail_cell->n;
    if (fail_exact_value) {
      w.value = exact_witness_string(*fail_exact_value, opt);
      w.sign = fail_exact_value->sign(opt.start_bits, opt.max_bits);
    } else {
      w.value = interval_witness_string(*fail_interval_value);
      w.sign = fail_interval_value->sign();
    }
    out.witness = w;
    for (const Cell& c : undecided)
      if (lex_less(c, *fail_cell)) out.undecided_cells.emplace_back(c.k, c.n);
  } else if (!undecided.empty()) {
    out.status = Verdict::Status::Undecided;
    for (const Cell& c : undecided) out.undecided_cells.emplace_back(c.k, c.n);
    if (opt.stats) opt.stats->undecided_cells += static_cast<long>(undecided.size());
  } else {
    out.status = Verdict::Status::Pass;
  }
  return out;
}

Verdict k_alternating_verdict(const SequenceDef& s, long k, long N,
                              const EvalOptions& opt) {
  if (k < 1) throw DomainError("k-alternating requires k >= 1");
  ValueSource src(s);
  Verdict v = sweep_verdict(src, k, k, N, CellTest::NonPositive, opt);
  v.tested_order = k;
  return v;
}

Verdict completely_alternating_verdict(const SequenceDef& s, long K, long N,
                                       const EvalOptions& opt) {
  if (K < 1) throw DomainError("completely alternating requires K >= 1");
  ValueSource src(s);
  return sweep_verdict(src, 1, K, N, CellTest::NonPositive, opt);
}

Verdict completely_monotone_verdict(const SequenceDef& s, long K, long N,
                                    const EvalOptions& opt) {
  if (K < 0) throw DomainError("completely monotone requires K >= 0");
  ValueSource src(s);
  return sweep_verdict(src, 0, K, N, CellTest::NonNegative, opt);
}

Verdict log_completely_alternating_verdict(const SequenceDef& s, long K, long N,
                                           const EvalOptions& opt) {
  if (K < 1) throw DomainError("log completely alternating requires K >= 1");
  LogSource src(s);
  return sweep_verdict(src, 1, K, N, CellTest::NonPositive, opt);
}

namespace {

// sign of (term - 1)
Sign term_vs_one(const TermChannels& t, const EvalOptions& opt) {
  if (t.exact) return (*t.exact - Rational(1)).sign();
  // for positive terms, sign(x - 1) = sign(ln x)
  if (t.log_form) return t.log_form->sign(opt.start_bits, opt.max_bits);
  if (t.value_form)
    return (*t.value_form - ExactReal(Rational(1))).sign(opt.start_bits, opt.max_bits);
  return sign_adaptive(t.expr - Expr::constant(1), opt.start_bits, opt.max_bits);
}

// sign of (next - cur) for positive terms
Sign step_sign(const TermChannels& cur, const TermChannels& next, const EvalOptions& opt) {
  if (cur.exact && next.exact) return (*next.exact - *cur.exact).sign();
  if (cur.log_form && next.log_form)
    return (*next.log_form - *cur.log_form).sign(opt.start_bits, opt.max_bits);
  if (cur.value_form && next.value_form)
    return (*next.value_form - *cur.value_form).sign(opt.start_bits, opt.max_bits);
  return sign_adaptive(next.expr - cur.expr, opt.start_bits, opt.max_bits);
}

}  // namespace

Verdict mid_verdict(const SequenceDef& weights, long K, long N,
                    const EvalOptions& opt) {
  if (K < 1) throw DomainError("mid verdict requires K >= 1");
  const BoundAnalysis b = weights.bounds();
  std::string cert;
  if (b.le_one) {
    cert = "contractive: family certificate sup <= 1";
  } else {
    // window verification: nondecreasing and bounded by 1 on [0, N+K]
    const long hi = N + K;
    TermChannels prev = weights.term(0);
    for (long n = 0; n <= hi; ++n) {
      const Sign le1 = term_vs_one(prev, opt);
      if (le1 == Sign::Positive || le1 == Sign::Undecided)
        throw ContractivityError(
            "weights are not verifiably bounded by 1 on the window (n=" +
            std::to_string(n) +
            "); normalize the shift by dividing the weights by their supremum "
            "and retry");
      if (n == hi) break;
      TermChannels next = weights.term(n + 1);
      const Sign st = step_sign(prev, next, opt);
      if (st == Sign::Negative || st == Sign::Undecided)
        throw ContractivityError(
            "weights are not verifiably nondecreasing on the window (n=" +
            std::to_string(n) +
            "); no contractivity certificate applies, normalize the shift and "
            "retry");
      prev = std::move(next);
    }
    cert = "contractive: verified nondecreasing and bounded by 1 on the window";
  }
  LogSource src(weights, Rational(2));  // logs of squared weights
  Verdict v = sweep_verdict(src, 1, K, N, CellTest::NonPositive, opt);
  v.note = cert;
  return v;
}

Verdict n_contractive_verdict(const SequenceDef& weights, long order, long M,
                              const EvalOptions& opt) {
  if (order < 1) throw DomainError("n-contractive requires order >= 1");
  MomentSource src(weights);
  Verdict v = sweep_verdict(src, order, order, M, CellTest::NonNegative, opt);
  v.tested_order = order;
  return v;
}

Verdict hyperexpansive_verdict(const SequenceDef& weights, long K, long N,
                               const EvalOptions& opt) {
  if (K < 1) throw DomainError("hyperexpansive verdict requires K >= 1");
  MomentSource src(weights);
  Verdict v = sweep_verdict(src, 1, K, N, CellTest::NonPositive, opt);
  if (!v.passed()) return v;
  // side condition implied by the alternating moments: every weight >= 1
  for (long n = 0; n <= N; ++n) {
    const Sign s = term_vs_one(weights.term(n), opt);
    if (s == Sign::Negative) {
      v.status = Verdict::Status::Fail;
      Witness w;
      w.k = 0;
      w.n = n;
      w.sign = s;
      w.value = "weight below 1";
      v.witness = w;
      v.note = "side condition failed: alpha_n >= 1";
      return v;
    }
  }
  v.note = "side condition verified: alpha_n >= 1 on the window";
  return v;
}

OrderReport alternating_order(const SequenceDef& s, long K_max, long N_start,
                              long window_cap, const EvalOptions& opt) {
  if (K_max < 1) throw DomainError("order search requires K_max >= 1");
  if (N_start < 0) throw DomainError("order search requires N_start >= 0");

  OrderReport report;
  report.order_cap = K_max;

  ValueSource src(s);
  long W = std::max<long>(N_start, 1);
  std::vector<long> scanned(K_max + 1, -1);

  for (;;) {
    for (long k = 1; k <= K_max; ++k) {
      for (long n = scanned[k] + 1; n <= W; ++n) {
        Sign sign = Sign::Undecided;
        std::string value;
        if (auto cell = difference_cell_exact(src, k, n)) {
          sign = cell->sign(opt.start_bits, opt.max_bits);
          if (auto q = cell->as_rational())
            value = q->to_string();
          else
            value = cell->to_string();
        } else {
          for (long bits = opt.start_bits; bits <= opt.max_bits; bits *= 2) {
            try {
              const Interval iv = difference_cell_interval(src, k, n, bits);
              sign = iv.sign();
              if (is_decided(sign)) {
                value = interval_witness_string(iv);
                break;
              }
            } catch (const PrecisionLoss&) {
            }
          }
        }
        if (sign == Sign::Undecided) {
          report.decided = false;
          report.window_used = W;
          return report;
        }
        if (sign == Sign::Positive) {
          report.decided = true;
          report.max_alternating_order = k - 1;
          Witness w;
          w.k = k;
          w.n = n;
          w.value = value;
          w.sign = sign;
          report.failure_witness = w;
          report.window_used = W;
          return report;
        }
      }
      scanned[k] = W;
    }
    if (W >= window_cap) {
      report.decided = false;
      report.window_used = W;
      return report;
    }
    W = std::min(W * 2, window_cap);
  }
}

std::vector<ExpansivityPoint> expansivity_power_profile(
    const Rational& a0sq, const Rational& a1sq, const std::vector<Rational>& ps,
    const EvalOptions& opt) {
  if (a0sq.sgn() <= 0 || a1sq.sgn() <= 0)
    throw DomainError("expansivity profile requires positive squared weights");
  std::vector<ExpansivityPoint> out;
  out.reserve(ps.size());
  const Rational prod = a0sq * a1sq;
  for (const auto& p : ps) {
    ExpansivityPoint pt;
    pt.p = p;
    if (p.is_integer() && p.numerator().fits_slong_p()) {
      const long e = p.numerator().get_si();
      const Rational v = Rational(1) - Rational(2) * a0sq.pow(e) + prod.pow(e);
      pt.value = v.to_string();
      pt.sign = v.sign();
      pt.satisfied = v.sgn() <= 0;
    } else {
      Expr f = Expr::constant(1) -
               Expr::constant(2) * Expr::pow(Expr::constant(a0sq), p) +
               Expr::pow(Expr::constant(prod), p);
      const Sign s = sign_adaptive(f, opt.start_bits, opt.max_bits);
      pt.sign = s;
      pt.value = interval_witness_string(f.eval(opt.start_bits));
      if (s != Sign::Undecided) pt.satisfied = (s != Sign::Positive);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace shiftlab
