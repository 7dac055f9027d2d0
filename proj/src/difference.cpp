#include "shiftlab/difference.hpp"

#include <sstream>

#include "shiftlab/binomial.hpp"
#include "shiftlab/errors.hpp"

namespace shiftlab {

std::optional<ExactReal> ValueSource::exact_form(long n) const {
  return s_.term(n).value_form;
}

Interval ValueSource::enclosure(long n, long bits) const {
  const TermChannels t = s_.term(n);
  if (t.value_form) return t.value_form->enclosure(bits);
  return t.expr.eval(bits);
}

std::optional<ExactReal> LogSource::exact_form(long n) const {
  const auto lf = s_.term(n).log_form;
  if (!lf) return std::nullopt;
  return lf->scaled(scale_);
}

Interval LogSource::enclosure(long n, long bits) const {
  const TermChannels t = s_.term(n);
  if (t.log_form) return t.log_form->enclosure(bits).scaled(scale_);
  return t.expr.eval(bits).ln_().scaled(scale_);
}

std::optional<ExactReal> MomentSource::exact_form(long n) const {
  if (auto q = m_.exact(n)) return ExactReal(*q);
  return std::nullopt;
}

Interval MomentSource::enclosure(long n, long bits) const {
  return m_.enclosure(n, bits);
}

std::optional<ExactReal> difference_cell_exact(const TermSource& src, long k, long n) {
  const auto& row = binomial_row(static_cast<unsigned>(k));
  ExactReal acc;
  for (long i = 0; i <= k; ++i) {
    const auto f = src.exact_form(n + i);
    if (!f) return std::nullopt;
    const Rational c = (i % 2 == 0) ? Rational(row[i]) : -Rational(row[i]);
    acc = acc + f->scaled(c);
  }
  return acc;
}

Interval difference_cell_interval(const TermSource& src, long k, long n, long bits) {
  const auto& row = binomial_row(static_cast<unsigned>(k));
  Interval acc(bits);
  for (long i = 0; i <= k; ++i) {
    const Rational c = (i % 2 == 0) ? Rational(row[i]) : -Rational(row[i]);
    acc = acc + src.enclosure(n + i, bits).scaled(c);
  }
  return acc;
}

Value difference(const SequenceDef& s, long k, long n, const EvalOptions& opt) {
  if (k < 0 || n < 0) throw DomainError("difference requires k, n >= 0");
  ValueSource src(s);
  if (auto cell = difference_cell_exact(src, k, n)) {
    if (auto q = cell->as_rational()) return *q;
    return cell->enclosure(opt.start_bits);
  }
  for (long bits = opt.start_bits; bits <= opt.max_bits; bits *= 2) {
    try {
      return difference_cell_interval(src, k, n, bits);
    } catch (const PrecisionLoss&) {
      // escalate
    }
  }
  throw PrecisionExhausted("difference enclosure failed at maximum precision");
}

DifferenceTable difference_table(const SequenceDef& s, long K, long N,
                                 const EvalOptions& opt) {
  if (K < 0 || N < 0) throw DomainError("difference_table requires K, N >= 0");
  DifferenceTable out;
  out.K = K;
  out.N = N;

  // Row 0 holds terms n = 0..N+K; each next row is built by the
  // recurrence entry(k+1, n) = entry(k, n) - entry(k, n+1).
  ValueSource src(s);
  const long width = N + K + 1;
  bool all_exact = true;
  std::vector<std::optional<ExactReal>> forms(width);
  for (long n = 0; n < width; ++n) {
    forms[n] = src.exact_form(n);
    all_exact = all_exact && forms[n].has_value();
  }

  if (all_exact) {
    std::vector<ExactReal> row(width);
    for (long n = 0; n < width; ++n) row[n] = *forms[n];
    for (long k = 0; k <= K; ++k) {
      std::vector<Value> vrow;
      vrow.reserve(N + 1);
      for (long n = 0; n <= N; ++n) {
        if (auto q = row[n].as_rational())
          vrow.emplace_back(*q);
        else
          vrow.emplace_back(row[n].enclosure(opt.start_bits));
      }
      out.entries.push_back(std::move(vrow));
      if (k == K) break;
      for (long n = 0; n + 1 < static_cast<long>(row.size()); ++n)
        row[n] = row[n] - row[n + 1];
      row.pop_back();
    }
    return out;
  }

  // interval rows at the configured starting precision, escalating only
  // past domain-related precision loss
  long bits = opt.start_bits;
  for (;;) {
    try {
      std::vector<Interval> row;
      row.reserve(width);
      for (long n = 0; n < width; ++n) row.push_back(src.enclosure(n, bits));
      out.entries.clear();
      for (long k = 0; k <= K; ++k) {
        std::vector<Value> vrow;
        vrow.reserve(N + 1);
        for (long n = 0; n <= N; ++n) vrow.emplace_back(row[n]);
        out.entries.push_back(std::move(vrow));
        if (k == K) break;
        std::vector<Interval> next;
        next.reserve(row.size() - 1);
        for (long n = 0; n + 1 < static_cast<long>(row.size()); ++n)
          next.push_back(row[n] - row[n + 1]);
        row = std::move(next);
      }
      return out;
    } catch (const PrecisionLoss&) {
      bits *= 2;
      if (bits > opt.max_bits)
        throw PrecisionExhausted("difference table enclosure failed at maximum precision");
    }
  }
}

std::string DifferenceTable::to_csv() const {
  std::ostringstream os;
  os << "k,n,value\n";
  for (long k = 0; k < static_cast<long>(entries.size()); ++k)
    for (long n = 0; n < static_cast<long>(entries[k].size()); ++n)
      os << k << "," << n << "," << value_to_string(entries[k][n]) << "\n";
  return os.str();
}

nlohmann::json DifferenceTable::to_json() const {
  nlohmann::json cells = nlohmann::json::array();
  for (long k = 0; k < static_cast<long>(entries.size()); ++k)
    for (long n = 0; n < static_cast<long>(entries[k].size()); ++n) {
      const Value& v = entries[k][n];
      nlohmann::json cell{{"k", k}, {"n", n}};
      if (std::holds_alternative<Rational>(v)) {
        cell["value"] = std::get<Rational>(v).to_string();
      } else {
        const auto& iv = std::get<Interval>(v);
        const auto [lo, hi] = iv.to_decimal_strings();
        cell["value"] = {{"lo", lo}, {"hi", hi}, {"bits", static_cast<long>(iv.precision())}};
      }
      cells.push_back(std::move(cell));
    }
  return nlohmann::json{{"K", K}, {"N", N}, {"entries", cells}};
}

LogDifference log_difference(const SequenceDef& s, long k, long n) {
  if (k < 0 || n < 0) throw DomainError("log_difference requires k, n >= 0");
  LogDifference out;
  LogSource src(s);
  out.exact = difference_cell_exact(src, k, n);
  if (!out.exact) {
    const auto& row = binomial_row(static_cast<unsigned>(k));
    Expr acc = Expr::constant(0);
    for (long i = 0; i <= k; ++i) {
      const Rational c = (i % 2 == 0) ? Rational(row[i]) : -Rational(row[i]);
      acc = acc + Expr::constant(c) * Expr::ln(s.term(n + i).expr);
    }
    out.fallback = acc;
  }
  return out;
}

Sign LogDifference::sign(const EvalOptions& opt) const {
  if (exact) return exact->sign(opt.start_bits, opt.max_bits);
  return sign_adaptive(*fallback, opt.start_bits, opt.max_bits);
}

}  // namespace shiftlab
