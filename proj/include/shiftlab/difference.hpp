#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/config.hpp"
#include "shiftlab/moments.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

struct EvalStats {
  std::atomic<long> max_bits_used{0};
  std::atomic<long> undecided_cells{0};
  void note_bits(long b) {
    long cur = max_bits_used.load();
    while (cur < b && !max_bits_used.compare_exchange_weak(cur, b)) {
    }
  }
};

struct EvalOptions {
  long start_bits = 256;
  long max_bits = 4096;
  bool parallel = false;
  EvalStats* stats = nullptr;

  static EvalOptions from_config(const Config& c) {
    EvalOptions o;
    o.start_bits = c.start_bits;
    o.max_bits = c.max_bits;
    return o;
  }
};

// A stream of terms feeding the forward-difference engine. Sequence
// values, their logarithms and moment sequences all adapt to this;
// tests can plug in custom sources.
class TermSource {
 public:
  virtual ~TermSource() = default;
  // value as rational + log-combination, when exactly representable
  virtual std::optional<ExactReal> exact_form(long n) const = 0;
  // enclosure at the given precision; may throw PrecisionLoss
  virtual Interval enclosure(long n, long bits) const = 0;
};

// term(n) of a sequence
class ValueSource final : public TermSource {
 public:
  explicit ValueSource(SequenceDef s) : s_(std::move(s)) {}
  std::optional<ExactReal> exact_form(long n) const override;
  Interval enclosure(long n, long bits) const override;

 private:
  SequenceDef s_;
};

// scale * ln(term(n)) of a sequence; scale 2 gives logs of squares
class LogSource final : public TermSource {
 public:
  explicit LogSource(SequenceDef s, Rational scale = Rational(1))
      : s_(std::move(s)), scale_(std::move(scale)) {}
  std::optional<ExactReal> exact_form(long n) const override;
  Interval enclosure(long n, long bits) const override;

 private:
  SequenceDef s_;
  Rational scale_;
};

// gamma_n of a weight sequence
class MomentSource final : public TermSource {
 public:
  explicit MomentSource(SequenceDef weights) : m_(std::move(weights)) {}
  const MomentSequence& moments() const { return m_; }
  std::optional<ExactReal> exact_form(long n) const override;
  Interval enclosure(long n, long bits) const override;

 private:
  MomentSequence m_;
};

// nabla^k src(n) = sum_{i=0}^k (-1)^i C(k,i) src(n+i), exact path;
// nullopt when some term lacks an exact form.
std::optional<ExactReal> difference_cell_exact(const TermSource& src, long k, long n);

// interval path at fixed precision; may throw PrecisionLoss
Interval difference_cell_interval(const TermSource& src, long k, long n, long bits);

// public per-spec operation: exact rational when the sequence is
// rational-valued; enclosure otherwise (escalated past PrecisionLoss).
Value difference(const SequenceDef& s, long k, long n, const EvalOptions& opt);

struct DifferenceTable {
  long K = 0;
  long N = 0;
  // entries[k][n] for 0 <= k <= K, 0 <= n <= N
  std::vector<std::vector<Value>> entries;
  std::string to_csv() const;  // header k,n,value
  nlohmann::json to_json() const;
};

DifferenceTable difference_table(const SequenceDef& s, long K, long N,
                                 const EvalOptions& opt);

// nabla^k ln s(n): an exact combination for sequences whose term logs are
// exactly representable, otherwise a flagged interval expression.
struct LogDifference {
  std::optional<ExactReal> exact;
  std::optional<Expr> fallback;
  bool interval_fallback() const { return !exact.has_value(); }
  Sign sign(const EvalOptions& opt) const;
};

LogDifference log_difference(const SequenceDef& s, long k, long n);

}  // namespace shiftlab
