#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shiftlab/expr.hpp"
#include "shiftlab/log_combination.hpp"

namespace shiftlab {

enum class ValueClass { Rational, Transcendental };

// Exact value (rational); interval enclosure otherwise.
using Value = std::variant<Rational, Interval>;

std::string value_to_string(const Value& v);

// Numeric channels available for a single sequence term. `expr` is
// always usable; the optional exact channels are populated whenever the
// term's structure supports them:
//   exact      - the value is this rational
//   value_form - the value equals q + sum e_i ln b_i
//   log_form   - ln(value) equals q + sum e_i ln b_i  (positive terms
//                that are products of rational powers, or exponentials
//                of exact forms)
struct TermChannels {
  std::optional<Rational> exact;
  std::optional<ExactReal> value_form;
  std::optional<ExactReal> log_form;
  Expr expr;

  static TermChannels rational(const Rational& r);
  // term = exp(log_form)
  static TermChannels from_log_form(const ExactReal& lf, Expr e);
  // term = value_form (not necessarily positive-product shaped)
  static TermChannels from_value_form(const ExactReal& vf, Expr e);
  static TermChannels opaque(Expr e);
};

// ---- transform tags -------------------------------------------------

struct SchurPowerTag { Rational p; };                  // p > 0
struct AluthgeTag {};
struct AluthgeIterTag { long m = 1; };                 // m >= 0
struct GeneralizedMeanTag { Rational t; };             // 0 <= t <= 1/2
struct CesaroTag {};
struct GeometricCesaroTag {};
struct CesaroWindowTag { long k = 1; };                // k >= 1
struct GeometricCesaroWindowTag { long k = 1; };       // k >= 1
struct ReciprocalTag {};
struct RestrictionTag { long r = 0; };                 // r >= 0
struct PerturbZerothTag {
  Rational new_alpha0;
  bool allow_increase = false;
};
struct ExpNormalizedTag {};
struct ExpMomentTag {};

using TransformTag =
    std::variant<SchurPowerTag, AluthgeTag, AluthgeIterTag, GeneralizedMeanTag,
                 CesaroTag, GeometricCesaroTag, CesaroWindowTag,
                 GeometricCesaroWindowTag, ReciprocalTag, RestrictionTag,
                 PerturbZerothTag, ExpNormalizedTag, ExpMomentTag>;

std::string transform_name(const TransformTag& tag);

// Structural bound certificates for a positive sequence, derived from
// family closed forms and transform rules; `le_one`/`ge_one` are proofs
// valid for every index, not window observations.
struct BoundAnalysis {
  bool le_one = false;
  bool ge_one = false;
  bool nondecreasing = false;
  std::optional<Rational> sup_exact;  // exact rational supremum when known
  std::optional<Expr> sup_expr;       // enclosable supremum otherwise
};

namespace detail {
struct SeqNode;
}

// Immutable description of a positive sequence: closed-form family,
// explicit prefix with a tail rule, or a transform of another sequence.
class SequenceDef {
 public:
  // families
  static SequenceDef agler(long j);                         // j >= 1
  static SequenceDef sabcd(const Rational& a, const Rational& b,
                           const Rational& c, const Rational& d);  // ad > bc
  static SequenceDef geometric_gap(std::vector<Rational> ps);      // 0 < p < 1
  static SequenceDef euler();
  static SequenceDef dirichlet();
  static SequenceDef unilateral();
  static SequenceDef constant(const Rational& c);                  // c > 0
  static SequenceDef power_of(const SequenceDef& base, long m);    // integer m
  // explicit prefix; default tail is constant at the last prefix entry.
  // The tail sequence is evaluated at n - prefix_size.
  static SequenceDef explicit_seq(std::vector<Rational> prefix,
                                  std::optional<SequenceDef> tail = {});
  // used by transforms::apply after validating the tag
  static SequenceDef transformed(TransformTag tag, const SequenceDef& inner);

  TermChannels term(long n) const;
  // exact rational when the sequence is rational-valued; otherwise an
  // enclosure escalated until provably positive (PrecisionExhausted when
  // positivity cannot be certified at max_bits).
  Value value(long n, long start_bits, long max_bits) const;

  ValueClass value_class() const;
  BoundAnalysis bounds() const;

  std::string describe() const;
  nlohmann::json to_json() const;
  static SequenceDef from_json(const nlohmann::json& j);

  const detail::SeqNode& node() const { return *node_; }

 private:
  explicit SequenceDef(std::shared_ptr<const detail::SeqNode> n)
      : node_(std::move(n)) {}
  std::shared_ptr<const detail::SeqNode> node_;
};

// Harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0), memoized.
const Rational& harmonic(long n);

}  // namespace shiftlab
