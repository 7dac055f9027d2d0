#include "shiftlab/sequence.hpp"

#include <mutex>
#include <sstream>

#include "shiftlab/binomial.hpp"
#include "shiftlab/errors.hpp"
#include "shiftlab/transforms.hpp"

namespace shiftlab {

// ---- harmonic numbers ------------------------------------------------

const Rational& harmonic(long n) {
  if (n < 0) throw DomainError("harmonic index must be nonnegative");
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(0)};
  std::lock_guard lk(mu);
  while (static_cast<long>(cache.size()) <= n) {
    const long k = static_cast<long>(cache.size());
    cache.push_back(cache.back() + Rational(1, k));
  }
  return cache[n];
}

// ---- term channel constructors ----------------------------------------

namespace {

// e^{form} as an exact rational, when the shape allows it: a pure log
// part with integer exponents multiplies out; a pure rational part is
// rational only when it is zero.
std::optional<Rational> exp_as_rational(const ExactReal& form) {
  if (!form.rational_part().is_zero()) return std::nullopt;
  Rational out(1);
  for (const auto& t : form.log_part().terms()) {
    if (!t.exponent.is_integer() || !t.exponent.numerator().fits_slong_p())
      return std::nullopt;
    out *= t.base.pow(t.exponent.numerator().get_si());
  }
  return out;
}

}  // namespace

TermChannels TermChannels::rational(const Rational& r) {
  TermChannels t;
  t.exact = r;
  t.value_form = ExactReal(r);
  if (r.sgn() > 0) t.log_form = ExactReal(LogCombination::ln(r));
  t.expr = Expr::constant(r);
  return t;
}

TermChannels TermChannels::from_log_form(const ExactReal& lf, Expr e) {
  if (auto r = exp_as_rational(lf)) return rational(*r);
  TermChannels t;
  t.log_form = lf;
  t.expr = std::move(e);
  return t;
}

TermChannels TermChannels::from_value_form(const ExactReal& vf, Expr e) {
  if (auto r = vf.as_rational()) {
    if (r->sgn() > 0) return rational(*r);
  }
  TermChannels t;
  t.value_form = vf;
  t.expr = std::move(e);
  return t;
}

TermChannels TermChannels::opaque(Expr e) {
  TermChannels t;
  t.expr = std::move(e);
  return t;
}

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<Rational>(v)) return std::get<Rational>(v).to_string();
  const auto [lo, hi] = std::get<Interval>(v).to_decimal_strings();
  return "[" + lo + ", " + hi + "]";
}

// ---- node definition ---------------------------------------------------

namespace detail {

struct AglerFam { long j; };
struct SabcdFam { Rational a, b, c, d; };
struct GeometricGapFam { std::vector<Rational> ps; };
struct EulerFam {};
struct DirichletFam {};
struct UnilateralFam {};
struct ConstantFam { Rational c; };
struct PowerOfFam { SequenceDef base; long m; };
struct ExplicitSeq { std::vector<Rational> prefix; SequenceDef tail; };
struct TransformedSeq { TransformTag tag; SequenceDef inner; };

struct SeqNode {
  std::variant<AglerFam, SabcdFam, GeometricGapFam, EulerFam, DirichletFam,
               UnilateralFam, ConstantFam, PowerOfFam, ExplicitSeq,
               TransformedSeq>
      v;

  // prefix accumulators for the averaging transforms; grown lazily
  mutable std::mutex cache_mu;
  mutable std::vector<std::optional<ExactReal>> vf_psum;   // sum of value forms 0..n
  mutable std::vector<std::optional<ExactReal>> lf_psum;   // sum of log forms 0..n
  mutable std::vector<Expr> expr_psum;                     // sum of exprs 0..n
  mutable std::vector<Expr> expr_plnsum;                   // sum of ln(expr) 0..n
  mutable std::vector<std::optional<Rational>> gamma_exact;  // prod of squares 0..n-1
  mutable std::vector<Expr> gamma_expr;
};

}  // namespace detail

using detail::SeqNode;

namespace {

SequenceDef make_node(SeqNode node);

TermChannels term_of(const SeqNode& node, long n);

// channels of term^2
TermChannels squared_channels(const TermChannels& t) {
  if (t.exact) return TermChannels::rational(*t.exact * *t.exact);
  if (t.log_form)
    return TermChannels::from_log_form(t.log_form->scaled(Rational(2)),
                                       Expr::pow(t.expr, Rational(2)));
  return TermChannels::opaque(Expr::pow(t.expr, Rational(2)));
}

const Rational kHalf(1, 2);

}  // namespace

// ---- families ----------------------------------------------------------

SequenceDef SequenceDef::agler(long j) {
  if (j < 1) throw DomainError("agler family requires j >= 1");
  return make_node(SeqNode{detail::AglerFam{j}});
}

SequenceDef SequenceDef::sabcd(const Rational& a, const Rational& b,
                               const Rational& c, const Rational& d) {
  if (a.sgn() <= 0 || b.sgn() <= 0 || c.sgn() <= 0 || d.sgn() <= 0)
    throw DomainError("sabcd family requires positive parameters");
  if (!(a * d > b * c)) throw DomainError("sabcd family requires ad > bc");
  return make_node(SeqNode{detail::SabcdFam{a, b, c, d}});
}

SequenceDef SequenceDef::geometric_gap(std::vector<Rational> ps) {
  if (ps.empty()) throw DomainError("geometric_gap requires at least one p");
  for (const auto& p : ps)
    if (!(p > Rational(0) && p < Rational(1)))
      throw DomainError("geometric_gap requires 0 < p < 1");
  return make_node(SeqNode{detail::GeometricGapFam{std::move(ps)}});
}

SequenceDef SequenceDef::euler() { return make_node(SeqNode{detail::EulerFam{}}); }
SequenceDef SequenceDef::dirichlet() { return make_node(SeqNode{detail::DirichletFam{}}); }
SequenceDef SequenceDef::unilateral() { return make_node(SeqNode{detail::UnilateralFam{}}); }

SequenceDef SequenceDef::constant(const Rational& c) {
  if (c.sgn() <= 0) throw DomainError("constant sequence must be positive");
  return make_node(SeqNode{detail::ConstantFam{c}});
}

SequenceDef SequenceDef::power_of(const SequenceDef& base, long m) {
  return make_node(SeqNode{detail::PowerOfFam{base, m}});
}

SequenceDef SequenceDef::explicit_seq(std::vector<Rational> prefix,
                                      std::optional<SequenceDef> tail) {
  if (prefix.empty() && !tail)
    throw DomainError("explicit sequence requires a prefix or a tail");
  for (const auto& r : prefix)
    if (r.sgn() <= 0) throw DomainError("explicit weights must be positive");
  SequenceDef t = tail ? *tail : SequenceDef::constant(prefix.back());
  return make_node(SeqNode{detail::ExplicitSeq{std::move(prefix), std::move(t)}});
}

SequenceDef SequenceDef::transformed(TransformTag tag, const SequenceDef& inner) {
  return make_node(SeqNode{detail::TransformedSeq{std::move(tag), inner}});
}

namespace {

SequenceDef make_node(SeqNode node) {
  struct Access : SequenceDef {
    static SequenceDef wrap(std::shared_ptr<const SeqNode> n) {
      return SequenceDef(Access(std::move(n)));
    }
    explicit Access(std::shared_ptr<const SeqNode> n) : SequenceDef(std::move(n)) {}
  };
  auto p = std::make_shared<SeqNode>();
  p->v = std::move(node.v);
  return Access::wrap(std::move(p));
}

// ---- per-kind term evaluation -------------------------------------------

TermChannels agler_term(const detail::AglerFam& f, long n) {
  if (f.j == 1) return TermChannels::rational(Rational(1));
  const Rational r(mpz_class(n + 1), mpz_class(n + f.j));
  return TermChannels::from_log_form(
      ExactReal(LogCombination::ln(r, kHalf)),
      Expr::pow(Expr::constant(r), kHalf));
}

TermChannels sabcd_term(const detail::SabcdFam& f, long n) {
  const Rational nn(n);
  const Rational r = (f.a * nn + f.b) / (f.c * nn + f.d);
  return TermChannels::from_log_form(
      ExactReal(LogCombination::ln(r, kHalf)),
      Expr::pow(Expr::constant(r), kHalf));
}

TermChannels geometric_gap_term(const detail::GeometricGapFam& f, long n) {
  LogCombination logs;
  Expr e = Expr::constant(1);
  bool first = true;
  for (const auto& p : f.ps) {
    const Rational factor = Rational(1) - p.pow(2 * n + 2);
    logs = logs + LogCombination::ln(factor, kHalf);
    Expr fe = Expr::pow(Expr::constant(factor), kHalf);
    e = first ? fe : e * fe;
    first = false;
  }
  return TermChannels::from_log_form(ExactReal(std::move(logs)), std::move(e));
}

TermChannels euler_term(long n) {
  // H_{n+1} - ln(n+2), increasing to the Euler constant
  const ExactReal vf(harmonic(n + 1), LogCombination::ln(Rational(n + 2), Rational(-1)));
  Expr e = Expr::constant(harmonic(n + 1)) - Expr::ln(Expr::constant(n + 2));
  return TermChannels::from_value_form(vf, std::move(e));
}

TermChannels dirichlet_term(long n) {
  const Rational r(n + 2, n + 1);
  return TermChannels::from_log_form(
      ExactReal(LogCombination::ln(r, kHalf)),
      Expr::pow(Expr::constant(r), kHalf));
}

TermChannels power_of_term(const detail::PowerOfFam& f, long n) {
  const TermChannels t = f.base.term(n);
  if (t.exact) return TermChannels::rational(t.exact->pow(f.m));
  if (f.m == 0) return TermChannels::rational(Rational(1));
  if (t.log_form)
    return TermChannels::from_log_form(t.log_form->scaled(Rational(f.m)),
                                       Expr::pow(t.expr, Rational(f.m)));
  return TermChannels::opaque(Expr::pow(t.expr, Rational(f.m)));
}

TermChannels explicit_term(const detail::ExplicitSeq& f, long n) {
  const long len = static_cast<long>(f.prefix.size());
  if (n < len) return TermChannels::rational(f.prefix[n]);
  return f.tail.term(n - len);
}

// ---- transform term evaluation -------------------------------------------

TermChannels aluthge_like(const TermChannels& a, const TermChannels& b) {
  // sqrt(alpha_n * alpha_{n+1})
  Expr e = Expr::pow(a.expr * b.expr, kHalf);
  if (a.log_form && b.log_form)
    return TermChannels::from_log_form((*a.log_form + *b.log_form).scaled(kHalf),
                                       std::move(e));
  return TermChannels::opaque(std::move(e));
}

TermChannels mean_like(const TermChannels& a, const TermChannels& b,
                       const Rational& t) {
  if (t == kHalf) return aluthge_like(a, b);
  if (t.is_zero()) {
    Expr e = (a.expr + b.expr) * Expr::constant(kHalf);
    if (a.value_form && b.value_form)
      return TermChannels::from_value_form((*a.value_form + *b.value_form).scaled(kHalf),
                                           std::move(e));
    return TermChannels::opaque(std::move(e));
  }
  const Rational s = Rational(1) - t;
  Expr e = (Expr::pow(a.expr, s) * Expr::pow(b.expr, t) +
            Expr::pow(a.expr, t) * Expr::pow(b.expr, s)) *
           Expr::constant(kHalf);
  return TermChannels::opaque(std::move(e));
}

// Grows the node's prefix caches so indices 0..n are available.
void grow_prefix_cache(const SeqNode& node, const SequenceDef& inner, long n) {
  std::lock_guard lk(node.cache_mu);
  while (static_cast<long>(node.vf_psum.size()) <= n) {
    const long i = static_cast<long>(node.vf_psum.size());
    const TermChannels t = inner.term(i);
    if (i == 0) {
      node.vf_psum.push_back(t.value_form);
      node.lf_psum.push_back(t.log_form);
      node.expr_psum.push_back(t.expr);
      node.expr_plnsum.push_back(Expr::ln(t.expr));
    } else {
      const auto& pv = node.vf_psum.back();
      const auto& pl = node.lf_psum.back();
      node.vf_psum.push_back(pv && t.value_form
                                 ? std::optional<ExactReal>(*pv + *t.value_form)
                                 : std::nullopt);
      node.lf_psum.push_back(pl && t.log_form
                                 ? std::optional<ExactReal>(*pl + *t.log_form)
                                 : std::nullopt);
      node.expr_psum.push_back(node.expr_psum.back() + t.expr);
      node.expr_plnsum.push_back(node.expr_plnsum.back() + Expr::ln(t.expr));
    }
  }
}

TermChannels cesaro_term(const SeqNode& node, const SequenceDef& inner, long n) {
  grow_prefix_cache(node, inner, n);
  std::optional<ExactReal> vf;
  Expr esum;
  {
    std::lock_guard lk(node.cache_mu);
    vf = node.vf_psum[n];
    esum = node.expr_psum[n];
  }
  const Rational inv(1, n + 1);
  Expr e = esum * Expr::constant(inv);
  if (vf) return TermChannels::from_value_form(vf->scaled(inv), std::move(e));
  return TermChannels::opaque(std::move(e));
}

TermChannels geometric_cesaro_term(const SeqNode& node, const SequenceDef& inner, long n) {
  grow_prefix_cache(node, inner, n);
  std::optional<ExactReal> lf;
  Expr lnsum;
  {
    std::lock_guard lk(node.cache_mu);
    lf = node.lf_psum[n];
    lnsum = node.expr_plnsum[n];
  }
  const Rational inv(1, n + 1);
  Expr e = Expr::exp(lnsum * Expr::constant(inv));
  if (lf) return TermChannels::from_log_form(lf->scaled(inv), std::move(e));
  return TermChannels::opaque(std::move(e));
}

TermChannels cesaro_window_term(const SequenceDef& inner, long n, long k) {
  std::optional<ExactReal> vf = ExactReal(Rational(0));
  Expr esum = Expr::constant(0);
  for (long i = 0; i <= k; ++i) {
    const TermChannels t = inner.term(n + i);
    if (vf && t.value_form)
      vf = *vf + *t.value_form;
    else
      vf = std::nullopt;
    esum = (i == 0) ? t.expr : esum + t.expr;
  }
  const Rational inv(1, k + 1);
  Expr e = esum * Expr::constant(inv);
  if (vf) return TermChannels::from_value_form(vf->scaled(inv), std::move(e));
  return TermChannels::opaque(std::move(e));
}

TermChannels geometric_cesaro_window_term(const SequenceDef& inner, long n, long k) {
  std::optional<ExactReal> lf = ExactReal(Rational(0));
  Expr lnsum = Expr::constant(0);
  for (long i = 0; i <= k; ++i) {
    const TermChannels t = inner.term(n + i);
    if (lf && t.log_form)
      lf = *lf + *t.log_form;
    else
      lf = std::nullopt;
    lnsum = (i == 0) ? Expr::ln(t.expr) : lnsum + Expr::ln(t.expr);
  }
  const Rational inv(1, k + 1);
  Expr e = Expr::exp(lnsum * Expr::constant(inv));
  if (lf) return TermChannels::from_log_form(lf->scaled(inv), std::move(e));
  return TermChannels::opaque(std::move(e));
}

// gamma prefix for exp_moment: gamma_exact[n] = prod_{i<n} alpha_i^2 when
// every square is rational; gamma_expr[n] shares subtrees.
void grow_gamma_cache(const SeqNode& node, const SequenceDef& inner, long n) {
  std::lock_guard lk(node.cache_mu);
  if (node.gamma_exact.empty()) {
    node.gamma_exact.push_back(Rational(1));
    node.gamma_expr.push_back(Expr::constant(1));
  }
  while (static_cast<long>(node.gamma_exact.size()) <= n) {
    const long i = static_cast<long>(node.gamma_exact.size()) - 1;
    const TermChannels sq = squared_channels(inner.term(i));
    const auto& prev = node.gamma_exact.back();
    node.gamma_exact.push_back(prev && sq.exact
                                   ? std::optional<Rational>(*prev * *sq.exact)
                                   : std::nullopt);
    node.gamma_expr.push_back(node.gamma_expr.back() * sq.expr);
  }
}

TermChannels exp_moment_term(const SeqNode& node, const SequenceDef& inner, long n) {
  grow_gamma_cache(node, inner, n + 1);
  std::optional<Rational> g0, g1;
  Expr e0, e1;
  {
    std::lock_guard lk(node.cache_mu);
    g0 = node.gamma_exact[n];
    g1 = node.gamma_exact[n + 1];
    e0 = node.gamma_expr[n];
    e1 = node.gamma_expr[n + 1];
  }
  // moments of the new shift are e^{gamma_n - 1}, so the weight is
  // exp((gamma_{n+1} - gamma_n)/2)
  if (g0 && g1) {
    const ExactReal lf((*g1 - *g0) * kHalf);
    return TermChannels::from_log_form(lf, Expr::exp(Expr::constant((*g1 - *g0) * kHalf)));
  }
  return TermChannels::opaque(Expr::exp((e1 - e0) * Expr::constant(kHalf)));
}

TermChannels exp_normalized_term(const SequenceDef& inner, long n) {
  const BoundAnalysis b = inner.bounds();
  const TermChannels t = inner.term(n);
  if (b.sup_exact && t.value_form) {
    const ExactReal lf = *t.value_form - ExactReal(*b.sup_exact);
    return TermChannels::from_log_form(lf, Expr::exp(t.expr - Expr::constant(*b.sup_exact)));
  }
  Expr sup = b.sup_exact ? Expr::constant(*b.sup_exact)
                         : (b.sup_expr ? *b.sup_expr
                                       : throw DomainError(
                                             "exp_normalized requires a supremum "
                                             "certificate for the inner sequence"));
  return TermChannels::opaque(Expr::exp(t.expr - sup));
}

TermChannels transformed_term(const SeqNode& node, const detail::TransformedSeq& f, long n) {
  const SequenceDef& inner = f.inner;
  return std::visit(
      [&](const auto& tag) -> TermChannels {
        using T = std::decay_t<decltype(tag)>;
        if constexpr (std::is_same_v<T, SchurPowerTag>) {
          const TermChannels t = inner.term(n);
          if (t.exact && tag.p.is_integer() && tag.p.numerator().fits_slong_p())
            return TermChannels::rational(t.exact->pow(tag.p.numerator().get_si()));
          if (t.log_form)
            return TermChannels::from_log_form(t.log_form->scaled(tag.p),
                                               Expr::pow(t.expr, tag.p));
          return TermChannels::opaque(Expr::pow(t.expr, tag.p));
        } else if constexpr (std::is_same_v<T, AluthgeTag>) {
          return aluthge_like(inner.term(n), inner.term(n + 1));
        } else if constexpr (std::is_same_v<T, AluthgeIterTag>) {
          // apply() expands iterates into nested single transforms
          throw DomainError("aluthge_iter must be expanded by apply()");
        } else if constexpr (std::is_same_v<T, GeneralizedMeanTag>) {
          return mean_like(inner.term(n), inner.term(n + 1), tag.t);
        } else if constexpr (std::is_same_v<T, CesaroTag>) {
          return cesaro_term(node, inner, n);
        } else if constexpr (std::is_same_v<T, GeometricCesaroTag>) {
          return geometric_cesaro_term(node, inner, n);
        } else if constexpr (std::is_same_v<T, CesaroWindowTag>) {
          return cesaro_window_term(inner, n, tag.k);
        } else if constexpr (std::is_same_v<T, GeometricCesaroWindowTag>) {
          return geometric_cesaro_window_term(inner, n, tag.k);
        } else if constexpr (std::is_same_v<T, ReciprocalTag>) {
          const TermChannels t = inner.term(n);
          if (t.exact) return TermChannels::rational(t.exact->reciprocal());
          if (t.log_form)
            return TermChannels::from_log_form(-*t.log_form,
                                               Expr::constant(1) / t.expr);
          return TermChannels::opaque(Expr::constant(1) / t.expr);
        } else if constexpr (std::is_same_v<T, RestrictionTag>) {
          return inner.term(n + tag.r);
        } else if constexpr (std::is_same_v<T, PerturbZerothTag>) {
          if (n == 0) return TermChannels::rational(tag.new_alpha0);
          return inner.term(n);
        } else if constexpr (std::is_same_v<T, ExpNormalizedTag>) {
          return exp_normalized_term(inner, n);
        } else if constexpr (std::is_same_v<T, ExpMomentTag>) {
          return exp_moment_term(node, inner, n);
        }
      },
      f.tag);
}

TermChannels term_of(const SeqNode& node, long n) {
  return std::visit(
      [&](const auto& fam) -> TermChannels {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, detail::AglerFam>) {
          return agler_term(fam, n);
        } else if constexpr (std::is_same_v<T, detail::SabcdFam>) {
          return sabcd_term(fam, n);
        } else if constexpr (std::is_same_v<T, detail::GeometricGapFam>) {
          return geometric_gap_term(fam, n);
        } else if constexpr (std::is_same_v<T, detail::EulerFam>) {
          return euler_term(n);
        } else if constexpr (std::is_same_v<T, detail::DirichletFam>) {
          return dirichlet_term(n);
        } else if constexpr (std::is_same_v<T, detail::UnilateralFam>) {
          return TermChannels::rational(Rational(1));
        } else if constexpr (std::is_same_v<T, detail::ConstantFam>) {
          return TermChannels::rational(fam.c);
        } else if constexpr (std::is_same_v<T, detail::PowerOfFam>) {
          return power_of_term(fam, n);
        } else if constexpr (std::is_same_v<T, detail::ExplicitSeq>) {
          return explicit_term(fam, n);
        } else {
          return transformed_term(node, fam, n);
        }
      },
      node.v);
}

}  // namespace

TermChannels SequenceDef::term(long n) const {
  if (n < 0) throw DomainError("sequence index must be nonnegative");
  return term_of(*node_, n);
}

Value SequenceDef::value(long n, long start_bits, long max_bits) const {
  const TermChannels t = term(n);
  if (t.exact) {
    if (t.exact->sgn() <= 0)
      throw DomainError("sequence term is not positive at n=" + std::to_string(n));
    return *t.exact;
  }
  for (long bits = start_bits; bits <= max_bits; bits *= 2) {
    try {
      Interval iv = t.value_form ? t.value_form->enclosure(bits) : t.expr.eval(bits);
      if (mpfr_sgn(iv.lower()) > 0) return iv;
      if (mpfr_sgn(iv.upper()) <= 0)
        throw DomainError("sequence term is not positive at n=" + std::to_string(n));
    } catch (const PrecisionLoss&) {
      // escalate
    }
  }
  throw PrecisionExhausted("positivity of term " + std::to_string(n) +
                           " undecided at maximum precision");
}

// ---- bound analysis ------------------------------------------------------

namespace {

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r.sgn() < 0) return std::nullopt;
  mpz_class num = r.numerator(), den = r.denominator();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  return Rational(sn, sd);
}

struct MonotoneInfo {
  bool nonincreasing = false;
};

BoundAnalysis bounds_of(const SeqNode& node);

BoundAnalysis transformed_bounds(const detail::TransformedSeq& f) {
  const BoundAnalysis in = f.inner.bounds();
  return std::visit(
      [&](const auto& tag) -> BoundAnalysis {
        using T = std::decay_t<decltype(tag)>;
        BoundAnalysis b;
        if constexpr (std::is_same_v<T, SchurPowerTag>) {
          b.le_one = in.le_one;
          b.ge_one = in.ge_one;
          b.nondecreasing = in.nondecreasing;
          if (in.sup_exact) {
            if (in.sup_exact->is_one()) {
              b.sup_exact = Rational(1);
            } else if (tag.p.is_integer() && tag.p.numerator().fits_slong_p()) {
              b.sup_exact = in.sup_exact->pow(tag.p.numerator().get_si());
            } else {
              b.sup_expr = Expr::pow(Expr::constant(*in.sup_exact), tag.p);
            }
          } else if (in.sup_expr) {
            b.sup_expr = Expr::pow(*in.sup_expr, tag.p);
          }
        } else if constexpr (std::is_same_v<T, AluthgeTag> ||
                             std::is_same_v<T, GeneralizedMeanTag> ||
                             std::is_same_v<T, CesaroTag> ||
                             std::is_same_v<T, GeometricCesaroTag> ||
                             std::is_same_v<T, CesaroWindowTag> ||
                             std::is_same_v<T, GeometricCesaroWindowTag>) {
          // means of values within [m, M] stay within [m, M]
          b.le_one = in.le_one;
          b.ge_one = in.ge_one;
          b.nondecreasing = in.nondecreasing;
          b.sup_exact = in.sup_exact;
          b.sup_expr = in.sup_expr;
        } else if constexpr (std::is_same_v<T, ReciprocalTag>) {
          b.le_one = in.ge_one;
          b.ge_one = in.le_one;
          if (in.ge_one) b.sup_exact = Rational(1);
        } else if constexpr (std::is_same_v<T, RestrictionTag>) {
          b = in;
        } else if constexpr (std::is_same_v<T, PerturbZerothTag>) {
          b.le_one = in.le_one && tag.new_alpha0 <= Rational(1);
          b.ge_one = in.ge_one && tag.new_alpha0 >= Rational(1);
          if (in.sup_exact && !(tag.new_alpha0 > *in.sup_exact))
            b.sup_exact = in.sup_exact;
        } else if constexpr (std::is_same_v<T, ExpNormalizedTag>) {
          b.le_one = true;
          b.nondecreasing = in.nondecreasing;
          b.sup_exact = Rational(1);
        } else if constexpr (std::is_same_v<T, ExpMomentTag>) {
          // weights are exp(-(nabla gamma)/2); moments of a contraction
          // are nonincreasing, of an expansion nondecreasing
          b.le_one = in.le_one;
          b.ge_one = in.ge_one;
          if (in.le_one) b.sup_exact = Rational(1);
        } else if constexpr (std::is_same_v<T, AluthgeIterTag>) {
          b = in;
        }
        return b;
      },
      f.tag);
}

BoundAnalysis bounds_of(const SeqNode& node) {
  return std::visit(
      [&](const auto& fam) -> BoundAnalysis {
        using T = std::decay_t<decltype(fam)>;
        BoundAnalysis b;
        if constexpr (std::is_same_v<T, detail::AglerFam>) {
          b.le_one = true;
          b.nondecreasing = true;
          b.sup_exact = Rational(1);
          if (fam.j == 1) b.ge_one = true;
        } else if constexpr (std::is_same_v<T, detail::SabcdFam>) {
          // alpha^2 = (an+b)/(cn+d) increases to a/c
          b.nondecreasing = true;
          b.le_one = fam.a <= fam.c;
          b.ge_one = fam.b >= fam.d;
          const Rational limit_sq = fam.a / fam.c;
          if (limit_sq.is_one()) {
            b.sup_exact = Rational(1);
          } else if (auto s = exact_sqrt(limit_sq)) {
            b.sup_exact = *s;
          } else {
            b.sup_expr = Expr::pow(Expr::constant(limit_sq), Rational(1, 2));
          }
        } else if constexpr (std::is_same_v<T, detail::GeometricGapFam>) {
          b.le_one = true;
          b.nondecreasing = true;
          b.sup_exact = Rational(1);
        } else if constexpr (std::is_same_v<T, detail::EulerFam>) {
          // increases to the Euler constant, which is below 1
          b.le_one = true;
          b.nondecreasing = true;
          b.sup_expr = Expr::euler_constant();
        } else if constexpr (std::is_same_v<T, detail::DirichletFam>) {
          // sqrt((n+2)/(n+1)) decreases to 1
          b.ge_one = true;
          b.sup_expr = Expr::pow(Expr::constant(2), Rational(1, 2));
        } else if constexpr (std::is_same_v<T, detail::UnilateralFam>) {
          b.le_one = b.ge_one = b.nondecreasing = true;
          b.sup_exact = Rational(1);
        } else if constexpr (std::is_same_v<T, detail::ConstantFam>) {
          b.le_one = fam.c <= Rational(1);
          b.ge_one = fam.c >= Rational(1);
          b.nondecreasing = true;
          b.sup_exact = fam.c;
        } else if constexpr (std::is_same_v<T, detail::PowerOfFam>) {
          const BoundAnalysis in = fam.base.bounds();
          if (fam.m >= 0) {
            b.le_one = in.le_one;
            b.ge_one = in.ge_one;
            b.nondecreasing = in.nondecreasing;
            if (in.sup_exact) b.sup_exact = in.sup_exact->pow(fam.m);
          } else {
            b.le_one = in.ge_one;
            b.ge_one = in.le_one;
            if (in.ge_one) b.sup_exact = Rational(1);
          }
          if (fam.m == 0) {
            b.le_one = b.ge_one = b.nondecreasing = true;
            b.sup_exact = Rational(1);
          }
        } else if constexpr (std::is_same_v<T, detail::ExplicitSeq>) {
          const BoundAnalysis tail = fam.tail.bounds();
          bool le = tail.le_one, ge = tail.ge_one;
          Rational mx(0);
          bool prefix_nondec = true;
          for (size_t i = 0; i < fam.prefix.size(); ++i) {
            le = le && fam.prefix[i] <= Rational(1);
            ge = ge && fam.prefix[i] >= Rational(1);
            if (fam.prefix[i] > mx) mx = fam.prefix[i];
            if (i + 1 < fam.prefix.size() && fam.prefix[i] > fam.prefix[i + 1])
              prefix_nondec = false;
          }
          b.le_one = le;
          b.ge_one = ge;
          if (tail.sup_exact) {
            b.sup_exact = std::max(mx, *tail.sup_exact);
          }
          if (prefix_nondec && tail.nondecreasing && !fam.prefix.empty()) {
            const TermChannels t0 = fam.tail.term(0);
            if (t0.exact && fam.prefix.back() <= *t0.exact)
              b.nondecreasing = true;
          } else if (fam.prefix.empty()) {
            b.nondecreasing = tail.nondecreasing;
          }
        } else {
          b = transformed_bounds(fam);
        }
        return b;
      },
      node.v);
}

}  // namespace

BoundAnalysis SequenceDef::bounds() const { return bounds_of(*node_); }

ValueClass SequenceDef::value_class() const {
  // Channel availability is uniform in n for family and transform nodes,
  // so probing two terms decides the class; explicit prefixes defer to
  // their tail.
  if (const auto* ex = std::get_if<detail::ExplicitSeq>(&node_->v))
    return ex->tail.value_class();
  const bool ok = term(0).exact.has_value() && term(1).exact.has_value();
  return ok ? ValueClass::Rational : ValueClass::Transcendental;
}

// ---- describe / JSON ------------------------------------------------------

std::string transform_name(const TransformTag& tag) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SchurPowerTag>) return "schur_power";
        else if constexpr (std::is_same_v<T, AluthgeTag>) return "aluthge";
        else if constexpr (std::is_same_v<T, AluthgeIterTag>) return "aluthge_iter";
        else if constexpr (std::is_same_v<T, GeneralizedMeanTag>) return "generalized_mean";
        else if constexpr (std::is_same_v<T, CesaroTag>) return "cesaro";
        else if constexpr (std::is_same_v<T, GeometricCesaroTag>) return "geometric_cesaro";
        else if constexpr (std::is_same_v<T, CesaroWindowTag>) return "cesaro_window";
        else if constexpr (std::is_same_v<T, GeometricCesaroWindowTag>) return "geometric_cesaro_window";
        else if constexpr (std::is_same_v<T, ReciprocalTag>) return "reciprocal";
        else if constexpr (std::is_same_v<T, RestrictionTag>) return "restriction";
        else if constexpr (std::is_same_v<T, PerturbZerothTag>) return "perturb_zeroth";
        else if constexpr (std::is_same_v<T, ExpNormalizedTag>) return "exp_normalized";
        else return "exp_moment";
      },
      tag);
}

std::string SequenceDef::describe() const {
  return std::visit(
      [&](const auto& fam) -> std::string {
        using T = std::decay_t<decltype(fam)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, detail::AglerFam>) {
          os << "agler(j=" << fam.j << ")";
        } else if constexpr (std::is_same_v<T, detail::SabcdFam>) {
          os << "sabcd(" << fam.a << "," << fam.b << "," << fam.c << "," << fam.d << ")";
        } else if constexpr (std::is_same_v<T, detail::GeometricGapFam>) {
          os << "geometric_gap(";
          for (size_t i = 0; i < fam.ps.size(); ++i)
            os << (i ? "," : "") << fam.ps[i];
          os << ")";
        } else if constexpr (std::is_same_v<T, detail::EulerFam>) {
          os << "euler";
        } else if constexpr (std::is_same_v<T, detail::DirichletFam>) {
          os << "dirichlet";
        } else if constexpr (std::is_same_v<T, detail::UnilateralFam>) {
          os << "unilateral";
        } else if constexpr (std::is_same_v<T, detail::ConstantFam>) {
          os << "constant(" << fam.c << ")";
        } else if constexpr (std::is_same_v<T, detail::PowerOfFam>) {
          os << "power_of(m=" << fam.m << ", " << fam.base.describe() << ")";
        } else if constexpr (std::is_same_v<T, detail::ExplicitSeq>) {
          os << "explicit[" << fam.prefix.size() << " terms; tail "
             << fam.tail.describe() << "]";
        } else {
          os << transform_name(fam.tag) << "(" << fam.inner.describe() << ")";
        }
        return os.str();
      },
      node_->v);
}

namespace {

nlohmann::json tag_to_json(const TransformTag& tag, const SequenceDef& inner) {
  nlohmann::json j{{"name", transform_name(tag)}, {"of", inner.to_json()}};
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SchurPowerTag>) j["p"] = t.p.to_string();
        else if constexpr (std::is_same_v<T, AluthgeIterTag>) j["m"] = t.m;
        else if constexpr (std::is_same_v<T, GeneralizedMeanTag>) j["t"] = t.t.to_string();
        else if constexpr (std::is_same_v<T, CesaroWindowTag>) j["k"] = t.k;
        else if constexpr (std::is_same_v<T, GeometricCesaroWindowTag>) j["k"] = t.k;
        else if constexpr (std::is_same_v<T, RestrictionTag>) j["r"] = t.r;
        else if constexpr (std::is_same_v<T, PerturbZerothTag>) {
          j["alpha0"] = t.new_alpha0.to_string();
          if (t.allow_increase) j["allow_increase"] = true;
        }
      },
      tag);
  return j;
}

}  // namespace

nlohmann::json SequenceDef::to_json() const {
  return std::visit(
      [&](const auto& fam) -> nlohmann::json {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, detail::AglerFam>) {
          return {{"family", "agler"}, {"j", fam.j}};
        } else if constexpr (std::is_same_v<T, detail::SabcdFam>) {
          return {{"family", "sabcd"},
                  {"a", fam.a.to_string()},
                  {"b", fam.b.to_string()},
                  {"c", fam.c.to_string()},
                  {"d", fam.d.to_string()}};
        } else if constexpr (std::is_same_v<T, detail::GeometricGapFam>) {
          nlohmann::json ps = nlohmann::json::array();
          for (const auto& p : fam.ps) ps.push_back(p.to_string());
          return {{"family", "geometric_gap"}, {"p", ps}};
        } else if constexpr (std::is_same_v<T, detail::EulerFam>) {
          return {{"family", "euler"}};
        } else if constexpr (std::is_same_v<T, detail::DirichletFam>) {
          return {{"family", "dirichlet"}};
        } else if constexpr (std::is_same_v<T, detail::UnilateralFam>) {
          return {{"family", "unilateral"}};
        } else if constexpr (std::is_same_v<T, detail::ConstantFam>) {
          return {{"family", "constant"}, {"c", fam.c.to_string()}};
        } else if constexpr (std::is_same_v<T, detail::PowerOfFam>) {
          return {{"family", "power_of"}, {"m", fam.m}, {"of", fam.base.to_json()}};
        } else if constexpr (std::is_same_v<T, detail::ExplicitSeq>) {
          nlohmann::json w = nlohmann::json::array();
          for (const auto& r : fam.prefix) w.push_back(r.to_string());
          return {{"explicit", {{"weights", w}, {"tail", fam.tail.to_json()}}}};
        } else {
          return {{"transform", tag_to_json(fam.tag, fam.inner)}};
        }
      },
      node_->v);
}

namespace {

Rational json_rational(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  throw ParseError("expected a rational (string \"p/q\" or integer)", where);
}

}  // namespace

SequenceDef SequenceDef::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("sequence spec must be an object", j.dump());
  if (j.contains("family")) {
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "agler") return agler(j.at("j").get<long>());
    if (fam == "sabcd")
      return sabcd(json_rational(j.at("a"), "sabcd.a"),
                   json_rational(j.at("b"), "sabcd.b"),
                   json_rational(j.at("c"), "sabcd.c"),
                   json_rational(j.at("d"), "sabcd.d"));
    if (fam == "geometric_gap") {
      std::vector<Rational> ps;
      const auto& p = j.at("p");
      if (p.is_array())
        for (const auto& x : p) ps.push_back(json_rational(x, "geometric_gap.p"));
      else
        ps.push_back(json_rational(p, "geometric_gap.p"));
      return geometric_gap(std::move(ps));
    }
    if (fam == "euler") return euler();
    if (fam == "dirichlet") return dirichlet();
    if (fam == "unilateral") return unilateral();
    if (fam == "constant") return constant(json_rational(j.at("c"), "constant.c"));
    if (fam == "power_of")
      return power_of(from_json(j.at("of")), j.at("m").get<long>());
    throw ParseError("unknown family \"" + fam + "\"", j.dump());
  }
  if (j.contains("explicit")) {
    const auto& e = j.at("explicit");
    std::vector<Rational> w;
    for (const auto& x : e.at("weights"))
      w.push_back(json_rational(x, "explicit.weights"));
    std::optional<SequenceDef> tail;
    if (e.contains("tail")) tail = from_json(e.at("tail"));
    return explicit_seq(std::move(w), std::move(tail));
  }
  if (j.contains("transform")) {
    const auto& t = j.at("transform");
    const std::string name = t.at("name").get<std::string>();
    SequenceDef inner = from_json(t.at("of"));
    TransformTag tag = [&]() -> TransformTag {
      if (name == "schur_power") return SchurPowerTag{json_rational(t.at("p"), "schur_power.p")};
      if (name == "aluthge") return AluthgeTag{};
      if (name == "aluthge_iter") return AluthgeIterTag{t.at("m").get<long>()};
      if (name == "generalized_mean")
        return GeneralizedMeanTag{json_rational(t.at("t"), "generalized_mean.t")};
      if (name == "cesaro") return CesaroTag{};
      if (name == "geometric_cesaro") return GeometricCesaroTag{};
      if (name == "cesaro_window") return CesaroWindowTag{t.at("k").get<long>()};
      if (name == "geometric_cesaro_window")
        return GeometricCesaroWindowTag{t.at("k").get<long>()};
      if (name == "reciprocal") return ReciprocalTag{};
      if (name == "restriction") return RestrictionTag{t.at("r").get<long>()};
      if (name == "perturb_zeroth")
        return PerturbZerothTag{json_rational(t.at("alpha0"), "perturb_zeroth.alpha0"),
                                t.value("allow_increase", false)};
      if (name == "exp_normalized") return ExpNormalizedTag{};
      if (name == "exp_moment") return ExpMomentTag{};
      throw ParseError("unknown transform \"" + name + "\"", j.dump());
    }();
    return transforms::apply(tag, inner);
  }
  throw ParseError("sequence spec needs \"family\", \"explicit\" or \"transform\"",
                   j.dump());
}

}  // namespace shiftlab
