#include "shiftlab/expr.hpp"

#include <sstream>
#include <variant>
#include <vector>

#include "shiftlab/errors.hpp"

namespace shiftlab {

namespace {
enum class Op { Const, Euler, Add, Sub, Mul, Div, Exp, Ln, Pow, Gamma, Digamma };
}

struct Expr::Node {
  Op op;
  Rational value;  // Const payload, or Pow exponent
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Expr::Expr() : node_(std::make_shared<Node>(Node{Op::Const, Rational(0), nullptr, nullptr})) {}

Expr Expr::constant(const Rational& q) {
  return Expr(std::make_shared<Node>(Node{Op::Const, q, nullptr, nullptr}));
}

Expr Expr::euler_constant() {
  return Expr(std::make_shared<Node>(Node{Op::Euler, Rational(0), nullptr, nullptr}));
}

namespace {
std::shared_ptr<const Expr::Node> mk(Op op, std::shared_ptr<const Expr::Node> a,
                                     std::shared_ptr<const Expr::Node> b,
                                     Rational v = Rational(0)) {
  return std::make_shared<Expr::Node>(Expr::Node{op, std::move(v), std::move(a), std::move(b)});
}
}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return Expr(mk(Op::Add, a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(mk(Op::Sub, a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mk(Op::Mul, a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(mk(Op::Div, a.node_, b.node_)); }
Expr Expr::operator-() const { return constant(Rational(0)) - *this; }

Expr Expr::exp(const Expr& x) { return Expr(mk(Op::Exp, x.node_, nullptr)); }
Expr Expr::ln(const Expr& x) { return Expr(mk(Op::Ln, x.node_, nullptr)); }
Expr Expr::pow(const Expr& base, const Rational& exponent) {
  return Expr(mk(Op::Pow, base.node_, nullptr, exponent));
}
Expr Expr::gamma(const Expr& x) { return Expr(mk(Op::Gamma, x.node_, nullptr)); }
Expr Expr::digamma(const Expr& x) { return Expr(mk(Op::Digamma, x.node_, nullptr)); }

namespace {

Interval eval_node(const Expr::Node& n, mpfr_prec_t prec) {
  switch (n.op) {
    case Op::Const: return Interval::from_rational(n.value, prec);
    case Op::Euler: return Interval::euler_constant(prec);
    case Op::Add: return eval_node(*n.a, prec) + eval_node(*n.b, prec);
    case Op::Sub: return eval_node(*n.a, prec) - eval_node(*n.b, prec);
    case Op::Mul: return eval_node(*n.a, prec) * eval_node(*n.b, prec);
    case Op::Div: return eval_node(*n.a, prec) / eval_node(*n.b, prec);
    case Op::Exp: return eval_node(*n.a, prec).exp_();
    case Op::Ln: return eval_node(*n.a, prec).ln_();
    case Op::Pow: return eval_node(*n.a, prec).pow_rational(n.value);
    case Op::Gamma: return eval_node(*n.a, prec).gamma_();
    case Op::Digamma: return eval_node(*n.a, prec).digamma_();
  }
  throw DomainError("unreachable expression op");
}

std::optional<ExactReal> exact_node(const Expr::Node& n) {
  switch (n.op) {
    case Op::Const:
      return ExactReal(n.value);
    case Op::Euler:
      return std::nullopt;
    case Op::Add: {
      auto x = exact_node(*n.a), y = exact_node(*n.b);
      if (x && y) return *x + *y;
      return std::nullopt;
    }
    case Op::Sub: {
      auto x = exact_node(*n.a), y = exact_node(*n.b);
      if (x && y) return *x - *y;
      return std::nullopt;
    }
    case Op::Mul: {
      auto x = exact_node(*n.a), y = exact_node(*n.b);
      if (!x || !y) return std::nullopt;
      if (auto q = x->as_rational()) return y->scaled(*q);
      if (auto q = y->as_rational()) return x->scaled(*q);
      return std::nullopt;
    }
    case Op::Div: {
      auto x = exact_node(*n.a), y = exact_node(*n.b);
      if (!x || !y) return std::nullopt;
      auto q = y->as_rational();
      if (!q) return std::nullopt;
      if (q->is_zero()) throw DomainError("division by exact zero");
      return x->scaled(q->reciprocal());
    }
    case Op::Ln: {
      auto x = exact_node(*n.a);
      if (!x) return std::nullopt;
      auto q = x->as_rational();
      if (!q) return std::nullopt;
      if (q->sgn() <= 0) throw DomainError("ln of a non-positive exact value");
      return ExactReal(LogCombination::ln(*q));
    }
    case Op::Pow: {
      auto x = exact_node(*n.a);
      if (!x) return std::nullopt;
      auto q = x->as_rational();
      if (!q || !n.value.is_integer() || !n.value.numerator().fits_slong_p())
        return std::nullopt;
      const long e = n.value.numerator().get_si();
      if (q->is_zero() && e < 0) throw DomainError("negative power of exact zero");
      return ExactReal(q->pow(e));
    }
    case Op::Exp:
    case Op::Gamma:
    case Op::Digamma:
      return std::nullopt;
  }
  return std::nullopt;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Pow: return "pow";
    case Op::Gamma: return "gamma";
    case Op::Digamma: return "digamma";
    default: return "?";
  }
}

void print_node(std::ostringstream& os, const Expr::Node& n) {
  switch (n.op) {
    case Op::Const: os << n.value.to_string(); return;
    case Op::Euler: os << "euler"; return;
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div:
      os << "(";
      print_node(os, *n.a);
      os << " " << op_name(n.op) << " ";
      print_node(os, *n.b);
      os << ")";
      return;
    case Op::Pow:
      os << "pow(";
      print_node(os, *n.a);
      os << ", " << n.value.to_string() << ")";
      return;
    default:
      os << op_name(n.op) << "(";
      print_node(os, *n.a);
      os << ")";
      return;
  }
}

}  // namespace

Interval Expr::eval(mpfr_prec_t precision_bits) const { return eval_node(*node_, precision_bits); }

std::optional<ExactReal> Expr::exact() const { return exact_node(*node_); }

std::string Expr::to_string() const {
  std::ostringstream os;
  print_node(os, *node_);
  return os.str();
}

Interval eval_interval(const Expr& expr, mpfr_prec_t precision_bits) {
  return expr.eval(precision_bits);
}

Sign sign_adaptive(const Expr& expr, mpfr_prec_t start_bits, mpfr_prec_t max_bits) {
  if (auto ex = expr.exact()) return ex->sign(start_bits, max_bits);
  for (mpfr_prec_t bits = start_bits; bits <= max_bits; bits *= 2) {
    try {
      const Sign s = expr.eval(bits).sign();
      // Zero from an interval only means the enclosure is exactly [0,0],
      // which is an exact statement.
      if (is_decided(s)) return s;
    } catch (const PrecisionLoss&) {
      // widen precision and retry
    }
  }
  return Sign::Undecided;
}

}  // namespace shiftlab
