#include "coalg/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace coalg {

using detail::Node;
using detail::NodeRef;

// ---------------------------------------------------------------------------
// PhasePoint / ParamSet

PhasePoint::PhasePoint(Eigen::VectorXd q_in, Eigen::VectorXd p_in)
    : q(std::move(q_in)), p(std::move(p_in)) {
  if (q.size() != p.size() || q.size() < 1)
    throw DomainError("PhasePoint: q and p must have identical length >= 1");
  if (!q.allFinite() || !p.allFinite())
    throw DomainError("PhasePoint: non-finite coordinate");
}

PhasePoint PhasePoint::zero(int n) {
  return PhasePoint(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n));
}

Eigen::VectorXd PhasePoint::flat() const {
  Eigen::VectorXd v(2 * dof());
  v << q, p;
  return v;
}

PhasePoint PhasePoint::from_flat(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size()) / 2;
  return PhasePoint(v.head(n), v.tail(n));
}

ParamSet& ParamSet::set(const std::string& name, double value) {
  scalars_[name] = value;
  return *this;
}
ParamSet& ParamSet::set(const std::string& name, Eigen::VectorXd values) {
  vectors_[name] = std::move(values);
  return *this;
}
ParamSet& ParamSet::set(const std::string& name, const std::vector<double>& values) {
  vectors_[name] = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                     static_cast<long>(values.size()));
  return *this;
}
bool ParamSet::has_scalar(const std::string& name) const { return scalars_.count(name) > 0; }
bool ParamSet::has_vector(const std::string& name) const { return vectors_.count(name) > 0; }

double ParamSet::scalar(const std::string& name) const {
  auto it = scalars_.find(name);
  if (it == scalars_.end()) throw UnresolvedSymbol("missing parameter '" + name + "'");
  return it->second;
}
double ParamSet::vector_entry(const std::string& name, int index) const {
  auto it = vectors_.find(name);
  if (it == vectors_.end()) throw UnresolvedSymbol("missing parameter vector '" + name + "'");
  if (index < 0 || index >= it->second.size())
    throw UnresolvedSymbol("parameter '" + name + "[" + std::to_string(index) +
                           "]' out of range");
  return it->second[index];
}

// ---------------------------------------------------------------------------
// Expression construction (with constant folding and trivial rewrites)

namespace {

NodeRef make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool node_is_const(const NodeRef& n, double v) {
  return n->kind == Node::Kind::Constant && n->value == v;
}

double apply_unary_value(UnaryOp op, double x);

}  // namespace

Expression Expression::constant(double c) {
  Node n;
  n.kind = Node::Kind::Constant;
  n.value = c;
  return Expression(make_node(std::move(n)));
}
Expression Expression::q(int i) {
  Node n;
  n.kind = Node::Kind::Coord;
  n.momentum = false;
  n.index = i;
  return Expression(make_node(std::move(n)));
}
Expression Expression::p(int i) {
  Node n;
  n.kind = Node::Kind::Coord;
  n.momentum = true;
  n.index = i;
  return Expression(make_node(std::move(n)));
}
Expression Expression::param(const std::string& name) {
  Node n;
  n.kind = Node::Kind::Param;
  n.name = name;
  n.index = -1;
  return Expression(make_node(std::move(n)));
}
Expression Expression::param(const std::string& name, int index) {
  Node n;
  n.kind = Node::Kind::Param;
  n.name = name;
  n.index = index;
  return Expression(make_node(std::move(n)));
}
Expression Expression::placeholder(const std::string& name) {
  Node n;
  n.kind = Node::Kind::Placeholder;
  n.name = name;
  return Expression(make_node(std::move(n)));
}

Expression Expression::unary(UnaryOp op, const Expression& a) {
  if (a.root()->kind == Node::Kind::Constant)
    return constant(apply_unary_value(op, a.root()->value));
  Node n;
  n.kind = Node::Kind::Unary;
  n.uop = op;
  n.a = a.root();
  return Expression(make_node(std::move(n)));
}

Expression Expression::binary(BinaryOp op, const Expression& a, const Expression& b) {
  const NodeRef& ra = a.root();
  const NodeRef& rb = b.root();
  const bool ca = ra->kind == Node::Kind::Constant;
  const bool cb = rb->kind == Node::Kind::Constant;
  if (ca && cb) {
    switch (op) {
      case BinaryOp::Add: return constant(ra->value + rb->value);
      case BinaryOp::Sub: return constant(ra->value - rb->value);
      case BinaryOp::Mul: return constant(ra->value * rb->value);
      case BinaryOp::Div:
        if (rb->value != 0.0) return constant(ra->value / rb->value);
        break;  // fold at evaluation time so the error carries context
      case BinaryOp::Pow: return constant(std::pow(ra->value, rb->value));
    }
  }
  switch (op) {
    case BinaryOp::Add:
      if (node_is_const(ra, 0.0)) return b;
      if (node_is_const(rb, 0.0)) return a;
      break;
    case BinaryOp::Sub:
      if (node_is_const(rb, 0.0)) return a;
      break;
    case BinaryOp::Mul:
      if (node_is_const(ra, 0.0) || node_is_const(rb, 0.0)) return constant(0.0);
      if (node_is_const(ra, 1.0)) return b;
      if (node_is_const(rb, 1.0)) return a;
      break;
    case BinaryOp::Div:
      if (node_is_const(ra, 0.0)) return constant(0.0);
      if (node_is_const(rb, 1.0)) return a;
      break;
    case BinaryOp::Pow:
      if (node_is_const(rb, 1.0)) return a;
      if (node_is_const(rb, 0.0)) return constant(1.0);
      break;
  }
  Node n;
  n.kind = Node::Kind::Binary;
  n.bop = op;
  n.a = ra;
  n.b = rb;
  return Expression(make_node(std::move(n)));
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Add, a, b);
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Sub, a, b);
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Mul, a, b);
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Div, a, b);
}
Expression operator-(const Expression& a) { return Expression::unary(UnaryOp::Neg, a); }

Expression sin(const Expression& a) { return Expression::unary(UnaryOp::Sin, a); }
Expression cos(const Expression& a) { return Expression::unary(UnaryOp::Cos, a); }
Expression sinh(const Expression& a) { return Expression::unary(UnaryOp::Sinh, a); }
Expression cosh(const Expression& a) { return Expression::unary(UnaryOp::Cosh, a); }
Expression tanh(const Expression& a) { return Expression::unary(UnaryOp::Tanh, a); }
Expression exp(const Expression& a) { return Expression::unary(UnaryOp::Exp, a); }
Expression ln(const Expression& a) { return Expression::unary(UnaryOp::Ln, a); }
Expression sqrt(const Expression& a) { return Expression::unary(UnaryOp::Sqrt, a); }
Expression sinhc(const Expression& a) { return Expression::unary(UnaryOp::Sinhc, a); }
Expression pow(const Expression& a, const Expression& b) {
  return Expression::binary(BinaryOp::Pow, a, b);
}
Expression pow(const Expression& a, double c) { return pow(a, Expression::constant(c)); }

// ---------------------------------------------------------------------------
// Structural transforms

Expression Expression::transform(
    const std::function<std::optional<Expression>(const Node&)>& fn) const {
  std::unordered_map<const Node*, NodeRef> memo;
  std::function<NodeRef(const NodeRef&)> walk = [&](const NodeRef& n) -> NodeRef {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    NodeRef out;
    if (auto rep = fn(*n)) {
      out = rep->root();
    } else if (n->kind == Node::Kind::Unary) {
      NodeRef a = walk(n->a);
      out = (a == n->a) ? n : unary(n->uop, Expression(a)).root();
    } else if (n->kind == Node::Kind::Binary) {
      NodeRef a = walk(n->a);
      NodeRef b = walk(n->b);
      out = (a == n->a && b == n->b) ? n : binary(n->bop, Expression(a), Expression(b)).root();
    } else {
      out = n;
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return Expression(walk(root_));
}

Expression Expression::substitute(const std::map<std::string, Expression>& bindings) const {
  return transform([&](const Node& n) -> std::optional<Expression> {
    if (n.kind == Node::Kind::Placeholder) {
      auto it = bindings.find(n.name);
      if (it != bindings.end()) return it->second;
    }
    return std::nullopt;
  });
}

bool Expression::same_graph(const Expression& other) const {
  std::function<bool(const NodeRef&, const NodeRef&)> eq = [&](const NodeRef& x,
                                                               const NodeRef& y) -> bool {
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case Node::Kind::Constant: return x->value == y->value;
      case Node::Kind::Coord: return x->momentum == y->momentum && x->index == y->index;
      case Node::Kind::Param: return x->name == y->name && x->index == y->index;
      case Node::Kind::Placeholder: return x->name == y->name;
      case Node::Kind::Unary: return x->uop == y->uop && eq(x->a, y->a);
      case Node::Kind::Binary: return x->bop == y->bop && eq(x->a, y->a) && eq(x->b, y->b);
    }
    return false;
  };
  return eq(root_, other.root_);
}

bool Expression::is_constant() const { return root_->kind == Node::Kind::Constant; }
double Expression::constant_value() const { return root_->value; }

std::set<std::string> Expression::placeholders() const {
  std::set<std::string> out;
  std::function<void(const NodeRef&)> walk = [&](const NodeRef& n) {
    if (n->kind == Node::Kind::Placeholder) out.insert(n->name);
    if (n->a) walk(n->a);
    if (n->b) walk(n->b);
  };
  walk(root_);
  return out;
}

int Expression::max_coord_index() const {
  int mx = -1;
  std::function<void(const NodeRef&)> walk = [&](const NodeRef& n) {
    if (n->kind == Node::Kind::Coord) mx = std::max(mx, n->index);
    if (n->a) walk(n->a);
    if (n->b) walk(n->b);
  };
  walk(root_);
  return mx;
}

std::size_t Expression::node_count() const {
  std::unordered_map<const Node*, bool> seen;
  std::function<void(const NodeRef&)> walk = [&](const NodeRef& n) {
    if (seen.count(n.get())) return;
    seen.emplace(n.get(), true);
    if (n->a) walk(n->a);
    if (n->b) walk(n->b);
  };
  walk(root_);
  return seen.size();
}

// ---------------------------------------------------------------------------
// Scalar evaluation

namespace {

// Guard boundary for the sinhc series; relative error below ~1e-26 there.
constexpr double kSinhcSeries = 1e-4;

double sinhc_val(double x) {
  if (std::abs(x) < kSinhcSeries) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}
// d/dx sinhc = cosh(x)/x - sinh(x)/x^2
double sinhc_d1(double x) {
  if (std::abs(x) < kSinhcSeries) {
    const double x2 = x * x;
    return x / 3.0 + x * x2 / 30.0;
  }
  return std::cosh(x) / x - std::sinh(x) / (x * x);
}
// d^2/dx^2 sinhc = sinh/x - 2cosh/x^2 + 2sinh/x^3
double sinhc_d2(double x) {
  if (std::abs(x) < kSinhcSeries) {
    const double x2 = x * x;
    return 1.0 / 3.0 + x2 / 10.0 + x2 * x2 / 168.0;
  }
  return std::sinh(x) / x - 2.0 * std::cosh(x) / (x * x) + 2.0 * std::sinh(x) / (x * x * x);
}

[[noreturn]] void domain_fail(const std::string& what) { throw DomainError(what); }

double apply_unary_value(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg: return -x;
    case UnaryOp::Sin: return std::sin(x);
    case UnaryOp::Cos: return std::cos(x);
    case UnaryOp::Sinh: return std::sinh(x);
    case UnaryOp::Cosh: return std::cosh(x);
    case UnaryOp::Tanh: return std::tanh(x);
    case UnaryOp::Exp: return std::exp(x);
    case UnaryOp::Ln:
      if (x <= 0.0) domain_fail("ln of non-positive value");
      return std::log(x);
    case UnaryOp::Sqrt:
      if (x < 0.0) domain_fail("sqrt of negative value");
      return std::sqrt(x);
    case UnaryOp::Sinhc: return sinhc_val(x);
  }
  domain_fail("unknown unary op");
}

bool is_integer(double c) { return std::nearbyint(c) == c && std::abs(c) < 1e15; }

double pow_value(double a, double c) {
  if (is_integer(c)) {
    if (a == 0.0 && c < 0.0) domain_fail("0 raised to negative power");
    return std::pow(a, c);
  }
  if (a <= 0.0) domain_fail("non-integer power of non-positive base");
  return std::pow(a, c);
}

struct EvalCtx {
  const PhasePoint& x;
  const ParamSet& params;
  std::unordered_map<const Node*, double> memo;
};

double eval_node(const NodeRef& n, EvalCtx& ctx) {
  auto it = ctx.memo.find(n.get());
  if (it != ctx.memo.end()) return it->second;
  double v = 0.0;
  switch (n->kind) {
    case Node::Kind::Constant: v = n->value; break;
    case Node::Kind::Coord: {
      if (n->index < 0 || n->index >= ctx.x.dof())
        domain_fail("coordinate index out of range for this phase space");
      v = n->momentum ? ctx.x.p[n->index] : ctx.x.q[n->index];
      break;
    }
    case Node::Kind::Param:
      v = (n->index < 0) ? ctx.params.scalar(n->name)
                         : ctx.params.vector_entry(n->name, n->index);
      break;
    case Node::Kind::Placeholder:
      throw UnresolvedSymbol("unbound placeholder '" + n->name + "'");
    case Node::Kind::Unary: v = apply_unary_value(n->uop, eval_node(n->a, ctx)); break;
    case Node::Kind::Binary: {
      const double a = eval_node(n->a, ctx);
      const double b = eval_node(n->b, ctx);
      switch (n->bop) {
        case BinaryOp::Add: v = a + b; break;
        case BinaryOp::Sub: v = a - b; break;
        case BinaryOp::Mul: v = a * b; break;
        case BinaryOp::Div:
          if (b == 0.0) domain_fail("division by zero");
          v = a / b;
          break;
        case BinaryOp::Pow: v = pow_value(a, b); break;
      }
      break;
    }
  }
  if (!std::isfinite(v)) domain_fail("non-finite intermediate value");
  ctx.memo.emplace(n.get(), v);
  return v;
}

}  // namespace

double evaluate(const Expression& f, const PhasePoint& x, const ParamSet& params) {
  EvalCtx ctx{x, params, {}};
  return eval_node(f.root(), ctx);
}

// ---------------------------------------------------------------------------
// Forward-mode jets

namespace {

// Order-1 and order-2 truncated Taylor scalars over 2N partials.
struct Jet1 {
  double v = 0.0;
  Eigen::VectorXd g;
};
struct Jet2 {
  double v = 0.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
};

Jet1 j1_const(double c, int dim) { return {c, Eigen::VectorXd::Zero(dim)}; }
Jet2 j2_const(double c, int dim) {
  return {c, Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
}
Jet1 j1_coord(double v, int k, int dim) {
  Jet1 j = j1_const(v, dim);
  j.g[k] = 1.0;
  return j;
}
Jet2 j2_coord(double v, int k, int dim) {
  Jet2 j = j2_const(v, dim);
  j.g[k] = 1.0;
  return j;
}

Jet1 j_add(const Jet1& a, const Jet1& b) { return {a.v + b.v, a.g + b.g}; }
Jet2 j_add(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }
Jet1 j_sub(const Jet1& a, const Jet1& b) { return {a.v - b.v, a.g - b.g}; }
Jet2 j_sub(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.g - b.g, a.h - b.h}; }
Jet1 j_mul(const Jet1& a, const Jet1& b) { return {a.v * b.v, a.v * b.g + b.v * a.g}; }
Jet2 j_mul(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.v * b.g + b.v * a.g,
          a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose()};
}
Jet1 j_div(const Jet1& a, const Jet1& b) {
  if (b.v == 0.0) domain_fail("division by zero");
  const double v = a.v / b.v;
  return {v, (a.g - v * b.g) / b.v};
}
Jet2 j_div(const Jet2& a, const Jet2& b) {
  if (b.v == 0.0) domain_fail("division by zero");
  const double v = a.v / b.v;
  Eigen::VectorXd g = (a.g - v * b.g) / b.v;
  Eigen::MatrixXd h =
      (a.h - v * b.h - g * b.g.transpose() - b.g * g.transpose()) / b.v;
  return {v, std::move(g), std::move(h)};
}

// Chain rule for u(f): derivatives (u(f), u'(f), u''(f)) supplied by `rule`.
struct UnaryDerivs {
  double u0, u1, u2;
};

UnaryDerivs unary_derivs(UnaryOp op, double x, bool need2) {
  switch (op) {
    case UnaryOp::Neg: return {-x, -1.0, 0.0};
    case UnaryOp::Sin: return {std::sin(x), std::cos(x), need2 ? -std::sin(x) : 0.0};
    case UnaryOp::Cos: return {std::cos(x), -std::sin(x), need2 ? -std::cos(x) : 0.0};
    case UnaryOp::Sinh: return {std::sinh(x), std::cosh(x), need2 ? std::sinh(x) : 0.0};
    case UnaryOp::Cosh: return {std::cosh(x), std::sinh(x), need2 ? std::cosh(x) : 0.0};
    case UnaryOp::Tanh: {
      const double t = std::tanh(x);
      const double s = 1.0 - t * t;
      return {t, s, need2 ? -2.0 * t * s : 0.0};
    }
    case UnaryOp::Exp: {
      const double e = std::exp(x);
      return {e, e, e};
    }
    case UnaryOp::Ln:
      if (x <= 0.0) domain_fail("ln of non-positive value");
      return {std::log(x), 1.0 / x, need2 ? -1.0 / (x * x) : 0.0};
    case UnaryOp::Sqrt: {
      if (x <= 0.0) domain_fail("sqrt derivative at non-positive value");
      const double s = std::sqrt(x);
      return {s, 0.5 / s, need2 ? -0.25 / (s * x) : 0.0};
    }
    case UnaryOp::Sinhc:
      return {sinhc_val(x), sinhc_d1(x), need2 ? sinhc_d2(x) : 0.0};
  }
  domain_fail("unknown unary op");
}

Jet1 j_unary(UnaryOp op, const Jet1& a) {
  const UnaryDerivs d = unary_derivs(op, a.v, false);
  return {d.u0, d.u1 * a.g};
}
Jet2 j_unary(UnaryOp op, const Jet2& a) {
  const UnaryDerivs d = unary_derivs(op, a.v, true);
  return {d.u0, d.u1 * a.g, d.u1 * a.h + d.u2 * a.g * a.g.transpose()};
}

// pow with a constant exponent; integer exponents valid for any base.
Jet1 j_pow_const(const Jet1& a, double c) {
  const double v = pow_value(a.v, c);
  double d1;
  if (a.v == 0.0) {
    if (c < 1.0) domain_fail("pow derivative at 0");
    d1 = (c == 1.0) ? 1.0 : 0.0;
  } else {
    d1 = c * v / a.v;
  }
  return {v, d1 * a.g};
}
Jet2 j_pow_const(const Jet2& a, double c) {
  const double v = pow_value(a.v, c);
  if (a.v == 0.0 && c < 2.0 && c != 1.0 && c != 0.0)
    domain_fail("pow second derivative at 0");
  const double d1 = (a.v == 0.0) ? (c == 1.0 ? 1.0 : 0.0) : c * v / a.v;
  const double d2 = (a.v == 0.0) ? (c == 2.0 ? 2.0 : 0.0) : c * (c - 1.0) * v / (a.v * a.v);
  return {v, d1 * a.g, d1 * a.h + d2 * a.g * a.g.transpose()};
}

template <class J>
struct JetCtx {
  const PhasePoint& x;
  const ParamSet& params;
  int dim;
  std::unordered_map<const Node*, J> memo;
};

template <class J>
J jet_node(const NodeRef& n, JetCtx<J>& ctx) {
  auto it = ctx.memo.find(n.get());
  if (it != ctx.memo.end()) return it->second;
  J v;
  constexpr bool order2 = std::is_same_v<J, Jet2>;
  switch (n->kind) {
    case Node::Kind::Constant:
      if constexpr (order2) v = j2_const(n->value, ctx.dim);
      else v = j1_const(n->value, ctx.dim);
      break;
    case Node::Kind::Coord: {
      if (n->index < 0 || n->index >= ctx.x.dof())
        domain_fail("coordinate index out of range for this phase space");
      const int k = n->momentum ? ctx.x.dof() + n->index : n->index;
      const double val = n->momentum ? ctx.x.p[n->index] : ctx.x.q[n->index];
      if constexpr (order2) v = j2_coord(val, k, ctx.dim);
      else v = j1_coord(val, k, ctx.dim);
      break;
    }
    case Node::Kind::Param: {
      const double val = (n->index < 0) ? ctx.params.scalar(n->name)
                                        : ctx.params.vector_entry(n->name, n->index);
      if constexpr (order2) v = j2_const(val, ctx.dim);
      else v = j1_const(val, ctx.dim);
      break;
    }
    case Node::Kind::Placeholder:
      throw UnresolvedSymbol("unbound placeholder '" + n->name + "'");
    case Node::Kind::Unary: v = j_unary(n->uop, jet_node(n->a, ctx)); break;
    case Node::Kind::Binary: {
      if (n->bop == BinaryOp::Pow && n->b->kind == Node::Kind::Constant) {
        v = j_pow_const(jet_node(n->a, ctx), n->b->value);
        break;
      }
      J a = jet_node(n->a, ctx);
      J b = jet_node(n->b, ctx);
      switch (n->bop) {
        case BinaryOp::Add: v = j_add(a, b); break;
        case BinaryOp::Sub: v = j_sub(a, b); break;
        case BinaryOp::Mul: v = j_mul(a, b); break;
        case BinaryOp::Div: v = j_div(a, b); break;
        case BinaryOp::Pow:
          // general base^exponent as exp(exponent * ln(base))
          v = j_unary(UnaryOp::Exp, j_mul(b, j_unary(UnaryOp::Ln, a)));
          break;
      }
      break;
    }
  }
  if (!std::isfinite(v.v)) domain_fail("non-finite intermediate value");
  ctx.memo.emplace(n.get(), v);
  return v;
}

}  // namespace

Jet jet(const Expression& f, const PhasePoint& x, const ParamSet& params, int order) {
  const int dim = 2 * x.dof();
  Jet out;
  if (order <= 1) {
    JetCtx<Jet1> ctx{x, params, dim, {}};
    Jet1 j = jet_node(f.root(), ctx);
    out.value = j.v;
    out.gradient = std::move(j.g);
  } else {
    JetCtx<Jet2> ctx{x, params, dim, {}};
    Jet2 j = jet_node(f.root(), ctx);
    out.value = j.v;
    out.gradient = std::move(j.g);
    out.hessian = std::move(j.h);
  }
  return out;
}

double poisson_bracket(const Jet& f, const Jet& g) {
  const int n = static_cast<int>(f.gradient.size()) / 2;
  return f.gradient.head(n).dot(g.gradient.tail(n)) -
         f.gradient.tail(n).dot(g.gradient.head(n));
}

double poisson_bracket(const Expression& f, const Expression& g, const PhasePoint& x,
                       const ParamSet& params) {
  return poisson_bracket(jet(f, x, params, 1), jet(g, x, params, 1));
}

Jet poisson_bracket_jet(const Expression& f, const Expression& g, const PhasePoint& x,
                        const ParamSet& params) {
  const int n = x.dof();
  const Jet jf = jet(f, x, params, 2);
  const Jet jg = jet(g, x, params, 2);
  const Eigen::MatrixXd& Hf = *jf.hessian;
  const Eigen::MatrixXd& Hg = *jg.hessian;
  Jet out;
  out.value = poisson_bracket(jf, jg);
  out.gradient = Eigen::VectorXd::Zero(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += Hf(i, k) * jg.gradient[n + i] + jf.gradient[i] * Hg(n + i, k);
      s -= Hf(n + i, k) * jg.gradient[i] + jf.gradient[n + i] * Hg(i, k);
    }
    out.gradient[k] = s;
  }
  return out;
}

double fd_bracket_oracle(const Expression& f, const Expression& g, const PhasePoint& x,
                         const ParamSet& params, double h) {
  if (!(h > 0.0)) throw DomainError("fd_bracket_oracle: step h must be positive");
  const int n = x.dof();
  auto grad_fd = [&](const Expression& e) {
    Eigen::VectorXd out(2 * n);
    Eigen::VectorXd flat = x.flat();
    for (int k = 0; k < 2 * n; ++k) {
      Eigen::VectorXd up = flat, dn = flat;
      up[k] += h;
      dn[k] -= h;
      out[k] = (evaluate(e, PhasePoint::from_flat(up), params) -
                evaluate(e, PhasePoint::from_flat(dn), params)) /
               (2.0 * h);
    }
    return out;
  };
  Eigen::VectorXd gf = grad_fd(f), gg = grad_fd(g);
  return gf.head(n).dot(gg.tail(n)) - gf.tail(n).dot(gg.head(n));
}

// ---------------------------------------------------------------------------
// Symbolic derivative w.r.t. a placeholder

namespace {

Expression derive_node(const NodeRef& n, const std::string& symbol,
                       std::unordered_map<const Node*, Expression>& memo) {
  auto it = memo.find(n.get());
  if (it != memo.end()) return it->second;
  Expression out(0.0);
  switch (n->kind) {
    case Node::Kind::Constant:
    case Node::Kind::Coord:
    case Node::Kind::Param: out = Expression::constant(0.0); break;
    case Node::Kind::Placeholder:
      out = Expression::constant(n->name == symbol ? 1.0 : 0.0);
      break;
    case Node::Kind::Unary: {
      const Expression a(n->a);
      const Expression da = derive_node(n->a, symbol, memo);
      switch (n->uop) {
        case UnaryOp::Neg: out = -da; break;
        case UnaryOp::Sin: out = cos(a) * da; break;
        case UnaryOp::Cos: out = -(sin(a) * da); break;
        case UnaryOp::Sinh: out = cosh(a) * da; break;
        case UnaryOp::Cosh: out = sinh(a) * da; break;
        case UnaryOp::Tanh: out = (1.0 - pow(tanh(a), 2.0)) * da; break;
        case UnaryOp::Exp: out = exp(a) * da; break;
        case UnaryOp::Ln: out = da / a; break;
        case UnaryOp::Sqrt: out = da / (2.0 * sqrt(a)); break;
        case UnaryOp::Sinhc: out = ((cosh(a) - sinhc(a)) / a) * da; break;
      }
      break;
    }
    case Node::Kind::Binary: {
      const Expression a(n->a);
      const Expression b(n->b);
      const Expression da = derive_node(n->a, symbol, memo);
      const Expression db = derive_node(n->b, symbol, memo);
      switch (n->bop) {
        case BinaryOp::Add: out = da + db; break;
        case BinaryOp::Sub: out = da - db; break;
        case BinaryOp::Mul: out = da * b + a * db; break;
        case BinaryOp::Div: out = (da * b - a * db) / (b * b); break;
        case BinaryOp::Pow:
          if (n->b->kind == Node::Kind::Constant) {
            out = Expression::constant(n->b->value) * pow(a, n->b->value - 1.0) * da;
          } else {
            out = pow(a, b) * (db * ln(a) + b * da / a);
          }
          break;
      }
      break;
    }
  }
  memo.emplace(n.get(), out);
  return out;
}

}  // namespace

Expression derive(const Expression& f, const std::string& placeholder) {
  std::unordered_map<const Node*, Expression> memo;
  return derive_node(f.root(), placeholder, memo);
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Node& n) {
  if (n.kind != Node::Kind::Binary) return 4;
  switch (n.bop) {
    case BinaryOp::Add:
    case BinaryOp::Sub: return 1;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 2;
    case BinaryOp::Pow: return 3;
  }
  return 4;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Sinhc: return "sinhc";
  }
  return "?";
}

void print_node(const NodeRef& n, std::ostream& os) {
  switch (n->kind) {
    case Node::Kind::Constant: {
      if (n->value < 0) {
        os << "(" << format_double(n->value) << ")";
      } else {
        os << format_double(n->value);
      }
      return;
    }
    case Node::Kind::Coord:
      os << (n->momentum ? 'p' : 'q') << (n->index + 1);
      return;
    case Node::Kind::Param:
      os << n->name;
      if (n->index >= 0) os << "[" << n->index << "]";
      return;
    case Node::Kind::Placeholder: os << n->name; return;
    case Node::Kind::Unary:
      if (n->uop == UnaryOp::Neg) {
        os << "-";
        const bool parens = n->a->kind == Node::Kind::Binary;
        if (parens) os << "(";
        print_node(n->a, os);
        if (parens) os << ")";
      } else {
        os << unary_name(n->uop) << "(";
        print_node(n->a, os);
        os << ")";
      }
      return;
    case Node::Kind::Binary: {
      const int prec = precedence(*n);
      auto emit = [&](const NodeRef& c, bool tight) {
        const bool parens =
            precedence(*c) < prec || (tight && precedence(*c) == prec) ||
            (c->kind == Node::Kind::Unary && c->uop == UnaryOp::Neg);
        if (parens) os << "(";
        print_node(c, os);
        if (parens) os << ")";
      };
      const char* sym = nullptr;
      switch (n->bop) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = " * "; break;
        case BinaryOp::Div: sym = " / "; break;
        case BinaryOp::Pow: sym = "^"; break;
      }
      // -, / and ^ need right-operand grouping; ^ is right-associative.
      emit(n->a, n->bop == BinaryOp::Pow);
      os << sym;
      emit(n->b, n->bop != BinaryOp::Pow);
      return;
    }
  }
}

}  // namespace

std::string Expression::str() const {
  std::ostringstream os;
  print_node(root_, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  const std::string& src;
  const std::set<std::string>& placeholders;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw DomainError("parse error at position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  Expression parse() {
    Expression e = parse_sum();
    skip_ws();
    if (pos != src.size()) fail("trailing input");
    return e;
  }

  Expression parse_sum() {
    Expression e = parse_term();
    for (;;) {
      if (eat('+')) e = e + parse_term();
      else if (eat('-')) e = e - parse_term();
      else return e;
    }
  }

  Expression parse_term() {
    Expression e = parse_factor();
    for (;;) {
      if (eat('*')) e = e * parse_factor();
      else if (eat('/')) e = e / parse_factor();
      else return e;
    }
  }

  Expression parse_factor() {
    if (eat('-')) return -parse_factor();
    if (eat('+')) return parse_factor();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_atom();
    if (eat('^')) return pow(base, parse_factor());
    return base;
  }

  Expression parse_atom() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      Expression e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expression parse_number() {
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
      ++pos;
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    try {
      return Expression::constant(std::stod(src.substr(start, pos - start)));
    } catch (const std::exception&) {
      fail("bad number literal");
    }
  }

  Expression parse_ident() {
    std::size_t start = pos;
    while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                src[pos] == '_'))
      ++pos;
    const std::string name = src.substr(start, pos - start);
    static const std::map<std::string, UnaryOp> kFuncs = {
        {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"sinh", UnaryOp::Sinh},
        {"cosh", UnaryOp::Cosh}, {"tanh", UnaryOp::Tanh}, {"exp", UnaryOp::Exp},
        {"ln", UnaryOp::Ln},     {"sqrt", UnaryOp::Sqrt}, {"sinhc", UnaryOp::Sinhc}};
    if (auto it = kFuncs.find(name); it != kFuncs.end()) {
      if (!eat('(')) fail("expected '(' after function name '" + name + "'");
      Expression arg = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return Expression::unary(it->second, arg);
    }
    // coordinates: q<digits> / p<digits>, 1-based
    if ((name[0] == 'q' || name[0] == 'p') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const int idx = std::stoi(name.substr(1));
      if (idx < 1) fail("coordinate indices are 1-based");
      return name[0] == 'q' ? Expression::q(idx - 1) : Expression::p(idx - 1);
    }
    if (placeholders.count(name)) return Expression::placeholder(name);
    return Expression::param(name);
  }
};

}  // namespace

Expression parse_expression(const std::string& src,
                            const std::set<std::string>& placeholder_names) {
  Parser p{src, placeholder_names};
  return p.parse();
}

}  // namespace coalg
