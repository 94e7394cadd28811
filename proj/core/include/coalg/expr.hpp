#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coalg/errors.hpp"

namespace coalg {

// Phase point of an N-degree-of-freedom system, canonical pairs (q_i, p_i).
struct PhasePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;

  PhasePoint() = default;
  PhasePoint(Eigen::VectorXd q_in, Eigen::VectorXd p_in);
  static PhasePoint zero(int n);

  int dof() const { return static_cast<int>(q.size()); }
  // Flattened (q_1..q_N, p_1..p_N) view used for gradients and integrators.
  Eigen::VectorXd flat() const;
  static PhasePoint from_flat(const Eigen::VectorXd& v);
};

// Named scalar and vector parameters. Lookup of a missing name throws.
class ParamSet {
 public:
  ParamSet& set(const std::string& name, double value);
  ParamSet& set(const std::string& name, Eigen::VectorXd values);
  ParamSet& set(const std::string& name, const std::vector<double>& values);

  bool has_scalar(const std::string& name) const;
  bool has_vector(const std::string& name) const;
  double scalar(const std::string& name) const;
  double vector_entry(const std::string& name, int index) const;
  const std::map<std::string, double>& scalars() const { return scalars_; }
  const std::map<std::string, Eigen::VectorXd>& vectors() const { return vectors_; }

 private:
  std::map<std::string, double> scalars_;
  std::map<std::string, Eigen::VectorXd> vectors_;
};

enum class UnaryOp { Neg, Sin, Cos, Sinh, Cosh, Tanh, Exp, Ln, Sqrt, Sinhc };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

namespace detail {
struct Node;
using NodeRef = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Constant, Coord, Param, Placeholder, Unary, Binary };
  Kind kind;
  double value = 0.0;     // Constant
  bool momentum = false;  // Coord: q_index (false) or p_index (true)
  int index = -1;         // Coord index; Param vector index (-1 for scalar)
  std::string name;       // Param / Placeholder
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  NodeRef a, b;
};
}  // namespace detail

// Value, gradient and (optionally) Hessian of a phase-space function,
// partials ordered q_1..q_N, p_1..p_N.
struct Jet {
  double value = 0.0;
  Eigen::VectorXd gradient;
  std::optional<Eigen::MatrixXd> hessian;
};

// Immutable term graph over canonical coordinates, parameters and placeholder
// symbols. Construction folds constants and the x+0, x*1, x*0 rewrites; no
// other simplification is attempted.
class Expression {
 public:
  Expression() : Expression(constant(0.0)) {}
  /*implicit*/ Expression(double c) : Expression(constant(c)) {}
  explicit Expression(detail::NodeRef r) : root_(std::move(r)) {}

  static Expression constant(double c);
  static Expression q(int i);
  static Expression p(int i);
  static Expression param(const std::string& name);
  static Expression param(const std::string& name, int index);
  static Expression placeholder(const std::string& name);

  static Expression unary(UnaryOp op, const Expression& a);
  static Expression binary(BinaryOp op, const Expression& a, const Expression& b);

  // Replaces placeholder symbols by expressions; unbound placeholders are kept.
  Expression substitute(const std::map<std::string, Expression>& bindings) const;
  // Structural rebuild: fn returning a replacement expression for a node stops
  // recursion below it. Used for site retagging and coordinate remapping.
  Expression transform(
      const std::function<std::optional<Expression>(const detail::Node&)>& fn) const;

  bool same_graph(const Expression& other) const;
  bool is_constant() const;
  double constant_value() const;  // requires is_constant()

  std::set<std::string> placeholders() const;
  int max_coord_index() const;  // -1 when no coordinates occur
  std::size_t node_count() const;

  std::string str() const;

  const detail::NodeRef& root() const { return root_; }

 private:
  detail::NodeRef root_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);

Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression sinh(const Expression& a);
Expression cosh(const Expression& a);
Expression tanh(const Expression& a);
Expression exp(const Expression& a);
Expression ln(const Expression& a);
Expression sqrt(const Expression& a);
// sinh(x)/x continued through x = 0; exact series used for small |x|.
Expression sinhc(const Expression& a);
Expression pow(const Expression& a, const Expression& b);
Expression pow(const Expression& a, double c);

// Evaluation. Throws UnresolvedSymbol for unbound placeholders / missing
// parameters and DomainError for domain violations or non-finite intermediates.
double evaluate(const Expression& f, const PhasePoint& x, const ParamSet& params);

// Exact forward-mode derivatives, order 1 or 2; value identical to evaluate().
Jet jet(const Expression& f, const PhasePoint& x, const ParamSet& params, int order);

// Canonical Poisson bracket {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i).
double poisson_bracket(const Expression& f, const Expression& g, const PhasePoint& x,
                       const ParamSet& params);
// Bracket of precomputed order-1 jets.
double poisson_bracket(const Jet& f, const Jet& g);
// Order-1 jet of {f, g}, from order-2 jets of f and g.
Jet poisson_bracket_jet(const Expression& f, const Expression& g, const PhasePoint& x,
                        const ParamSet& params);

// Independent central-difference estimate of the canonical bracket, O(h^2).
double fd_bracket_oracle(const Expression& f, const Expression& g, const PhasePoint& x,
                         const ParamSet& params, double h);

// Exact derivative with respect to a placeholder symbol (coordinates and
// parameters are treated as constants). Used to compose printed formulas that
// contain derivatives of user-supplied functions.
Expression derive(const Expression& f, const std::string& placeholder);

// Minimal infix grammar: identifiers, numbers, + - * / ^, unary function
// calls, parentheses. q1..qN / p1..pN are coordinates; identifiers in
// `placeholder_names` parse as placeholders, all others as scalar parameters.
Expression parse_expression(const std::string& src,
                            const std::set<std::string>& placeholder_names = {});

}  // namespace coalg
