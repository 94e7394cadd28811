#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coalg/expr.hpp"

namespace coalg {

// Position-space metric with component expressions g_ij(q), used for the
// curvature diagnostics of the coalgebra spaces.
struct MetricField {
  enum class Kind { Flat, Conformal, Deformed, Generic };

  int N = 0;
  std::vector<std::vector<Expression>> g;  // N x N, symmetric
  Kind kind = Kind::Generic;
  Expression conformal_f;  // Kind::Conformal: f(|q|), placeholder "r"
  Expression deformed_g;   // Kind::Deformed: g(x), placeholder "x"
  double z = 0.0;          // Kind::Deformed

  static MetricField flat(int N);
  // ds^2 = f(|q|)^2 dq^2
  static MetricField conformal(const Expression& f_in_r, int N);
  // ds^2 = (1/g(z q^2)) sum_i 2 z q_i^2 / sinh(z q_i^2)
  //        e^{z sum_{k<i} q_k^2 - z sum_{l>i} q_l^2} dq_i^2
  static MetricField deformed(const Expression& g_in_x, double z, int N);
  static MetricField generic(std::vector<std::vector<Expression>> components);

  Eigen::MatrixXd value_at(const Eigen::VectorXd& q, const ParamSet& params) const;
  // leading-principal-minor test
  bool positive_definite_at(const Eigen::VectorXd& q, const ParamSet& params) const;
};

// Scalar curvature by the Christoffel -> Ricci -> trace pipeline. Metric
// derivatives come from exact jets when fd_step <= 0, otherwise from central
// differences with the given step (the independent oracle mode). Sign
// convention: positive for the round sphere; the round metric of sectional
// curvature kappa gives N(N-1) kappa.
double scalar_curvature_numeric(const MetricField& metric, const Eigen::VectorXd& q,
                                const ParamSet& params = {}, double fd_step = 0.0);

// Closed form for ds^2 = f(|q|)^2 dq^2, with f', f'' taken by differentiation
// of f at r = |q|.
double scalar_curvature_conformal(const Expression& f_in_r, int N, double r,
                                  const ParamSet& params = {});

// Closed forms for the deformed metric: Gaussian curvature at N = 2 and
// scalar curvature at N = 3, as functions of x = z q^2.
double gaussian_curvature_z(const Expression& g_in_x, double z, double x,
                            const ParamSet& params = {});
double scalar_curvature_z3(const Expression& g_in_x, double z, double x,
                           const ParamSet& params = {});

}  // namespace coalg
