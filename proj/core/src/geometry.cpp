#include "coalg/geometry.hpp"

#include <cmath>

namespace coalg {

namespace {

Expression q_norm(int N) {
  Expression s = 0.0;
  for (int i = 0; i < N; ++i) s = s + Expression::q(i) * Expression::q(i);
  return sqrt(s);
}

PhasePoint q_only(const Eigen::VectorXd& q) {
  return PhasePoint(q, Eigen::VectorXd::Zero(q.size()));
}

// value, first and second derivative of a one-placeholder function at t
struct Curve2 {
  double v, d1, d2;
};
Curve2 eval_curve(const Expression& f, const std::string& placeholder, double t,
                  const ParamSet& params) {
  Expression g = f.substitute({{placeholder, Expression::q(0)}});
  Eigen::VectorXd q(1), p(1);
  q[0] = t;
  p[0] = 0.0;
  Jet j = jet(g, PhasePoint(q, p), params, 2);
  return {j.value, j.gradient[0], (*j.hessian)(0, 0)};
}

}  // namespace

MetricField MetricField::flat(int N) {
  MetricField m;
  m.N = N;
  m.kind = Kind::Flat;
  m.g.assign(N, std::vector<Expression>(N, Expression::constant(0.0)));
  for (int i = 0; i < N; ++i) m.g[i][i] = Expression::constant(1.0);
  return m;
}

MetricField MetricField::conformal(const Expression& f_in_r, int N) {
  MetricField m;
  m.N = N;
  m.kind = Kind::Conformal;
  m.conformal_f = f_in_r;
  Expression f = f_in_r.substitute({{"r", q_norm(N)}});
  Expression f2 = f * f;
  m.g.assign(N, std::vector<Expression>(N, Expression::constant(0.0)));
  for (int i = 0; i < N; ++i) m.g[i][i] = f2;
  return m;
}

MetricField MetricField::deformed(const Expression& g_in_x, double z, int N) {
  MetricField m;
  m.N = N;
  m.kind = Kind::Deformed;
  m.deformed_g = g_in_x;
  m.z = z;
  const Expression ze = Expression::constant(z);
  Expression q2tot = 0.0;
  for (int i = 0; i < N; ++i) q2tot = q2tot + Expression::q(i) * Expression::q(i);
  Expression gz = g_in_x.substitute({{"x", ze * q2tot}});
  m.g.assign(N, std::vector<Expression>(N, Expression::constant(0.0)));
  for (int i = 0; i < N; ++i) {
    const Expression qi2 = Expression::q(i) * Expression::q(i);
    Expression weight = 0.0;
    for (int k = 0; k < i; ++k) weight = weight + ze * Expression::q(k) * Expression::q(k);
    for (int l = i + 1; l < N; ++l)
      weight = weight - ze * Expression::q(l) * Expression::q(l);
    // 2 z q_i^2 / sinh(z q_i^2) = 2 / sinhc(z q_i^2)
    m.g[i][i] = (2.0 / sinhc(ze * qi2)) * exp(weight) / gz;
  }
  return m;
}

MetricField MetricField::generic(std::vector<std::vector<Expression>> components) {
  MetricField m;
  m.N = static_cast<int>(components.size());
  m.kind = Kind::Generic;
  m.g = std::move(components);
  return m;
}

Eigen::MatrixXd MetricField::value_at(const Eigen::VectorXd& q, const ParamSet& params) const {
  PhasePoint x = q_only(q);
  Eigen::MatrixXd out(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = evaluate(g[i][j], x, params);
  return out;
}

bool MetricField::positive_definite_at(const Eigen::VectorXd& q,
                                       const ParamSet& params) const {
  Eigen::MatrixXd m = value_at(q, params);
  for (int k = 1; k <= N; ++k) {
    if (m.topLeftCorner(k, k).determinant() <= 0.0) return false;
  }
  return true;
}

namespace {

struct MetricDerivs {
  Eigen::MatrixXd g;                    // g_ij
  std::vector<Eigen::MatrixXd> dg;      // dg[k](i,j) = d_k g_ij
  std::vector<std::vector<Eigen::MatrixXd>> ddg;  // ddg[k][l](i,j) = d_k d_l g_ij
};

MetricDerivs derivs_jets(const MetricField& metric, const Eigen::VectorXd& q,
                         const ParamSet& params) {
  const int N = metric.N;
  MetricDerivs d;
  d.g.resize(N, N);
  d.dg.assign(N, Eigen::MatrixXd::Zero(N, N));
  d.ddg.assign(N, std::vector<Eigen::MatrixXd>(N, Eigen::MatrixXd::Zero(N, N)));
  PhasePoint x = q_only(q);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Jet jt = jet(metric.g[i][j], x, params, 2);
      d.g(i, j) = jt.value;
      for (int k = 0; k < N; ++k) {
        d.dg[k](i, j) = jt.gradient[k];
        for (int l = 0; l < N; ++l) d.ddg[k][l](i, j) = (*jt.hessian)(k, l);
      }
    }
  }
  return d;
}

MetricDerivs derivs_fd(const MetricField& metric, const Eigen::VectorXd& q,
                       const ParamSet& params, double h) {
  const int N = metric.N;
  auto value = [&](const Eigen::VectorXd& qq) { return metric.value_at(qq, params); };
  MetricDerivs d;
  d.g = value(q);
  d.dg.assign(N, Eigen::MatrixXd::Zero(N, N));
  d.ddg.assign(N, std::vector<Eigen::MatrixXd>(N, Eigen::MatrixXd::Zero(N, N)));
  for (int k = 0; k < N; ++k) {
    Eigen::VectorXd up = q, dn = q;
    up[k] += h;
    dn[k] -= h;
    d.dg[k] = (value(up) - value(dn)) / (2.0 * h);
    d.ddg[k][k] = (value(up) - 2.0 * d.g + value(dn)) / (h * h);
  }
  for (int k = 0; k < N; ++k) {
    for (int l = k + 1; l < N; ++l) {
      Eigen::VectorXd pp = q, pm = q, mp = q, mm = q;
      pp[k] += h; pp[l] += h;
      pm[k] += h; pm[l] -= h;
      mp[k] -= h; mp[l] += h;
      mm[k] -= h; mm[l] -= h;
      Eigen::MatrixXd mixed = (value(pp) - value(pm) - value(mp) + value(mm)) / (4.0 * h * h);
      d.ddg[k][l] = mixed;
      d.ddg[l][k] = mixed;
    }
  }
  return d;
}

}  // namespace

double scalar_curvature_numeric(const MetricField& metric, const Eigen::VectorXd& q,
                                const ParamSet& params, double fd_step) {
  const int N = metric.N;
  if (q.size() != N) throw DomainError("scalar_curvature_numeric: wrong point dimension");
  MetricDerivs d =
      fd_step > 0.0 ? derivs_fd(metric, q, params, fd_step) : derivs_jets(metric, q, params);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(d.g);
  if (!lu.isInvertible()) throw DomainError("singular metric at evaluation point");
  Eigen::MatrixXd gi = lu.inverse();

  // Christoffel symbols Gamma^k_ij
  std::vector<Eigen::MatrixXd> Gamma(N, Eigen::MatrixXd::Zero(N, N));
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int l = 0; l < N; ++l)
          s += gi(k, l) * (d.dg[i](l, j) + d.dg[j](i, l) - d.dg[l](i, j));
        Gamma[k](i, j) = 0.5 * s;
      }

  // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
  std::vector<Eigen::MatrixXd> dgi(N);
  for (int m = 0; m < N; ++m) dgi[m] = -gi * d.dg[m] * gi;

  // d_m Gamma^k_ij
  auto dGamma = [&](int m, int k, int i, int j) {
    double s = 0.0;
    for (int l = 0; l < N; ++l) {
      s += dgi[m](k, l) * (d.dg[i](l, j) + d.dg[j](i, l) - d.dg[l](i, j));
      s += gi(k, l) * (d.ddg[m][i](l, j) + d.ddg[m][j](i, l) - d.ddg[m][l](i, j));
    }
    return 0.5 * s;
  };

  // Ric_ij = d_k Gamma^k_ij - d_j Gamma^k_ik + Gamma^k_kl Gamma^l_ij
  //          - Gamma^k_jl Gamma^l_ik
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double s = 0.0;
      for (int k = 0; k < N; ++k) {
        s += dGamma(k, k, i, j) - dGamma(j, k, i, k);
        for (int l = 0; l < N; ++l)
          s += Gamma[k](k, l) * Gamma[l](i, j) - Gamma[k](j, l) * Gamma[l](i, k);
      }
      ric(i, j) = s;
    }

  return (gi * ric).trace();
}

double scalar_curvature_conformal(const Expression& f_in_r, int N, double r,
                                  const ParamSet& params) {
  if (r <= 0.0) throw DomainError("scalar_curvature_conformal: r must be positive");
  Curve2 f = eval_curve(f_in_r, "r", r, params);
  if (f.v <= 0.0) throw DomainError("conformal factor must be positive");
  const double f2 = f.v * f.v;
  return -(N - 1) *
         (2.0 * f.d2 * f.v + 2.0 * (N - 1) * f.v * f.d1 / r + (N - 4) * f.d1 * f.d1) /
         (f2 * f2);
}

double gaussian_curvature_z(const Expression& g_in_x, double z, double x,
                            const ParamSet& params) {
  Curve2 g = eval_curve(g_in_x, "x", x, params);
  if (g.v <= 0.0) throw DomainError("deformed metric function g must be positive");
  return z * (g.d1 * std::cosh(x) +
              (g.d2 - g.v - g.d1 * g.d1 / g.v) * std::sinh(x));
}

double scalar_curvature_z3(const Expression& g_in_x, double z, double x,
                           const ParamSet& params) {
  Curve2 g = eval_curve(g_in_x, "x", x, params);
  if (g.v <= 0.0) throw DomainError("deformed metric function g must be positive");
  return z * (6.0 * g.d1 * std::cosh(x) +
              (4.0 * g.d2 - 5.0 * g.v - 5.0 * g.d1 * g.d1 / g.v) * std::sinh(x));
}

}  // namespace coalg
