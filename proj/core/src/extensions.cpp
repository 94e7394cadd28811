#include "coalg/extensions.hpp"

#include <cmath>

namespace coalg {
namespace extensions {

namespace {

Expression ph(const std::string& s) { return Expression::placeholder(s); }

Expression slot(const std::string& gen, int s) { return ph(site_tag(gen, s)); }

// bake numeric values for sigma / lambda
Expression bake(const Expression& e, const ParamSet& params) {
  return e.transform([&](const detail::Node& n) -> std::optional<Expression> {
    if (n.kind != detail::Node::Kind::Param) return std::nullopt;
    return Expression::constant(n.index < 0 ? params.scalar(n.name)
                                            : params.vector_entry(n.name, n.index));
  });
}

}  // namespace

Expression coaction_map(const std::string& gen) {
  const Expression sig = Expression::param("sigma");
  const Expression u = 1.0 / (1.0 - sig * slot("A-", 2));
  if (gen == "M") return slot("M", 1) + slot("M", 2);
  if (gen == "K") return slot("K", 2) + slot("K", 1) * u;
  if (gen == "B+")
    return slot("B+", 2) + slot("B+", 1) * u * u -
           2.0 * sig * slot("K", 1) * slot("A+", 2) * u -
           sig * sig * pow(slot("K", 1), 2.0) * slot("M", 2) * u * u;
  if (gen == "B-")
    return slot("B-", 2) + slot("B-", 1) * pow(1.0 - sig * slot("A-", 2), 2.0);
  throw UnresolvedSymbol("coaction is defined on gl(2,R) generators, got '" + gen + "'");
}

Expression comodule_coproduct(const std::string& gen) {
  const Expression sig = Expression::param("sigma");
  const Expression u = 1.0 / (1.0 - sig * slot("A-", 2));
  if (gen == "A-")
    return slot("A-", 2) + slot("A-", 1) * (1.0 - sig * slot("A-", 2));
  if (gen == "A+")
    return slot("A+", 2) + slot("A+", 1) * u + sig * slot("K", 1) * slot("M", 2) * u;
  if (gen == "M" || gen == "K" || gen == "B+" || gen == "B-") return coaction_map(gen);
  throw UnresolvedSymbol("unknown comodule generator '" + gen + "'");
}

Expression comodule_realization(const std::string& gen, int site) {
  const Expression q = Expression::q(site - 1), p = Expression::p(site - 1);
  const Expression lam = Expression::param("lambda", site - 1);
  if (gen == "B+") return q * q;
  if (gen == "B-") return p * p;
  if (gen == "K") return -(p * q) + lam * lam / 2.0;
  if (gen == "M") return -(lam * lam);
  if (gen == "A+") return -(lam * q);
  if (gen == "A-") return -(lam * p);
  throw UnresolvedSymbol("unknown comodule generator '" + gen + "'");
}

Expression comodule_realize(const Expression& tagged) {
  return tagged.transform([&](const detail::Node& n) -> std::optional<Expression> {
    if (n.kind != detail::Node::Kind::Placeholder) return std::nullopt;
    auto at = n.name.rfind('@');
    if (at == std::string::npos) return std::nullopt;
    const std::string gen = n.name.substr(0, at);
    const int site = std::stoi(n.name.substr(at + 1));
    return comodule_realization(gen, site);
  });
}

ComoduleSystem comodule_oscillator(double sigma, double lambda1, double lambda2) {
  ComoduleSystem sys;
  sys.sigma = sigma;
  sys.lambda1 = lambda1;
  sys.lambda2 = lambda2;
  sys.box = Box::standard();
  // keep 1 + sigma lambda2 p2 away from its zero on the sampling box
  if (std::abs(sigma * lambda2) >= 0.45)
    throw DomainError("comodule_oscillator: pole 1 + sigma lambda2 p2 crosses the box");

  ParamSet params;
  params.set("sigma", sigma);
  params.set("lambda", std::vector<double>{lambda1, lambda2});

  const Expression H2 = 0.5 * (coaction_map("B+") + coaction_map("B-"));
  // gl(2,R) Casimir, normalized so the sigma -> 0 limit is -(p2 q1 - p1 q2)^2/4
  const Expression C2 =
      -0.25 * (coaction_map("B-") * coaction_map("B+") -
               pow(coaction_map("K") + coaction_map("M") / 2.0, 2.0));
  sys.hamiltonian = bake(comodule_realize(H2), params);
  sys.casimir = bake(comodule_realize(C2), params);
  sys.pole_guard =
      1.0 + Expression::constant(sigma * lambda2) * Expression::p(1);
  return sys;
}

// ---------------------------------------------------------------------------
// loop coproducts

namespace {

void check_primitive(const CoalgebraSpec& spec) {
  for (const auto& g : spec.generators) {
    const Expression want = ph(g + "@L") + ph(g + "@R");
    if (!spec.coproduct.at(g).same_graph(want))
      throw DomainError("loop coproducts require the primitive coproduct (spec '" +
                        spec.name + "', generator '" + g + "')");
  }
}

void check_pole(double lambda, double eps) {
  if (std::abs(lambda) < 1e-12 || std::abs(lambda - eps) < 1e-12)
    throw DomainError("loop coproduct pole: lambda must avoid {0, eps}");
}

}  // namespace

std::map<std::string, Expression> loop_coproduct(const CoalgebraSpec& spec, int k,
                                                 double lambda, double eps,
                                                 const SiteConfig& config) {
  if (k < 2 || k > config.N)
    throw DomainError("loop_coproduct: k must lie in 2..N");
  check_pole(lambda, eps);
  check_primitive(spec);
  std::map<std::string, Expression> out;
  for (const auto& g : spec.generators) {
    Expression prim = 0.0;  // primitive (k-1)-coproduct: sum over sites 1..k-1
    for (int s = 1; s <= k - 1; ++s) prim = prim + ph(site_tag(g, s));
    Expression e = prim / Expression::constant(lambda) +
                   ph(site_tag(g, k)) / Expression::constant(lambda - eps);
    out.emplace(g, realize_sites(spec, e, config));
  }
  return out;
}

Expression loop_casimir(const CoalgebraSpec& spec, int casimir_index, int k, double lambda,
                        double eps, const SiteConfig& config) {
  auto maps = loop_coproduct(spec, k, lambda, eps, config);
  std::map<std::string, Expression> bind(maps.begin(), maps.end());
  return spec.casimirs.at(casimir_index).expr.substitute(bind);
}

LoopInvolutionReport loop_involution_check(const CoalgebraSpec& spec, int casimir_index,
                                           int N, double eps,
                                           const std::vector<double>& lambda_grid,
                                           const Box& box, int samples, double tol,
                                           const SiteConfig& config, std::uint64_t seed) {
  LoopInvolutionReport report;
  report.tol = tol;
  ParamSet params = config.params(spec);
  // cache the realized Casimir images per (k, lambda)
  std::map<std::pair<int, int>, Expression> images;
  for (int k = 2; k <= N; ++k)
    for (int a = 0; a < static_cast<int>(lambda_grid.size()); ++a)
      images.emplace(std::make_pair(k, a),
                     loop_casimir(spec, casimir_index, k, lambda_grid[a], eps, config));
  for (int i = 2; i <= N; ++i) {
    for (int k = i; k <= N; ++k) {
      for (int a = 0; a < static_cast<int>(lambda_grid.size()); ++a) {
        for (int c = 0; c < static_cast<int>(lambda_grid.size()); ++c) {
          const Expression& f = images.at({i, a});
          const Expression& g = images.at({k, c});
          for (int s = 0; s < samples; ++s) {
            PhasePoint x = box.sample(N, seed, s);
            const Jet jf = jet(f, x, params, 1);
            const Jet jg = jet(g, x, params, 1);
            const double denom = jf.gradient.norm() * jg.gradient.norm() + 1e-30;
            report.worst =
                std::max(report.worst, std::abs(poisson_bracket(jf, jg)) / denom);
          }
          ++report.pairs_checked;
        }
      }
    }
  }
  report.pass = report.worst <= tol;
  return report;
}

LoopStructureFit loop_structure_fit(const CoalgebraSpec& spec, int i, int k, double lambda,
                                    double mu, double eps, const SiteConfig& config,
                                    const Box& box, int samples, std::uint64_t seed) {
  if (i > k) std::swap(i, k);
  auto maps_l = loop_coproduct(spec, i, lambda, eps, config);
  auto maps_m = loop_coproduct(spec, k, mu, eps, config);
  std::map<std::string, Expression> bind_l(maps_l.begin(), maps_l.end());
  std::map<std::string, Expression> bind_m(maps_m.begin(), maps_m.end());
  ParamSet params = config.params(spec);

  const int l = static_cast<int>(spec.generators.size());
  std::vector<double> lhs, col1, col2;
  for (int a = 0; a < l; ++a) {
    for (int b = a + 1; b < l; ++b) {
      const Expression F = spec.bracket(a, b);
      const Expression F_l = F.substitute(bind_l);
      const Expression F_m = F.substitute(bind_m);
      const Expression& fa = maps_l.at(spec.generators[a]);
      const Expression& gb = maps_m.at(spec.generators[b]);
      for (int s = 0; s < samples; ++s) {
        PhasePoint x = box.sample(config.N, seed, s);
        lhs.push_back(poisson_bracket(fa, gb, x, params));
        col1.push_back(evaluate(F_l, x, params));
        col2.push_back(evaluate(F_m, x, params));
      }
    }
  }
  const long rows = static_cast<long>(lhs.size());
  Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(lhs.data(), rows);
  LoopStructureFit fit;
  double scale = y.cwiseAbs().maxCoeff();
  Eigen::VectorXd resid;
  if (i == k) {
    Eigen::MatrixXd A(rows, 2);
    A.col(0) = Eigen::Map<Eigen::VectorXd>(col1.data(), rows);
    A.col(1) = Eigen::Map<Eigen::VectorXd>(col2.data(), rows);
    Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    fit.f = c[0];
    fit.g = c[1];
    resid = y - A * c;
    scale = std::max(scale, A.cwiseAbs().maxCoeff());
  } else {
    Eigen::VectorXd A = Eigen::Map<Eigen::VectorXd>(col1.data(), rows);
    const double c = A.dot(y) / A.dot(A);
    fit.f = c;
    fit.g = 0.0;
    resid = y - c * A;
    scale = std::max(scale, A.cwiseAbs().maxCoeff());
  }
  fit.residual = resid.cwiseAbs().maxCoeff() / (scale + 1e-30);
  return fit;
}

}  // namespace extensions
}  // namespace coalg
