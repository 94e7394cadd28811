#include "coalg/coalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace coalg {

namespace {

// "X@s" -> (X, s); site tags are 1-based integers.
std::optional<std::pair<std::string, int>> parse_tag(const std::string& name) {
  auto at = name.rfind('@');
  if (at == std::string::npos || at + 1 >= name.size()) return std::nullopt;
  int site = 0;
  for (std::size_t i = at + 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    site = site * 10 + (name[i] - '0');
  }
  return std::make_pair(name.substr(0, at), site);
}

}  // namespace

std::string site_tag(const std::string& gen, int site) {
  return gen + "@" + std::to_string(site);
}

int CoalgebraSpec::generator_index(const std::string& gen) const {
  auto it = std::find(generators.begin(), generators.end(), gen);
  if (it == generators.end())
    throw UnresolvedSymbol("unknown generator '" + gen + "' of coalgebra " + name);
  return static_cast<int>(it - generators.begin());
}

Expression CoalgebraSpec::bracket(int i, int j) const {
  if (i == j) return Expression::constant(0.0);
  if (i < j) {
    auto it = bracket_table.find({i, j});
    return it == bracket_table.end() ? Expression::constant(0.0) : it->second;
  }
  auto it = bracket_table.find({j, i});
  return it == bracket_table.end() ? Expression::constant(0.0) : -it->second;
}

int CoalgebraSpec::nonlinear_casimir_count() const {
  int n = 0;
  for (const auto& c : casimirs)
    if (!c.linear) ++n;
  return n;
}

SiteConfig SiteConfig::uniform(int n, double value, double z) {
  SiteConfig c;
  c.N = n;
  c.site_values = Eigen::VectorXd::Constant(n, value);
  c.z = z;
  return c;
}
SiteConfig SiteConfig::from(std::vector<double> values, double z) {
  SiteConfig c;
  c.N = static_cast<int>(values.size());
  c.site_values =
      Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
  c.z = z;
  return c;
}
ParamSet SiteConfig::params(const CoalgebraSpec& spec) const {
  if (site_values.size() != N)
    throw DomainError("SiteConfig: expected exactly N per-site entries");
  ParamSet p;
  p.set(spec.site_param, Eigen::VectorXd(site_values));
  p.set("z", z);
  return p;
}

Expression coproduct_left(const CoalgebraSpec& spec, const std::string& gen, int m) {
  if (m < 1) throw DomainError("coproduct order must be >= 1");
  spec.generator_index(gen);
  if (m == 1) return Expression::placeholder(site_tag(gen, 1));
  Expression prev = coproduct_left(spec, gen, m - 1);
  // apply Delta to the last slot: site m-1 symbols spread over sites (m-1, m);
  // coproduct templates may reference other generators' tags (e.g. e^{zJ-})
  std::map<std::string, Expression> retag;
  for (const auto& h : spec.generators) {
    retag.emplace(h + "@L", Expression::placeholder(site_tag(h, m - 1)));
    retag.emplace(h + "@R", Expression::placeholder(site_tag(h, m)));
  }
  std::map<std::string, Expression> bind;
  for (const auto& g : spec.generators)
    bind.emplace(site_tag(g, m - 1), spec.coproduct.at(g).substitute(retag));
  return prev.substitute(bind);
}

Expression coproduct_right(const CoalgebraSpec& spec, const std::string& gen, int m) {
  if (m < 1) throw DomainError("coproduct order must be >= 1");
  spec.generator_index(gen);
  if (m == 1) return Expression::placeholder(site_tag(gen, 1));
  Expression prev = coproduct_right(spec, gen, m - 1);
  // apply Delta to the first slot: old sites 2..m-1 move up by one,
  // site 1 spreads over sites (1, 2)
  Expression shifted = prev.transform([&](const detail::Node& n) -> std::optional<Expression> {
    if (n.kind != detail::Node::Kind::Placeholder) return std::nullopt;
    auto tag = parse_tag(n.name);
    if (!tag || tag->second < 2) return std::nullopt;
    return Expression::placeholder(site_tag(tag->first, tag->second + 1));
  });
  std::map<std::string, Expression> retag;
  for (const auto& h : spec.generators) {
    retag.emplace(h + "@L", Expression::placeholder(site_tag(h, 1)));
    retag.emplace(h + "@R", Expression::placeholder(site_tag(h, 2)));
  }
  std::map<std::string, Expression> bind;
  for (const auto& g : spec.generators)
    bind.emplace(site_tag(g, 1), spec.coproduct.at(g).substitute(retag));
  return shifted.substitute(bind);
}

Expression shift_sites(const Expression& e, int offset) {
  if (offset == 0) return e;
  return e.transform([&](const detail::Node& n) -> std::optional<Expression> {
    if (n.kind != detail::Node::Kind::Placeholder) return std::nullopt;
    auto tag = parse_tag(n.name);
    if (!tag) return std::nullopt;
    return Expression::placeholder(site_tag(tag->first, tag->second + offset));
  });
}

Expression realize_sites(const CoalgebraSpec& spec, const Expression& e,
                         const SiteConfig& config) {
  return e.transform([&](const detail::Node& n) -> std::optional<Expression> {
    if (n.kind != detail::Node::Kind::Placeholder) return std::nullopt;
    auto tag = parse_tag(n.name);
    if (!tag) return std::nullopt;
    const auto& [gen, site] = *tag;
    auto it = spec.realization.find(gen);
    if (it == spec.realization.end())
      throw UnresolvedSymbol("no realization for generator '" + gen + "'");
    if (site < 1 || site > config.N)
      throw DomainError("site " + std::to_string(site) + " outside 1.." +
                        std::to_string(config.N));
    const int s = site - 1;
    return it->second.transform(
        [&](const detail::Node& r) -> std::optional<Expression> {
          if (r.kind == detail::Node::Kind::Coord && r.index == 0)
            return r.momentum ? Expression::p(s) : Expression::q(s);
          if (r.kind == detail::Node::Kind::Param && r.name == spec.site_param &&
              r.index == 0)
            return Expression::param(spec.site_param, s);
          return std::nullopt;
        });
  });
}

RealizedSystem realize(const CoalgebraSpec& spec, const SiteConfig& config) {
  if (config.N < 1) throw DomainError("realize: N must be >= 1");
  if (config.site_values.size() != config.N)
    throw DomainError("realize: expected exactly N per-site parameter entries");
  RealizedSystem sys;
  sys.spec = spec;
  sys.config = config;
  for (const auto& g : spec.generators)
    sys.realized_generators.emplace(
        g, realize_sites(spec, coproduct_left(spec, g, config.N), config));
  return sys;
}

namespace {

Expression extend_casimir(const CoalgebraSpec& spec, const Expression& casimir, int m,
                          Side side) {
  std::map<std::string, Expression> bind;
  for (const auto& g : spec.generators)
    bind.emplace(g, side == Side::Left ? coproduct_left(spec, g, m)
                                       : coproduct_right(spec, g, m));
  return casimir.substitute(bind);
}

}  // namespace

std::vector<MotionIntegral> casimir_integrals(const CoalgebraSpec& spec,
                                              const SiteConfig& config, Side side) {
  std::vector<MotionIntegral> out;
  const int N = config.N;
  for (int j = 0; j < static_cast<int>(spec.casimirs.size()); ++j) {
    if (spec.casimirs[j].linear) continue;
    for (int m = 2; m <= N; ++m) {
      MotionIntegral mi;
      mi.casimir = j;
      mi.m = m;
      mi.side = side;
      const std::string base = spec.casimirs[j].name;
      mi.name = side == Side::Left ? base + "^(" + std::to_string(m) + ")"
                                   : base + "_(" + std::to_string(m) + ")";
      Expression e = extend_casimir(spec, spec.casimirs[j].expr, m, side);
      if (side == Side::Right) e = shift_sites(e, N - m);
      mi.expr = realize_sites(spec, e, config);
      out.push_back(std::move(mi));
    }
  }
  return out;
}

std::vector<double> casimir_site_constants(const CoalgebraSpec& spec,
                                           const SiteConfig& config, int casimir_index) {
  std::vector<double> out;
  const auto& cas = spec.casimirs.at(casimir_index);
  ParamSet params = config.params(spec);
  Box box = Box::standard();
  for (int s = 1; s <= config.N; ++s) {
    Expression one = extend_casimir(spec, cas.expr, 1, Side::Left);
    one = shift_sites(one, s - 1);
    Expression realized = realize_sites(spec, one, config);
    out.push_back(evaluate(realized, box.sample(config.N, 17, s), params));
  }
  return out;
}

Expression build_hamiltonian(const RealizedSystem& system, const Expression& H) {
  for (const auto& ph : H.placeholders()) {
    if (!system.realized_generators.count(ph))
      throw UnresolvedSymbol("Hamiltonian ansatz references unknown symbol '" + ph + "'");
  }
  std::map<std::string, Expression> bind(system.realized_generators.begin(),
                                         system.realized_generators.end());
  return H.substitute(bind);
}

RealizedSystem realize_with_hamiltonian(const CoalgebraSpec& spec, const SiteConfig& config,
                                        const Expression& H) {
  RealizedSystem sys = realize(spec, config);
  sys.hamiltonian = build_hamiltonian(sys, H);
  sys.left_integrals = casimir_integrals(spec, config, Side::Left);
  sys.right_integrals = casimir_integrals(spec, config, Side::Right);
  return sys;
}

PoissonMapReport check_poisson_map(const CoalgebraSpec& spec, const SiteConfig& config,
                                   int samples, double tol, const Box& box,
                                   std::uint64_t seed) {
  if (samples < 1) throw DomainError("check_poisson_map: samples must be >= 1");
  RealizedSystem sys = realize(spec, config);
  ParamSet params = config.params(spec);
  std::map<std::string, Expression> bind(sys.realized_generators.begin(),
                                         sys.realized_generators.end());

  PoissonMapReport report;
  report.tol = tol;
  const int l = static_cast<int>(spec.generators.size());
  for (int i = 0; i < l; ++i) {
    for (int j = i + 1; j < l; ++j) {
      const Expression& f = sys.realized_generators.at(spec.generators[i]);
      const Expression& g = sys.realized_generators.at(spec.generators[j]);
      const Expression rhs = spec.bracket(i, j).substitute(bind);
      double worst = 0.0;
      for (int s = 0; s < samples; ++s) {
        PhasePoint x = box.sample(config.N, seed, s);
        try {
          const Jet jf = jet(f, x, params, 1);
          const Jet jg = jet(g, x, params, 1);
          const double lhs = poisson_bracket(jf, jg);
          const double want = evaluate(rhs, x, params);
          const double denom = jf.gradient.norm() * jg.gradient.norm() + 1e-30;
          worst = std::max(worst, std::abs(lhs - want) / denom);
        } catch (const DomainError& e) {
          throw DomainError(std::string(e.what()) + " [sample " + std::to_string(s) +
                            " of poisson-map check, pair {" + spec.generators[i] + "," +
                            spec.generators[j] + "}]");
        }
      }
      report.pairs.push_back({spec.generators[i], spec.generators[j], worst});
      report.worst = std::max(report.worst, worst);
    }
  }
  report.pass = report.worst <= tol;
  return report;
}

bool integrability_condition(int s, int R, int N) {
  if (s < 1 || R < 1 || N < 2) throw DomainError("integrability_condition: bad arguments");
  // s <= R - (R-1)/N, in exact integer arithmetic
  return static_cast<long>(s) * N <= static_cast<long>(R) * N - (R - 1);
}

int generic_dimension(int l, int r) {
  if (l < 1 || r < 0) throw DomainError("generic_dimension: bad arguments");
  if ((l - r) % 2 != 0)
    throw OddDimension("generic dimension (l - r)/2 undefined: l - r is odd");
  return (l - r) / 2;
}

}  // namespace coalg
