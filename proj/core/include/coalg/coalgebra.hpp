#pragma once

#include <map>
#include <string>
#include <vector>

#include "coalg/expr.hpp"
#include "coalg/sampling.hpp"

namespace coalg {

// A Poisson coalgebra: generators, antisymmetric bracket table, Casimir
// functions, a two-site coproduct rule per generator and a one-site
// symplectic realization template.
//
// Symbol conventions: the bracket table, Casimirs and Hamiltonian ansatz are
// expressions over plain generator placeholders ("J+"). Multi-site
// expressions tag the site: "J+@3". Coproduct templates use "J+@L" / "J+@R".
// Realization templates act on (q1, p1) and the site parameter entry 0; the
// engine remaps both when placing a generator at site s.
struct CoalgebraSpec {
  struct Casimir {
    std::string name;
    Expression expr;
    bool linear = false;
  };

  std::string name;
  std::vector<std::string> generators;
  // upper-triangle table, keyed by generator indices (i, j) with i < j
  std::map<std::pair<int, int>, Expression> bracket_table;
  std::vector<Casimir> casimirs;
  std::map<std::string, Expression> coproduct;
  std::map<std::string, Expression> realization;
  std::string site_param;  // "b" for sl(2,R) kin, "lambda" for h6

  int generator_index(const std::string& gen) const;  // throws UnresolvedSymbol
  // {X_i, X_j} as an expression over plain generator symbols (antisymmetry
  // resolved from the stored triangle; zero when the pair is not listed).
  Expression bracket(int i, int j) const;
  int nonlinear_casimir_count() const;
};

// One N-site instantiation: per-site parameter values plus the shared
// deformation parameter (z = 0 for undeformed coalgebras).
struct SiteConfig {
  int N = 0;
  Eigen::VectorXd site_values;
  double z = 0.0;

  static SiteConfig uniform(int n, double value, double z = 0.0);
  static SiteConfig from(std::vector<double> values, double z = 0.0);
  // Parameter set carrying the per-site vector under `site_param` and z.
  ParamSet params(const CoalgebraSpec& spec) const;
};

enum class Side { Left, Right };

// m-th coproduct of one Casimir, realized on the N-site phase space.
// Left integrals are supported on sites 1..m, right ones on N-m+1..N.
struct MotionIntegral {
  std::string name;
  int casimir = 0;  // index into spec.casimirs
  int m = 0;
  Side side = Side::Left;
  Expression expr;
};

struct RealizedSystem {
  CoalgebraSpec spec;
  SiteConfig config;
  std::map<std::string, Expression> realized_generators;
  Expression hamiltonian;  // set by build_hamiltonian
  std::vector<MotionIntegral> left_integrals;
  std::vector<MotionIntegral> right_integrals;
};

std::string site_tag(const std::string& gen, int site);

// m-th coproduct on abstract sites 1..m via the left recursion
// Delta^(m) = (id x ... x id x Delta) o Delta^(m-1); m = 1 is the identity
// embedding. Result is an expression over tagged site symbols.
Expression coproduct_left(const CoalgebraSpec& spec, const std::string& gen, int m);
// Right recursion Delta_R^(m) = (Delta x id x ... x id) o Delta_R^(m-1),
// also on abstract sites 1..m; coassociativity makes it pointwise equal to
// the left expansion (a tested property, never assumed).
Expression coproduct_right(const CoalgebraSpec& spec, const std::string& gen, int m);

// Retags every site symbol "X@s" to "X@(s+offset)".
Expression shift_sites(const Expression& e, int offset);

// Replaces every tagged generator symbol by its one-site realization on
// (q_s, p_s) with the site-s parameter entry.
Expression realize_sites(const CoalgebraSpec& spec, const Expression& e,
                         const SiteConfig& config);

// N-site realized generators (no Hamiltonian yet).
RealizedSystem realize(const CoalgebraSpec& spec, const SiteConfig& config);

// Realized m-th coproducts of the nonlinear Casimirs, m = 2..N (the m = 1
// values are the per-site leaf constants and are excluded).
std::vector<MotionIntegral> casimir_integrals(const CoalgebraSpec& spec,
                                              const SiteConfig& config, Side side);

// Per-site constants D(C_j) of every Casimir (evaluated; they are constant on
// the leaf by construction).
std::vector<double> casimir_site_constants(const CoalgebraSpec& spec,
                                           const SiteConfig& config, int casimir_index);

// Substitutes realized generators into an ansatz H(X_1, ..., X_l).
Expression build_hamiltonian(const RealizedSystem& system, const Expression& H);
RealizedSystem realize_with_hamiltonian(const CoalgebraSpec& spec, const SiteConfig& config,
                                        const Expression& H);

// Numerical check that the realized N-th coproduct is a Poisson map: for every
// generator pair, |{D(X_i), D(X_j)} - D({X_i, X_j})| normalized by gradient
// norms, maximized over sampled points.
struct PoissonMapReport {
  struct Pair {
    std::string gen_i, gen_j;
    double max_residual = 0.0;
  };
  std::vector<Pair> pairs;
  double worst = 0.0;
  double tol = 0.0;
  bool pass = false;
};
PoissonMapReport check_poisson_map(const CoalgebraSpec& spec, const SiteConfig& config,
                                   int samples, double tol, const Box& box = Box::standard(),
                                   std::uint64_t seed = 1);

// Necessary condition s <= R - (R-1)/N for complete integrability of an
// s-dimensional realization with R nonlinear Casimirs at N sites.
bool integrability_condition(int s, int R, int N);
// Maximal ("generic") realization dimension s_m = (l - r)/2.
int generic_dimension(int l, int r);

}  // namespace coalg
