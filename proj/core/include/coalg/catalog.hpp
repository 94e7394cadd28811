#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coalg/algebras.hpp"
#include "coalg/geometry.hpp"

namespace coalg {
namespace catalog {

enum class Chart { Poincare, Beltrami };

// One constructed Hamiltonian family member: Hamiltonian, its integral family,
// sampling box, trajectory guards and the classification claim. All numeric
// parameters are baked into the expressions; `params` records them.
struct CatalogEntry {
  std::string id;
  int N = 0;
  Expression hamiltonian;
  std::vector<MotionIntegral> integrals;
  Box box;
  std::vector<Expression> guards;  // must stay away from zero along trajectories
  std::string claimed_class;       // integrable | QMS | MS | quasi-integrable
  std::string anchor;              // printed by the catalog listing
  std::string notes;
  ParamSet params;
  std::map<std::string, double> tracked_constants;  // leaf constants (b_i, lambda^2, ...)
  std::optional<MetricField> metric;
};

// --- sl(2,R) Euclidean families -------------------------------------------
// H = p^2/2 + F(q^2) + sum_i b_i/(2 q_i^2); F is an expression in "s".
CatalogEntry evans(const Expression& F, const std::vector<double>& b, int N);
// H = p^2/2 - e (q.p) G(q^2) + e F(q^2) + sum_i b_i/(2 q_i^2)
CatalogEntry em_flat(const Expression& F, const Expression& G, double e,
                     const std::vector<double>& b, int N);
struct EmFields {
  Expression psi;
  std::vector<Expression> A;  // vector potential, 3 components
  std::vector<Expression> E;  // electric field, 3 components (magnetic field is 0)
};
EmFields em_fields_3d(const Expression& F, const Expression& G, double e,
                      const std::vector<double>& b);

// --- constant curvature ----------------------------------------------------
CatalogEntry free_constant_curvature(Chart chart, double kappa, int N);
// U is an expression in "s" (the squared radial coordinate of the chart).
CatalogEntry curved_evans(const Expression& U, double kappa, const std::vector<double>& b,
                          int N, Chart chart);
CatalogEntry curved_sw(double omega, double kappa, const std::vector<double>& b, int N,
                       Chart chart);
CatalogEntry curved_kc(double k, double kappa, const std::vector<double>& b, int N,
                       Chart chart);

// --- spherically symmetric conformal spaces --------------------------------
// f is an expression in "r" = |q|; H = p^2/(2 f(|q|)^2) (+ U(|q|) + centrifugal)
CatalogEntry conformal_free(const Expression& f, int N);
CatalogEntry conformal_potential(const Expression& f, const Expression& U,
                                 const std::vector<double>& b, int N);

enum class DarbouxVariant { I, II, IIIa, IIIb, IV };
struct DarbouxParams {
  double k = 1.0;  // IIIb
  double a = 2.0;  // IV
};
CatalogEntry darboux(DarbouxVariant variant, int N, const DarbouxParams& params = {});
CatalogEntry multifold_kepler(double a, double b, double nu, int N);
CatalogEntry taub_nut(double m, int N);

// --- deformed families ------------------------------------------------------
// g is an expression in "x" = z q^2 with g(0) = 1 (checked numerically).
CatalogEntry deformed_free(const Expression& g, double z, int N);
CatalogEntry deformed_potential(const Expression& g, const Expression& U, double z,
                                const std::vector<double>& b, int N);

// --- h6 families ------------------------------------------------------------
// user functions take ("u", "v") = (lambda.q, q^2)
CatalogEntry h6_natural(const Expression& F, const std::vector<double>& lambda, int N);
CatalogEntry h6_em(const Expression& F, const Expression& G, const Expression& R, double e,
                   const std::vector<double>& lambda, int N);
CatalogEntry h6_geodesic(const Expression& F, const Expression& G, const Expression& R,
                         const Expression& S, const std::vector<double>& lambda, int N);
EmFields h6_em_fields_3d(const Expression& F, const Expression& G, const Expression& R,
                         double e, const std::vector<double>& lambda);

// --- further coalgebra-invariant Hamiltonians -------------------------------
enum class ExtraKind { Cg, CgGeneral, CgGd, CgDeformed, H4Chain, RsLike };
struct ExtraParams {
  std::vector<double> kappa_i;  // CgGeneral
  double b = 0.5;               // CgGd
  double z = 0.1;               // CgDeformed, RsLike
  double lambda = 1.0, mu = 0.5;  // H4Chain
};
CatalogEntry extras(ExtraKind kind, const ExtraParams& params, int N);

// --- registry ----------------------------------------------------------------
struct EntryRequest {
  std::string id;
  int N = 3;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> vectors;
  std::map<std::string, Expression> functions;  // parsed user functions
  std::optional<Box> box;                       // overrides the entry default
  Chart chart = Chart::Poincare;
};

struct CatalogInfo {
  std::string id;
  std::string claimed_class;
  std::string anchor;
};

// Stable sorted listing of every catalog id.
std::vector<CatalogInfo> catalog_list();
// Builds the entry named by the request, filling defaults for absent
// parameters and functions. Throws UnresolvedSymbol for unknown ids.
CatalogEntry make_entry(const EntryRequest& request);

}  // namespace catalog
}  // namespace coalg
