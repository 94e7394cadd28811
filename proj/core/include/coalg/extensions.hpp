#pragma once

#include "coalg/coalgebra.hpp"

namespace coalg {
namespace extensions {

// --- comodule-deformed oscillator (two sites) --------------------------------
//
// gl(2,R) = <B-, B+, K, M> acted on by a sigma-deformed coaction phi with
// group-like element 1 - sigma A-. The chain realization here is the
// oscillator one: D(B+) = q^2, D(B-) = p^2, D(K) = -pq + lambda^2/2,
// D(M) = -lambda^2, D(A+) = -lambda q, D(A-) = -lambda p.
struct ComoduleSystem {
  double sigma = 0.0;
  double lambda1 = 1.0, lambda2 = 1.0;
  Expression hamiltonian;  // on the 4-dim phase space, parameters baked
  Expression casimir;      // in involution with the Hamiltonian
  Expression pole_guard;   // 1 + sigma lambda2 p2, must stay away from zero
  Box box;
};
ComoduleSystem comodule_oscillator(double sigma, double lambda1, double lambda2);

// Coaction phi(X) of a gl(2,R) generator as a two-slot expression over tagged
// symbols "K@1", "A-@2", ...; sigma enters as the parameter "sigma".
Expression coaction_map(const std::string& gen);
// The sigma-deformed two-site h6 coproduct the coaction is compatible with
// (slots tagged @1/@2); needed for the coassociativity diagram.
Expression comodule_coproduct(const std::string& gen);
// One-site realization of this section's h6 on (q_s, p_s), lambda entry s-1.
Expression comodule_realization(const std::string& gen, int site);
// Replaces every tagged symbol by its realization.
Expression comodule_realize(const Expression& tagged);

// --- loop coproducts ---------------------------------------------------------
//
// Delta_lambda^(k)(X) = Delta^(k-1)(X)/lambda + X_k/(lambda - eps) for a
// Lie-Poisson spec with the primitive coproduct, realized on N sites.
std::map<std::string, Expression> loop_coproduct(const CoalgebraSpec& spec, int k,
                                                 double lambda, double eps,
                                                 const SiteConfig& config);
// The loop image of one Casimir.
Expression loop_casimir(const CoalgebraSpec& spec, int casimir_index, int k, double lambda,
                        double eps, const SiteConfig& config);

struct LoopInvolutionReport {
  double worst = 0.0;
  double tol = 0.0;
  bool pass = false;
  int pairs_checked = 0;
};
// Involution of {Delta_lambda^(i)(C_j), Delta_mu^(k)(C_j)} over a lambda/mu
// grid, all 2 <= i <= k <= N, at sampled points.
LoopInvolutionReport loop_involution_check(const CoalgebraSpec& spec, int casimir_index,
                                           int N, double eps,
                                           const std::vector<double>& lambda_grid,
                                           const Box& box, int samples, double tol,
                                           const SiteConfig& config, std::uint64_t seed = 1);

struct LoopStructureFit {
  // {D_l^(i)(X^a), D_m^(k)(X^b)} = f F^{ab}(D_l^(i))            (i < k)
  // {D_l^(k)(X^a), D_m^(k)(X^b)} = f F^{ab}(D_l) + g F^{ab}(D_m) (i = k)
  double f = 0.0, g = 0.0;
  double residual = 0.0;  // relative to the bracket scale
};
LoopStructureFit loop_structure_fit(const CoalgebraSpec& spec, int i, int k, double lambda,
                                    double mu, double eps, const SiteConfig& config,
                                    const Box& box, int samples, std::uint64_t seed = 1);

}  // namespace extensions
}  // namespace coalg
