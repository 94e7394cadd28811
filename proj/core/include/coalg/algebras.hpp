#pragma once

#include "coalg/coalgebra.hpp"

namespace coalg {
namespace algebras {

// The three bundled Poisson coalgebras.
//
// sl(2,R):   {J3,J+} = 2J+, {J3,J-} = -2J-, {J-,J+} = 4J3; C = J-J+ - J3^2;
//            primitive coproduct; D(J-) = q^2, D(J+) = p^2 + b/q^2, D(J3) = qp.
// sl_z(2,R): {J3,J+} = 2J+ cosh(zJ-), {J3,J-} = -2 sinh(zJ-)/z, {J-,J+} = 4J3;
//            C_z = sinh(zJ-)/z J+ - J3^2; J- primitive, J+,J3 twisted by
//            e^{+-zJ-}; deformed one-site realization. z -> 0 recovers sl(2,R).
// h6:        two-photon algebra <K, A+, A-, B+, B-, M>, primitive coproduct,
//            linear Casimir M and working nonlinear Casimir C2/C1.
CoalgebraSpec sl2();
CoalgebraSpec sl2z();
CoalgebraSpec h6();

// Closed-form N-site realized generators with numeric parameters baked in
// (vanishing b_i / deformation terms fold away). Oracles for the generic
// recursion engine and the building blocks of the catalog.
std::map<std::string, Expression> sl2_realized(int N, const std::vector<double>& b);
std::map<std::string, Expression> sl2z_realized(int N, const std::vector<double>& b,
                                                double z);
std::map<std::string, Expression> h6_realized(int N, const std::vector<double>& lambda);

// Closed-form integral families (left: sites 1..m; right: sites N-m+1..N).
// sl2 / sl2z: m = 2..N from the Casimir; h6: m = 3..N from the working
// Casimir (the m = 2 coproducts vanish identically), 2N-5 distinct functions.
std::vector<MotionIntegral> sl2_integrals(int N, const std::vector<double>& b);
std::vector<MotionIntegral> sl2z_integrals(int N, const std::vector<double>& b, double z);

struct H6Integrals {
  std::vector<MotionIntegral> integrals;
  std::string warning;  // set when N < 3 (only trivial integrals exist)
};
H6Integrals h6_integrals(int N, const std::vector<double>& lambda);

// Quadratic h6 Casimir C2 of Eq-level (M B+ - A+^2)(M B- - A-^2) - (...)^2
// form; vanishes identically in the one-site realization.
Expression h6_casimir_c2();

// Data for building completely integrable h6 Hamiltonians around one
// generator X: everything commuting with X plus the nonlinear Casimirs of the
// subalgebras containing X. The realized X is the extra integral.
struct Subalgebra {
  std::string name;
  std::vector<std::string> generators;
  Expression casimir;  // over plain generator symbols
  bool nonlinear = true;
};
struct GeneratorFamily {
  std::string generator;
  std::vector<std::string> commuting;  // generators Poisson-commuting with X
  std::vector<Subalgebra> subalgebras;  // subalgebras containing X, with Casimirs
};
GeneratorFamily h6_generator_families(const std::string& X);

}  // namespace algebras
}  // namespace coalg
