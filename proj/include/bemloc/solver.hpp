#pragma once

#include "bemloc/operators.hpp"
#include "bemloc/solutions.hpp"

namespace bemloc {

/// Dense Cholesky solve. Throws NumericalError naming the first non-positive
/// pivot, or when the relative residual exceeds kSolveResidualTol.
CoefficientVector solve_spd(const GalerkinMatrix& a, const CoefficientVector& b);

inline constexpr double kSolveResidualTol = 1e-10;

/// Assembled Galerkin system together with its solution.
struct GalerkinSystem {
  GalerkinMatrix matrix;
  CoefficientVector rhs;
  CoefficientVector solution;
};

/// V phi_h = (1/2 + K) g on P0.
GalerkinSystem solve_symm_system(const BoundaryMesh& m, const BoundaryData& trace);

/// (W + a a^T) phi_h = (1/2 - K') flux on P1.
GalerkinSystem solve_hypsing_system(const BoundaryMesh& m, const BoundaryData& flux);

CoefficientVector galerkin_solve_symm(const BoundaryMesh& m, const SingularSolution& s);
CoefficientVector galerkin_solve_hypsing(const BoundaryMesh& m, const BoundaryData& flux);

}  // namespace bemloc
