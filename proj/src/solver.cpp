#include "bemloc/solver.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "bemloc/errors.hpp"

namespace bemloc {

CoefficientVector solve_spd(const GalerkinMatrix& a, const CoefficientVector& b) {
  const Eigen::Index n = a.size();
  if (a.values.cols() != n) throw InputError("solve_spd: matrix is not square");
  if (b.size() != n)
    throw InputError("solve_spd: right-hand side has length " + std::to_string(b.size()) + ", matrix has order " +
                     std::to_string(n));
  CoefficientVector x{b.space, Eigen::VectorXd::Zero(n)};
  if (b.values.isZero(0.0)) return x;

  Eigen::MatrixXd factor = a.values;
  const Eigen::Index pivot = Eigen::internal::llt_inplace<double, Eigen::Lower>::blocked(factor);
  if (pivot >= 0) throw NumericalError("solve_spd: non-positive pivot at index " + std::to_string(pivot));
  x.values = factor.triangularView<Eigen::Lower>().solve(b.values);
  factor.triangularView<Eigen::Lower>().adjoint().solveInPlace(x.values);

  const double residual = (a.values * x.values - b.values).norm() / b.values.norm();
  if (!(residual <= kSolveResidualTol))
    throw NumericalError("solve_spd: relative residual " + std::to_string(residual) + " above tolerance");
  return x;
}

GalerkinSystem solve_symm_system(const BoundaryMesh& m, const BoundaryData& trace) {
  GalerkinSystem s{assemble_V(m), assemble_rhs_symm(m, trace), {}};
  s.solution = solve_spd(s.matrix, s.rhs);
  return s;
}

GalerkinSystem solve_hypsing_system(const BoundaryMesh& m, const BoundaryData& flux) {
  GalerkinMatrix a = assemble_W(m);
  const Eigen::VectorXd hats = hat_integrals(m);
  a.values.noalias() += hats * hats.transpose();
  GalerkinSystem s{std::move(a), assemble_rhs_hypsing(m, flux), {}};
  s.solution = solve_spd(s.matrix, s.rhs);
  return s;
}

CoefficientVector galerkin_solve_symm(const BoundaryMesh& m, const SingularSolution& s) {
  return solve_symm_system(m, trace_data(s)).solution;
}

CoefficientVector galerkin_solve_hypsing(const BoundaryMesh& m, const BoundaryData& flux) {
  return solve_hypsing_system(m, flux).solution;
}

}  // namespace bemloc
