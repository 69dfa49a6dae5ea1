#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

#include "bemloc/geometry.hpp"
#include "bemloc/quadrature.hpp"
#include "bemloc/solutions.hpp"

namespace bemloc {

/// P0: one value per element. P1: one value per node, node i = element i's start.
enum class Space { P0, P1 };

struct GalerkinMatrix {
  Space space = Space::P0;
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
};

struct CoefficientVector {
  Space space = Space::P0;
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
};

/// Target accuracy of every quadrature behind the assembled operators.
inline constexpr double kAssemblyTol = 1e-14;

/// int_a int_b G(x - y) ds_y ds_x; a and b may share endpoints or coincide.
double single_layer_entry(const Segment& a, const Segment& b);

/// Throws InputError when the polygon diameter is not below 1.
GalerkinMatrix assemble_V(const BoundaryMesh& m);

/// Galerkin loads int_{T_j} (g/2 + K g) ds for the Dirichlet data g.
CoefficientVector assemble_rhs_symm(const BoundaryMesh& m, const BoundaryData& g);

/// Hypersingular matrix D^T V D with D mapping nodal values to element slopes.
GalerkinMatrix assemble_W(const BoundaryMesh& m);
GalerkinMatrix hypersingular_from_single_layer(const BoundaryMesh& m, const GalerkinMatrix& v);

/// a_i = int hat_i ds.
Eigen::VectorXd hat_integrals(const BoundaryMesh& m);
GalerkinMatrix assemble_stabilization(const BoundaryMesh& m);

/// Loads (1/2)<flux, hat_j> - <flux, K hat_j>.
CoefficientVector assemble_rhs_hypsing(const BoundaryMesh& m, const BoundaryData& flux);

/// sum_k sum_l w_k w_l int_k int_l G over an arbitrary list of non-overlapping
/// segments, without storing the matrix.
double single_layer_quadratic_form(std::span<const Segment> segments, const Eigen::VectorXd& w);

/// <q, K f> = int q(x) int dG/dn_y(x, y) f(y) ds_y ds_x over the polygon edges,
/// q evaluated with the outward normal at x, f with the one at y.
double double_layer_pairing(const Polygon& p, const BoundaryData& q, const BoundaryData& f);

/// Row-major dump, one row per line, "%.17g".
void write_matrix(const GalerkinMatrix& a, const std::string& path);

}  // namespace bemloc
