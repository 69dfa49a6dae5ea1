#include <cmath>
#include <numbers>

#include "bemloc/errors.hpp"
#include "bemloc/norms.hpp"
#include "bemloc/solver.hpp"
#include "doctest.h"

using namespace bemloc;
using std::numbers::pi;

namespace {

Polygon axis_square(double side) {
  return {{Point(0, 0), Point(side, 0), Point(side, side), Point(0, side)}, "axis"};
}

BoundaryRegion first_elements(const BoundaryMesh& m, std::size_t count) {
  std::vector<bool> members(m.size(), false);
  for (std::size_t i = 0; i < count; ++i) members[i] = true;
  return BoundaryRegion(members);
}

BoundaryRegion everything(const BoundaryMesh& m) { return BoundaryRegion(std::vector<bool>(m.size(), true)); }

ErrorRecord record(std::size_t n, double err) {
  ErrorRecord r;
  r.N = n;
  r.norms["e"] = err;
  return r;
}

}  // namespace

TEST_CASE("two-point rule is exact for a quadratic error") {
  const BoundaryMesh m = initial_mesh_per_edge(axis_square(1.0), 1);
  const ElementFunction e = [](std::size_t, const Point& x) { return x.x() - 0.5; };
  CHECK(l2_error(m, e, first_elements(m, 1)) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-14));
}

TEST_CASE("zero errors give zero norms") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("lshape"), 3);
  const ElementFunction zero = [](std::size_t, const Point&) { return 0.0; };
  const BoundaryRegion region = everything(m);
  CHECK(l2_error(m, zero, region) == 0.0);
  CHECK(neg_half_norm_local(m, zero, region, 4) == 0.0);
}

TEST_CASE("exact P0 flux of u = x has vanishing error norms") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("square"), 4);
  const SingularSolution u(1.0);
  CoefficientVector phi{Space::P0, Eigen::VectorXd(m.size())};
  for (std::size_t i = 0; i < m.size(); ++i) phi.values[i] = m.element(i).normal.x();
  const BoundaryData flux = flux_data(u);
  CHECK(l2_error(m, phi, flux, everything(m)) <= 1e-8);
  CHECK(energy_error_global(m, phi, flux, 4) <= 1e-7);
}

TEST_CASE("local H^-1/2 norm of a coarse P0 function is its V quadratic form") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("zshape"), 2);
  const BoundaryRegion region = select_region_by_distance(m, Point(0, 0), 0.3);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m.size());
  for (std::size_t i : region.element_indices(m)) c[i] = std::cos(1.7 * i) + 0.3;
  const ElementFunction e = [&](std::size_t i, const Point&) { return c[i]; };
  const double form = c.dot(assemble_V(m).values * c);
  CHECK(neg_half_norm_local(m, e, region, 2) == doctest::Approx(std::sqrt(form)).epsilon(1e-10));
  CHECK_THROWS_AS(neg_half_norm_local(m, e, region, 1), InputError);
}

TEST_CASE("local norms grow with the region") {
  const Polygon l = canonical_geometry("lshape");
  const SingularSolution u(1.0 / 3.0);
  const BoundaryMesh m = refine_uniform(refine_uniform(initial_mesh_per_edge(l, 6)));
  const GalerkinSystem s = solve_symm_system(m, trace_data(u));
  const BoundaryData flux = flux_data(u);
  double last = 0.0;
  for (double dist : {0.45, 0.4, 0.3}) {
    const BoundaryRegion region = select_region_by_distance(initial_mesh_per_edge(l, 6), l.vertex(0), dist);
    const double err = l2_error(m, s.solution, flux, region);
    CHECK(err >= last);
    last = err;
  }
}

TEST_CASE("local H^-1/2 error stays below the local L2 error") {
  const Polygon l = canonical_geometry("lshape");
  const SingularSolution u(1.0 / 3.0);
  BoundaryMesh m = initial_mesh(l, 0.0222);
  const BoundaryRegion region = select_region_by_distance(m, l.vertex(0), 0.3);
  m = refine_uniform(refine_uniform(refine_uniform(m)));
  REQUIRE(m.size() == 512);
  const GalerkinSystem s = solve_symm_system(m, trace_data(u));
  const ElementFunction e = p0_error(m, s.solution, flux_data(u));
  CHECK(neg_half_norm_local(m, e, region, 4) <= l2_error(m, e, region));
}

TEST_CASE("global energy error on the lshape drops by 2^(-1/3) per refinement") {
  const Polygon l = canonical_geometry("lshape");
  const SingularSolution u(1.0 / 3.0);
  const BoundaryData flux = flux_data(u);
  const double energy = exact_energies(l, u).single_layer();
  BoundaryMesh m = initial_mesh(l, 0.0222);
  for (int k = 0; k < 3; ++k) m = refine_uniform(m);
  REQUIRE(m.size() == 512);
  const BoundaryMesh fine = refine_uniform(m);
  const GalerkinSystem s = solve_symm_system(m, trace_data(u));
  const GalerkinSystem t = solve_symm_system(fine, trace_data(u));
  const double ratio = energy_error_pythagoras(energy, t.solution, t.rhs) /
                       energy_error_pythagoras(energy, s.solution, s.rhs);
  CHECK(ratio == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(0.15));

  // the projected error is a lower bound close to the Pythagoras value
  const double projected = energy_error_global(m, s.solution, flux, 4);
  const double pythagoras = energy_error_pythagoras(energy, s.solution, s.rhs);
  CHECK(projected <= pythagoras * (1.0 + 1e-6));
  CHECK(projected >= 0.9 * pythagoras);
}

TEST_CASE("Pythagoras energy error examples") {
  CoefficientVector x{Space::P0, Eigen::Vector2d(1.0, 2.0)};
  CoefficientVector b{Space::P0, Eigen::Vector2d(0.5, 0.25)};
  CHECK(energy_error_pythagoras(2.0, x, b) == doctest::Approx(1.0));
  CHECK(energy_error_pythagoras(1.0, x, b) == 0.0);
}

TEST_CASE("H1 seminorm error of a linear trace") {
  const BoundaryMesh m = initial_mesh_per_edge(axis_square(0.4), 4);
  const SingularSolution u(1.0);
  const BoundaryData derivative = flux_data(u);
  const BoundaryRegion edge0 = select_region_edges(m, {0});
  CoefficientVector nodal{Space::P1, Eigen::VectorXd(m.size())};
  for (std::size_t i = 0; i < m.size(); ++i) nodal.values[i] = m.node(i).x();
  CHECK(h1_seminorm_error_local(m, nodal, derivative, everything(m)) <= 1e-10);
  CoefficientVector zero{Space::P1, Eigen::VectorXd::Zero(m.size())};
  CHECK(h1_seminorm_error_local(m, zero, derivative, edge0) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));
}

TEST_CASE("local H1 error of the lshape flux problem does not increase") {
  const Polygon l = canonical_geometry("lshape");
  const SingularSolution u(2.0 / 3.0);
  BoundaryMesh m = initial_mesh_per_edge(l, 6);
  const BoundaryRegion region = select_region_by_distance(m, l.vertex(0), 0.3);
  double last = INFINITY;
  for (int level = 0; level < 4; ++level, m = refine_uniform(m)) {
    const CoefficientVector psi = galerkin_solve_hypsing(m, flux_data(u));
    const double e = h1_seminorm_error_local(m, psi, flux_data(u), region);
    CHECK(e <= last);
    last = e;
  }
}

TEST_CASE("fit_eoc examples") {
  const std::vector<ErrorRecord> halving{record(100, 0.1), record(200, 0.05)};
  CHECK(fit_eoc(halving, "e", 4) == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<ErrorRecord> quarter{record(100, 0.1), record(400, 0.025)};
  CHECK(fit_eoc(quarter, "e", 2) == doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<ErrorRecord> flat{record(100, 0.3), record(200, 0.3), record(400, 0.3)};
  CHECK(std::abs(fit_eoc(flat, "e", 3)) <= 1e-14);
}

TEST_CASE("fit_eoc uses the last window records and is scale invariant") {
  std::vector<ErrorRecord> rs;
  for (int k = 0; k < 6; ++k) rs.push_back(record(std::size_t{36} << k, std::pow(2.0, -(k < 2 ? 0.2 : 0.7) * k)));
  std::vector<ErrorRecord> scaled = rs;
  for (auto& r : scaled) r.norms["e"] *= 123.0;
  CHECK(fit_eoc(rs, "e", 4) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit_eoc(scaled, "e", 4) == doctest::Approx(fit_eoc(rs, "e", 4)).epsilon(1e-14));
  CHECK_THROWS_AS(fit_eoc(rs, "e", 1), InputError);
  rs.back().norms["e"] = 0.0;
  CHECK_THROWS(fit_eoc(rs, "e", 4));
}

TEST_CASE("trace-flux pairing agrees with the angular formula") {
  for (const char* name : {"lshape", "zshape"})
    for (double alpha : {1.0 / 8.0, 1.0 / 3.0}) {
      const Polygon p = canonical_geometry(name);
      const SingularSolution u(alpha);
      CHECK(exact_energies(p, u).trace_flux == doctest::Approx(trace_flux_by_angle(p, u)).epsilon(1e-9));
    }
}

TEST_CASE("discrete energies approach the exact energy from below") {
  const Polygon z = canonical_geometry("zshape");
  const SingularSolution u(1.0 / 3.0);
  const double energy = exact_energies(z, u).single_layer();
  BoundaryMesh m = initial_mesh_per_edge(z, 4);
  double last = 0.0;
  for (int level = 0; level < 3; ++level, m = refine_uniform(m)) {
    const GalerkinSystem s = solve_symm_system(m, trace_data(u));
    const double discrete = s.solution.values.dot(s.rhs.values);
    CHECK(discrete <= energy);
    CHECK(discrete >= last);
    last = discrete;
  }
}
