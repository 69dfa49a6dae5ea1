#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bemloc/errors.hpp"
#include "bemloc/kernels.hpp"
#include "bemloc/operators.hpp"
#include "doctest.h"

using namespace bemloc;
using std::numbers::pi;

namespace {

// Second antiderivative of ln|t|.
double log_g2(double t) { return t == 0.0 ? 0.0 : 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t; }

// int_a^b int_c^d -ln|y - x| / (2 pi) dy dx for intervals on one line.
double collinear_oracle(double a, double b, double c, double d) {
  const double s = log_g2(d - a) - log_g2(d - b) - log_g2(c - a) + log_g2(c - b);
  return -s / (2 * pi);
}

double nested_oracle(const Segment& a, const Segment& b) {
  return -a.length() * kInvTwoPi *
         adaptive_quad([&](double t) { return panel_log_moment(b, a.at(t)); }, 0.0, 1.0, 1e-14);
}

Polygon scaled(const Polygon& p, double c) {
  Polygon q = p;
  for (auto& v : q.vertices) v *= c;
  return q;
}

BoundaryData constant(double v) {
  BoundaryData d;
  d.f = [v](const Point&, const Point&) { return v; };
  return d;
}

}  // namespace

TEST_CASE("self entry of the unit panel is 3/(4 pi)") {
  const Segment s{Point(0, 0), Point(1, 0)};
  CHECK(single_layer_entry(s, s) == doctest::Approx(3.0 / (4 * pi)).epsilon(1e-13));
  const Segment t{Point(0.1, 0.2), Point(0.1, 0.45)};
  const double l = 0.25;
  CHECK(single_layer_entry(t, t) == doctest::Approx(l * l * (3.0 - 2.0 * std::log(l)) / (4 * pi)).epsilon(1e-13));
}

TEST_CASE("collinear panels against the closed-form oracle") {
  const Segment a{Point(0, 0), Point(0.1, 0)};
  for (double gap : {0.0, 0.05, 0.3}) {
    const Segment b{Point(0.1 + gap, 0), Point(0.25 + gap, 0)};
    CHECK(single_layer_entry(a, b) ==
          doctest::Approx(collinear_oracle(0.0, 0.1, 0.1 + gap, 0.25 + gap)).epsilon(1e-12));
    CHECK(single_layer_entry(b, a) == doctest::Approx(single_layer_entry(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("assemble_V matches nested quadrature on small meshes") {
  for (const char* name : {"square", "lshape"}) {
    const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry(name), name[0] == 's' ? 4 : 2);
    REQUIRE(m.size() <= 16);
    const GalerkinMatrix v = assemble_V(m);
    CHECK(v.space == Space::P0);
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        worst = std::max(worst, std::abs(v.values(i, j) - nested_oracle(segment_of(m.element(i)),
                                                                         segment_of(m.element(j)))));
    CHECK(worst <= 1e-10);
    CHECK((v.values - v.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("V scales like c^2 (V - ln c / (2 pi) |T_i| |T_j|)") {
  const Polygon z = canonical_geometry("zshape");
  const BoundaryMesh m = initial_mesh_per_edge(z, 3);
  const GalerkinMatrix v = assemble_V(m);
  for (double c : {0.5, 1.5}) {
    const BoundaryMesh mc = initial_mesh_per_edge(scaled(z, c), 3);
    const GalerkinMatrix vc = assemble_V(mc);
    Eigen::VectorXd len(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) len[i] = m.element(i).length;
    const Eigen::MatrixXd expected = c * c * (v.values - std::log(c) * kInvTwoPi * len * len.transpose());
    CHECK((vc.values - expected).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("V is positive definite on canonical meshes") {
  for (const char* name : {"square", "lshape", "zshape"}) {
    const GalerkinMatrix v = assemble_V(initial_mesh_per_edge(canonical_geometry(name), 5));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v.values);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("assemble_V rejects a diameter of 1 or more") {
  const BoundaryMesh m = initial_mesh_per_edge(scaled(canonical_geometry("square"), 2.0), 2);
  CHECK_THROWS_AS(assemble_V(m), InputError);
}

TEST_CASE("Symm loads for constant and linear data") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("lshape"), 4);
  CHECK(assemble_rhs_symm(m, constant(0.0)).values.cwiseAbs().maxCoeff() == 0.0);
  // (1/2 + K) 1 = 0 on a closed curve
  CHECK(assemble_rhs_symm(m, constant(1.0)).values.cwiseAbs().maxCoeff() <= 1e-12);

  // u = x: V n_x = (1/2 + K) x with n_x constant per element
  const SingularSolution u(1.0);
  const CoefficientVector b = assemble_rhs_symm(m, trace_data(u));
  Eigen::VectorXd nx(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) nx[i] = m.element(i).normal.x();
  const Eigen::VectorXd vn = assemble_V(m).values * nx;
  CHECK((b.values - vn).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("hypersingular matrix is D^T V D and annihilates constants") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("zshape"), 4);
  const GalerkinMatrix v = assemble_V(m);
  const GalerkinMatrix w = assemble_W(m);
  CHECK(w.space == Space::P1);
  const std::size_t n = m.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = -1.0 / m.element(i).length;
    d(i, (i + 1) % n) = 1.0 / m.element(i).length;
  }
  CHECK((w.values - d.transpose() * v.values * d).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(w.values.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((w.values - w.values.transpose()).cwiseAbs().maxCoeff() == 0.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.values);
  CHECK(std::abs(es.eigenvalues()[0]) <= 1e-10);
  CHECK(es.eigenvalues()[1] > 1e-6);
}

TEST_CASE("stabilization is a a^T with a the hat integrals") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("lshape"), 3);
  const Eigen::VectorXd a = hat_integrals(m);
  CHECK(a.sum() == doctest::Approx(m.length()).epsilon(1e-14));
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    CHECK(a[i] == doctest::Approx(0.5 * (m.element((i + n - 1) % n).length + m.element(i).length)));
  const GalerkinMatrix s = assemble_stabilization(m);
  CHECK((s.values - a * a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_W(m).values + s.values);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("hypersingular loads of a harmonic flux sum to zero") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("lshape"), 6);
  for (double alpha : {1.0, 2.0 / 3.0, 2.0}) {
    const CoefficientVector b = assemble_rhs_hypsing(m, flux_data(SingularSolution(alpha)));
    CHECK(std::abs(b.values.sum()) <= 1e-11);
  }
  // loads of u = x equal W applied to the nodal trace
  const SingularSolution u(1.0);
  const BoundaryMesh sq = initial_mesh_per_edge(canonical_geometry("square"), 3);
  Eigen::VectorXd nodal(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) nodal[i] = sq.node(i).x();
  const Eigen::VectorXd expected = assemble_W(sq).values * nodal;
  CHECK((assemble_rhs_hypsing(sq, flux_data(u)).values - expected).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("single_layer_quadratic_form agrees with the assembled matrix") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("zshape"), 3);
  std::vector<Segment> segs;
  for (const auto& e : m.elements()) segs.push_back(segment_of(e));
  Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(m.size(), -1.0, 2.0);
  const double form = single_layer_quadratic_form(segs, w);
  CHECK(form == doctest::Approx(w.dot(assemble_V(m).values * w)).epsilon(1e-12));
}

TEST_CASE("double_layer_pairing of constants") {
  const Polygon l = canonical_geometry("lshape");
  // K 1 = -1/2, so <1, K 1> = -|Gamma| / 2
  CHECK(double_layer_pairing(l, constant(1.0), constant(1.0)) == doctest::Approx(-0.5 * perimeter(l)).epsilon(1e-10));
}

TEST_CASE("write_matrix writes one row per line at full precision") {
  GalerkinMatrix a;
  a.values.resize(2, 3);
  a.values << 1.0 / 3.0, -2.0, 1e-300, 0.0, pi, 7.0;
  const std::string path = "test_operators_matrix.txt";
  write_matrix(a, path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    double x;
    int cols = 0;
    while (row >> x) {
      CHECK(x == a.values(rows, cols));
      ++cols;
    }
    CHECK(cols == 3);
    ++rows;
  }
  CHECK(rows == 2);
  std::remove(path.c_str());
}

TEST_CASE("far collinear unit panels against nested quadrature") {
  const Segment a{Point(0, 0), Point(1, 0)};
  const Segment b{Point(10, 0), Point(11, 0)};
  CHECK(std::abs(single_layer_entry(a, b) - nested_oracle(a, b)) <= 1e-8);
  CHECK(single_layer_entry(a, b) == doctest::Approx(collinear_oracle(0, 1, 10, 11)).epsilon(1e-12));
}

TEST_CASE("W on the square with 8 elements has a one-dimensional kernel") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("square"), 2);
  REQUIRE(m.size() == 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_W(m).values);
  CHECK(std::abs(es.eigenvalues()[0]) <= 1e-12);
  CHECK(es.eigenvalues()[1] > 0.0);
}

TEST_CASE("uniform hats integrate to h and a a^T kills a-orthogonal vectors") {
  const BoundaryMesh m = initial_mesh_per_edge(canonical_geometry("square"), 3);
  const Eigen::VectorXd a = hat_integrals(m);
  const double h = m.element(0).length;
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(h).epsilon(1e-14));
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(a.size(), -2.0, 5.0);
  v -= (a.dot(v) / a.squaredNorm()) * a;
  CHECK((assemble_stabilization(m).values * v).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("hypersingular loads for zero and compatible fluxes") {
  const BoundaryMesh sq = initial_mesh_per_edge(canonical_geometry("square"), 4);
  CHECK(assemble_rhs_hypsing(sq, constant(0.0)).values.isZero(0.0));
  CHECK(std::abs(assemble_rhs_hypsing(sq, flux_data(SingularSolution(1.0))).values.sum()) <= 1e-8);
  const BoundaryMesh l = initial_mesh_per_edge(canonical_geometry("lshape"), 8);
  CHECK(std::abs(assemble_rhs_hypsing(l, flux_data(SingularSolution(2.0 / 3.0))).values.sum()) <= 1e-6);
}
