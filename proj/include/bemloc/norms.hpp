#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>

#include "bemloc/geometry.hpp"
#include "bemloc/operators.hpp"
#include "bemloc/solutions.hpp"

namespace bemloc {

struct ErrorRecord {
  int level = 0;
  std::size_t N = 0;
  double h = 0.0;
  std::map<std::string, double> norms;
};

/// Error as a function of (element index, point on that element).
using ElementFunction = std::function<double(std::size_t, const Point&)>;

/// phi - phi_h for a P0 coefficient vector and exact flux data. Copies phi_h
/// and the data; the mesh must outlive the result.
ElementFunction p0_error(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& flux);

/// (g - shift) - phi_h for a P1 coefficient vector and exact trace data.
ElementFunction p1_error(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& trace,
                         double shift = 0.0);

/// sqrt of sum over region elements of the two-point Gauss rule applied to e^2.
double l2_error(const BoundaryMesh& m, const ElementFunction& e, const BoundaryRegion& region);

/// l2_error of phi - phi_h for P0 phi_h.
double l2_error(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& flux,
                const BoundaryRegion& region);

/// sqrt(<V w, w>) for the P0 projection w of chi e onto the region split
/// refine_factor-fold, element averages taken with the two-point Gauss rule.
double neg_half_norm_local(const BoundaryMesh& m, const ElementFunction& e, const BoundaryRegion& region,
                           int refine_factor);

/// sqrt(<V w, w>) for the exact P0 projection w of phi - phi_h onto the whole
/// boundary split refine_factor-fold, with extra geometric layers toward the
/// singular points of the flux.
double energy_error_global(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& flux,
                           int refine_factor);

inline constexpr int kGradingLayers = 30;

/// sqrt(E - phi_h . b): the energy error of a Galerkin solution from the exact
/// energy E of the continuous solution.
double energy_error_pythagoras(double exact_energy, const CoefficientVector& phi_h, const CoefficientVector& rhs);

/// Region seminorm of d/ds (g - phi_h) for P1 phi_h; `derivative` is the exact
/// directional derivative of the trace, evaluated with the element tangent.
double h1_seminorm_error_local(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& derivative,
                               const BoundaryRegion& region);

/// Negated least-squares slope of log(norm) against log(N) over the last
/// `window` records.
double fit_eoc(std::span<const ErrorRecord> records, const std::string& norm, int window);

/// P = <g, phi> and Q = <phi, K g> for the trace g and flux phi of s.
struct ExactEnergies {
  double trace_flux = 0.0;
  double flux_double_layer_trace = 0.0;

  /// <V phi, phi> = <(1/2 + K) g, phi>.
  double single_layer() const { return 0.5 * trace_flux + flux_double_layer_trace; }
  /// <W g, g> = <(1/2 - K') phi, g>.
  double hypersingular() const { return 0.5 * trace_flux - flux_double_layer_trace; }
};

ExactEnergies exact_energies(const Polygon& p, const SingularSolution& s);

/// int_Gamma f ds over the polygon edges, f evaluated with the outward normal.
double boundary_integral(const Polygon& p, const BoundaryData& f);

/// <g, phi> through the angular formula (alpha/2) int R(theta)^(2 alpha) dtheta
/// over the interior angle seen from the center, which must be a vertex.
double trace_flux_by_angle(const Polygon& p, const SingularSolution& s);

}  // namespace bemloc
