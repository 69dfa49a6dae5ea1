#pragma once

#include <functional>
#include <vector>

#include "bemloc/geometry.hpp"

namespace bemloc {

/// Boundary data f(x, v) where v is a unit vector attached to the element
/// carrying x (its normal for fluxes, its tangent for arc-length derivatives).
/// Near each singular point the data behaves like r^singular_exponent.
struct BoundaryData {
  std::function<double(const Point&, const Point&)> f;
  std::vector<Point> singular_points;
  double singular_exponent = 0.0;

  double operator()(const Point& x, const Point& v) const { return f(x, v); }
};

/// Harmonic function r^alpha cos(alpha (theta - theta0)) around center.
class SingularSolution {
 public:
  explicit SingularSolution(double alpha, double theta0 = 0.0, Point center = Point::Zero());

  double alpha() const { return alpha_; }
  double theta0() const { return theta0_; }
  const Point& center() const { return center_; }

  /// True when alpha is a positive integer, in which case u is a polynomial.
  bool is_polynomial() const;

  double eval_trace(const Point& x) const;
  Point gradient(const Point& x) const;
  double eval_flux(const Point& x, const Point& normal) const { return gradient(x).dot(normal); }

 private:
  double alpha_;
  double theta0_;
  Point center_;
};

BoundaryData trace_data(const SingularSolution& s);
/// grad u . v; with v the element normal this is the flux, with v the
/// element tangent the arc-length derivative of the trace.
BoundaryData flux_data(const SingularSolution& s);

}  // namespace bemloc
