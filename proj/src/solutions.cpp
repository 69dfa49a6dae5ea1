#include "bemloc/solutions.hpp"

#include <cmath>
#include <string>

#include "bemloc/errors.hpp"

namespace bemloc {

SingularSolution::SingularSolution(double alpha, double theta0, Point center)
    : alpha_(alpha), theta0_(theta0), center_(std::move(center)) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InputError("SingularSolution: alpha must be positive, got " + std::to_string(alpha));
}

bool SingularSolution::is_polynomial() const { return alpha_ == std::round(alpha_); }

double SingularSolution::eval_trace(const Point& x) const {
  const Point d = x - center_;
  const double r = d.norm();
  if (r == 0.0) return 0.0;
  const double theta = std::atan2(d.y(), d.x());
  return std::pow(r, alpha_) * std::cos(alpha_ * (theta - theta0_));
}

Point SingularSolution::gradient(const Point& x) const {
  const Point d = x - center_;
  const double r = d.norm();
  if (r == 0.0) throw InputError("SingularSolution: gradient requested at the singular point");
  const double phi = std::atan2(d.y(), d.x());
  const double t = alpha_ * (phi - theta0_);
  // grad u = alpha r^(alpha-1) (cos t e_r - sin t e_phi)
  const double c = alpha_ * std::pow(r, alpha_ - 1.0);
  const double ct = std::cos(t);
  const double st = std::sin(t);
  const double cp = d.x() / r;
  const double sp = d.y() / r;
  return {c * (ct * cp + st * sp), c * (ct * sp - st * cp)};
}

BoundaryData trace_data(const SingularSolution& s) {
  BoundaryData d;
  d.f = [s](const Point& x, const Point&) { return s.eval_trace(x); };
  if (!s.is_polynomial()) d.singular_points = {s.center()};
  d.singular_exponent = s.alpha();
  return d;
}

BoundaryData flux_data(const SingularSolution& s) {
  BoundaryData d;
  d.f = [s](const Point& x, const Point& n) { return s.eval_flux(x, n); };
  if (!s.is_polynomial()) d.singular_points = {s.center()};
  d.singular_exponent = s.alpha() - 1.0;
  return d;
}

}  // namespace bemloc
