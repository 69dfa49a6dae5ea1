#include "bemloc/kernels.hpp"

#include <cmath>

#include "bemloc/errors.hpp"

namespace bemloc {

namespace {

// Antiderivative of ln sqrt(u^2 + d^2) in u, d >= 0.
double log_antiderivative(double u, double d) {
  if (u == 0.0) return 0.0;
  const double r2 = u * u + d * d;
  return 0.5 * u * std::log(r2) - u + d * std::atan2(u, d);
}

}  // namespace

double green_log(const Point& x, const Point& y) {
  if (x == y) throw InputError("green_log: x and y coincide");
  return -kInvTwoPi * log_distance(x, y);
}

double panel_log_moment(const Segment& panel, const Point& x) {
  const double len = panel.length();
  const Point tau = (panel.b - panel.a) / len;
  const Point rel = x - panel.a;
  const double u0 = rel.dot(tau);
  const double d = std::abs(cross(tau, rel));
  return log_antiderivative(len - u0, d) - log_antiderivative(-u0, d);
}

double panel_dlp_kernel(const Point& y, const Point& normal_y, const Point& x) {
  if (x == y) throw InputError("panel_dlp_kernel: x and y coincide");
  return dlp_kernel(x, y, normal_y);
}

}  // namespace bemloc
