#pragma once

#include <numbers>

#include "bemloc/geometry.hpp"
#include "bemloc/quadrature.hpp"

namespace bemloc {

inline constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

/// Fundamental solution of the 2D Laplacian, -ln|x - y| / (2 pi). Throws on x == y.
double green_log(const Point& x, const Point& y);

/// Exact integral of ln|x - y| over y on the panel; x may lie on the panel.
double panel_log_moment(const Segment& panel, const Point& x);

/// Normal derivative in y of the fundamental solution,
/// (x - y).n_y / (2 pi |x - y|^2). Throws on x == y.
double panel_dlp_kernel(const Point& y, const Point& normal_y, const Point& x);

// Unchecked kernels for assembly loops.
inline double log_distance(const Point& x, const Point& y) { return 0.5 * std::log((x - y).squaredNorm()); }

inline double dlp_kernel(const Point& x, const Point& y, const Point& normal_y) {
  const Point d = x - y;
  return kInvTwoPi * d.dot(normal_y) / d.squaredNorm();
}

}  // namespace bemloc
