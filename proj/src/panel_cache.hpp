#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "bemloc/quadrature.hpp"

namespace bemloc::detail {

/// Gauss points and scaled weights of every segment for orders 1..kMaxCachedOrder,
/// so well-separated pairs cost only kernel evaluations.
class PanelCache {
 public:
  static constexpr int kMaxCachedOrder = 16;
  static constexpr std::size_t kStride = kMaxCachedOrder * (kMaxCachedOrder + 1) / 2;

  explicit PanelCache(std::span<const Segment> segments) : segments_(segments.begin(), segments.end()) {
    const std::size_t n = segments_.size();
    points_.resize(n * kStride);
    weights_.resize(n * kStride);
    for (std::size_t i = 0; i < n; ++i) {
      const Segment& s = segments_[i];
      const double half = 0.5 * s.length();
      for (int q = 1; q <= kMaxCachedOrder; ++q) {
        const auto& rule = gauss_rule(q);
        const std::size_t base = i * kStride + offset(q);
        for (int k = 0; k < q; ++k) {
          points_[base + k] = s.at(0.5 * (1.0 + rule.nodes[k]));
          weights_[base + k] = half * rule.weights[k];
        }
      }
    }
  }

  static std::size_t offset(int q) { return static_cast<std::size_t>(q * (q - 1) / 2); }

  std::size_t size() const { return segments_.size(); }
  const Segment& segment(std::size_t i) const { return segments_[i]; }
  const Point* points(std::size_t i, int q) const { return &points_[i * kStride + offset(q)]; }
  const double* weights(std::size_t i, int q) const { return &weights_[i * kStride + offset(q)]; }

  /// Data values v(x, dir_i) at every cached point, multiplied by the weights.
  template <class F>
  std::vector<double> weighted_values(F&& f) const {
    std::vector<double> out(points_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i)
      for (int q = 1; q <= kMaxCachedOrder; ++q) {
        const std::size_t base = i * kStride + offset(q);
        for (int k = 0; k < q; ++k) out[base + k] = weights_[base + k] * f(i, points_[base + k]);
      }
    return out;
  }

  /// Lower bound of the distance between segments i and j.
  double distance_bound(std::size_t i, std::size_t j) const {
    const Segment& a = segments_[i];
    const Segment& b = segments_[j];
    const double d = (a.midpoint() - b.midpoint()).norm() - 0.5 * (a.length() + b.length());
    return d > 0.0 ? d : segment_distance(a, b);
  }

  /// Gauss orders for an integrand analytic away from the other segment.
  std::pair<int, int> pair_orders(std::size_t i, std::size_t j, double tol) const {
    const double d = distance_bound(i, j);
    if (!(d > 0.0)) return {std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    return {gauss_order(bernstein_rho_distance(segments_[i], d), tol),
            gauss_order(bernstein_rho_distance(segments_[j], d), tol)};
  }

 private:
  std::vector<Segment> segments_;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

}  // namespace bemloc::detail
