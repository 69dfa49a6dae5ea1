#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bemloc/errors.hpp"
#include "bemloc/geometry.hpp"

namespace bemloc {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 64;

/// Cached rule for 1 <= n <= kMaxGaussOrder.
const GaussRule& gauss_rule(int n);

/// Globally adaptive bisection with a 15-point Gauss-Kronrod pair per
/// subinterval. Integrable endpoint singularities (log, algebraic) are fine
/// since no endpoint is ever sampled. Throws NumericalError when the error
/// estimate is still above tol after 2^16 subintervals.
double adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol);

inline constexpr std::size_t kAdaptiveBudget = std::size_t{1} << 16;

struct Segment {
  Point a;
  Point b;

  double length() const { return (b - a).norm(); }
  Point at(double t) const { return a + t * (b - a); }
  Point midpoint() const { return 0.5 * (a + b); }
};

inline Segment segment_of(const Element& e) { return {e.a, e.b}; }

double point_segment_distance(const Point& p, const Segment& s);
double segment_distance(const Segment& s, const Segment& t);

/// Parameter of the largest Bernstein ellipse around s that excludes p.
double bernstein_rho(const Segment& s, const Point& p);

/// Conservative Bernstein parameter for a singularity at distance dist from s.
inline double bernstein_rho_distance(const Segment& s, double dist) {
  const double r = dist / (0.5 * s.length());
  return r + std::sqrt(r * r + 1.0);
}

/// Gauss order reaching tol for an integrand analytic inside the rho-ellipse.
inline int gauss_order(double rho, double tol) {
  if (!(rho > 1.0 + 1e-12)) return std::numeric_limits<int>::max();
  const double q = std::ceil(std::log(1.0 / tol) / (2.0 * std::log(rho))) + 1.0;
  if (q > 1e6) return std::numeric_limits<int>::max();
  return std::max(2, static_cast<int>(q));
}

/// Where integrand factors lose analyticity, and how finely to resolve them.
struct SingularSet {
  std::vector<Point> points;  // non-analytic points of the data (never kernel singularities)
  double min_length = 0.0;    // pieces touching a singular point and shorter than this are dropped
  double tol = 1e-14;
  int max_order = 24;
};

/// Smallest piece length worth resolving for data behaving like r^exponent
/// near a singular point: the dropped mass scales like length^(exponent + 1).
inline double resolution_length(double scale, double exponent, double tol = 1e-15) {
  const double p = std::min(1.0, exponent + 1.0);
  if (!(p > 0.0)) throw InputError("singular exponent " + std::to_string(exponent) + " is not integrable");
  const double rel = std::max(std::pow(tol, 1.0 / p), 1e-150);
  return scale * rel;
}

namespace detail {

inline constexpr int kMaxDepth = 4000;

inline bool is_point_in(const Point& p, std::span<const Point> pts) {
  for (const auto& q : pts)
    if (p == q) return true;
  return false;
}

inline double min_point_rho(const Segment& s, std::span<const Point> pts) {
  double rho = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) rho = std::min(rho, bernstein_rho(s, p));
  return rho;
}

// Pieces shorter than min_length, or too short to bisect in floating point,
// are dropped.
inline bool below_resolution(const Segment& s, double min_length) {
  const double len = s.length();
  const double scale = std::max(s.a.cwiseAbs().maxCoeff(), s.b.cwiseAbs().maxCoeff());
  return len < min_length || len < 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

template <class F>
void integrate_segment_rec(const Segment& s, F& f, const SingularSet& sing, std::span<const Segment> near, int depth,
                           double& acc) {
  if (depth > kMaxDepth) throw NumericalError("integrate_segment: recursion limit reached");
  bool singular = is_point_in(s.a, sing.points) || is_point_in(s.b, sing.points);
  for (const auto& n : near)
    singular = singular || s.a == n.a || s.a == n.b || s.b == n.a || s.b == n.b;
  if (singular) {
    if (below_resolution(s, sing.min_length)) return;
    const Point m = s.midpoint();
    integrate_segment_rec({s.a, m}, f, sing, near, depth + 1, acc);
    integrate_segment_rec({m, s.b}, f, sing, near, depth + 1, acc);
    return;
  }
  double rho = min_point_rho(s, sing.points);
  for (const auto& n : near) rho = std::min(rho, bernstein_rho_distance(s, segment_distance(s, n)));
  const int q = gauss_order(rho, sing.tol);
  if (q > sing.max_order) {
    const Point m = s.midpoint();
    integrate_segment_rec({s.a, m}, f, sing, near, depth + 1, acc);
    integrate_segment_rec({m, s.b}, f, sing, near, depth + 1, acc);
    return;
  }
  const auto& rule = gauss_rule(q);
  const double half = 0.5 * s.length();
  double sum = 0.0;
  for (int k = 0; k < q; ++k) sum += rule.weights[k] * f(s.at(0.5 * (1.0 + rule.nodes[k])));
  acc += half * sum;
}

template <std::size_t K, class W, class Ker, class G>
[[gnu::noinline]] void pair_gauss(const Segment& A, const Segment& B, int qa, int qb, W& w, Ker& k, G& g,
                                  std::array<double, K>& acc) {
  const auto& ra = gauss_rule(qa);
  const auto& rb = gauss_rule(qb);
  std::array<Point, kMaxGaussOrder> ys;
  std::array<std::array<double, K>, kMaxGaussOrder> gs;
  for (int j = 0; j < qb; ++j) {
    ys[j] = B.at(0.5 * (1.0 + rb.nodes[j]));
    gs[j] = g(ys[j]);
    for (auto& v : gs[j]) v *= rb.weights[j];
  }
  const double jac = 0.25 * A.length() * B.length();
  for (int i = 0; i < qa; ++i) {
    const Point x = A.at(0.5 * (1.0 + ra.nodes[i]));
    const double wx = ra.weights[i] * w(x) * jac;
    if (wx == 0.0) continue;
    for (int j = 0; j < qb; ++j) {
      const double kv = wx * k(x, ys[j]);
      for (std::size_t c = 0; c < K; ++c) acc[c] += kv * gs[j][c];
    }
  }
}

template <std::size_t K, class W, class Ker, class G>
void integrate_pair_rec(const Segment& A, const Segment& B, W& w, Ker& k, G& g, const SingularSet& sing, int depth,
                        std::array<double, K>& acc) {
  if (depth > kMaxDepth) throw NumericalError("integrate_pair: recursion limit reached");
  const std::span<const Point> pts(sing.points);
  const bool touch = A.a == B.a || A.a == B.b || A.b == B.a || A.b == B.b;
  const bool a_sing = touch || is_point_in(A.a, pts) || is_point_in(A.b, pts);
  const bool b_sing = touch || is_point_in(B.a, pts) || is_point_in(B.b, pts);
  const double la = A.length();
  const double lb = B.length();
  auto split_a = [&] {
    const Point m = A.midpoint();
    integrate_pair_rec<K>(Segment{A.a, m}, B, w, k, g, sing, depth + 1, acc);
    integrate_pair_rec<K>(Segment{m, A.b}, B, w, k, g, sing, depth + 1, acc);
  };
  auto split_b = [&] {
    const Point m = B.midpoint();
    integrate_pair_rec<K>(A, Segment{B.a, m}, w, k, g, sing, depth + 1, acc);
    integrate_pair_rec<K>(A, Segment{m, B.b}, w, k, g, sing, depth + 1, acc);
  };
  if (a_sing || b_sing) {
    const bool pick_a = a_sing && (!b_sing || la >= lb);
    if (below_resolution(pick_a ? A : B, sing.min_length)) return;
    pick_a ? split_a() : split_b();
    return;
  }
  const double d = segment_distance(A, B);
  const int qa = gauss_order(std::min(bernstein_rho_distance(A, d), min_point_rho(A, pts)), sing.tol);
  const int qb = gauss_order(std::min(bernstein_rho_distance(B, d), min_point_rho(B, pts)), sing.tol);
  if (qa > sing.max_order || qb > sing.max_order) {
    const bool pick_a = qa > sing.max_order && (qb <= sing.max_order || la >= lb);
    pick_a ? split_a() : split_b();
    return;
  }
  pair_gauss<K>(A, B, qa, qb, w, k, g, acc);
}

}  // namespace detail

/// Integral of f over the segment. Pieces are bisected toward singular points
/// sitting at their endpoints and toward endpoints shared with a segment from
/// `near`; elsewhere the Gauss order follows the Bernstein ellipse of the
/// closest singularity (points of `sing` or segments of `near`).
template <class F>
double integrate_segment(const Segment& s, F&& f, const SingularSet& sing, std::span<const Segment> near = {}) {
  double acc = 0.0;
  detail::integrate_segment_rec(s, f, sing, near, 0, acc);
  return acc;
}

/// Integral over A x B of w(x) k(x, y) g(y)[c] for c < K. The kernel may be
/// singular where A and B touch; A and B must not overlap otherwise.
template <std::size_t K, class W, class Ker, class G>
std::array<double, K> integrate_pair(const Segment& A, const Segment& B, W&& w, Ker&& k, G&& g,
                                     const SingularSet& sing) {
  std::array<double, K> acc{};
  detail::integrate_pair_rec<K>(A, B, w, k, g, sing, 0, acc);
  return acc;
}

}  // namespace bemloc
