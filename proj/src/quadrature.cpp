#include "bemloc/quadrature.hpp"

#include <algorithm>
#include <mutex>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace bemloc {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.order = n;
  const auto positive = boost::math::legendre_p_zeros<double>(n);  // ascending, >= 0
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
  }
  for (double x : positive) rule.nodes.push_back(x);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

struct Piece {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece kronrod_piece(const std::function<double(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double fc = f(c);
  double kron = wk[0] * fc;
  double gauss = wg[0] * fc;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double s = f(c - r * xk[i]) + f(c + r * xk[i]);
    kron += wk[i] * s;
    if (i % 2 == 0) gauss += wg[i / 2] * s;
  }
  return {a, b, r * kron, std::abs(r * (kron - gauss))};
}

}  // namespace

const GaussRule& gauss_rule(int n) {
  if (n < 1 || n > kMaxGaussOrder) throw InputError("gauss_rule: order " + std::to_string(n) + " out of range");
  static std::vector<GaussRule> rules;
  static std::once_flag once;
  std::call_once(once, [] {
    rules.reserve(kMaxGaussOrder);
    for (int k = 1; k <= kMaxGaussOrder; ++k) rules.push_back(build_rule(k));
  });
  return rules[n - 1];
}

double adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw InputError("adaptive_quad: tolerance must be positive");
  if (a == b) return 0.0;
  std::priority_queue<Piece> pieces;
  pieces.push(kronrod_piece(f, a, b));
  double value = pieces.top().value;
  double error = pieces.top().error;
  std::size_t count = 1;
  while (error > tol) {
    if (count >= kAdaptiveBudget)
      throw NumericalError("adaptive_quad: no convergence within " + std::to_string(kAdaptiveBudget) +
                           " subintervals (error estimate " + std::to_string(error) + ")");
    const Piece worst = pieces.top();
    pieces.pop();
    const double m = 0.5 * (worst.a + worst.b);
    const Piece left = kronrod_piece(f, worst.a, m);
    const Piece right = kronrod_piece(f, m, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    pieces.push(left);
    pieces.push(right);
    ++count;
    if (!std::isfinite(value)) throw NumericalError("adaptive_quad: integrand produced a non-finite value");
    if (error <= tol) {
      // Re-sum to shed the drift of the incremental updates.
      auto copy = pieces;
      value = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return value;
}

double point_segment_distance(const Point& p, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = d.squaredNorm();
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return (p - s.at(t)).norm();
}

double segment_distance(const Segment& s, const Segment& t) {
  const Point r = s.b - s.a;
  const Point q = t.b - t.a;
  const double denom = cross(r, q);
  if (denom != 0.0) {
    const double u = cross(t.a - s.a, q) / denom;
    const double v = cross(t.a - s.a, r) / denom;
    if (u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0) return 0.0;
  }
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t), point_segment_distance(t.a, s),
                   point_segment_distance(t.b, s)});
}

double bernstein_rho(const Segment& s, const Point& p) {
  const double half = 0.5 * s.length();
  const Point tau = (s.b - s.a) / (2.0 * half);
  const Point rel = p - s.midpoint();
  const std::complex<double> z(rel.dot(tau) / half, cross(tau, rel) / half);
  const std::complex<double> w = z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  const double mag = std::abs(w);
  return std::max(mag, 1.0 / mag);
}

}  // namespace bemloc
