#include "bemloc/norms.hpp"

#include <cmath>
#include <numbers>

#include "bemloc/errors.hpp"
#include "bemloc/quadrature.hpp"

namespace bemloc {

namespace {

constexpr double kGaussShift = 0.5 / std::numbers::sqrt3;  // two-point nodes at 1/2 -+ this

void require_nonempty(const BoundaryMesh& m, const BoundaryRegion& region, const char* who) {
  if (region.coarse_members().empty() || region.element_indices(m).empty())
    throw InputError(std::string(who) + ": region is empty");
}

void require_space(const CoefficientVector& v, Space s, std::size_t n, const char* who) {
  if (v.space != s || static_cast<std::size_t>(v.size()) != n)
    throw InputError(std::string(who) + ": coefficient vector does not match the mesh");
}

double parameter_on(const Segment& s, const Point& y) {
  const Point d = s.b - s.a;
  return (y - s.a).dot(d) / d.squaredNorm();
}

SingularSet singular_set(const BoundaryData& d, double diam) {
  SingularSet sing;
  sing.points = d.singular_points;
  sing.min_length = resolution_length(diam, d.singular_exponent);
  return sing;
}

// Breakpoints in [0, 1] refining geometrically toward t = 0.
std::vector<double> graded_breakpoints(int layers) {
  std::vector<double> t{0.0};
  for (int k = layers; k >= 0; --k) t.push_back(std::ldexp(1.0, -k));
  return t;
}

}  // namespace

ElementFunction p0_error(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& flux) {
  require_space(phi_h, Space::P0, m.size(), "p0_error");
  return [&m, values = phi_h.values, flux](std::size_t i, const Point& x) {
    return flux(x, m.element(i).normal) - values[static_cast<Eigen::Index>(i)];
  };
}

ElementFunction p1_error(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& trace,
                         double shift) {
  require_space(phi_h, Space::P1, m.size(), "p1_error");
  return [&m, values = phi_h.values, trace, shift](std::size_t i, const Point& x) {
    const Element& e = m.element(i);
    const double t = parameter_on(segment_of(e), x);
    const auto n = static_cast<Eigen::Index>(m.size());
    const auto k = static_cast<Eigen::Index>(i);
    const double v = (1.0 - t) * values[k] + t * values[(k + 1) % n];
    return trace(x, e.normal) - shift - v;
  };
}

double l2_error(const BoundaryMesh& m, const ElementFunction& e, const BoundaryRegion& region) {
  require_nonempty(m, region, "l2_error");
  double sum = 0.0;
  for (std::size_t i : region.element_indices(m)) {
    const Element& el = m.element(i);
    const double e1 = e(i, el.at(0.5 - kGaussShift));
    const double e2 = e(i, el.at(0.5 + kGaussShift));
    sum += 0.5 * el.length * (e1 * e1 + e2 * e2);
  }
  return std::sqrt(sum);
}

double l2_error(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& flux,
                const BoundaryRegion& region) {
  return l2_error(m, p0_error(m, phi_h, flux), region);
}

double neg_half_norm_local(const BoundaryMesh& m, const ElementFunction& e, const BoundaryRegion& region,
                           int refine_factor) {
  if (refine_factor < 2) throw InputError("neg_half_norm_local: refine_factor must be at least 2");
  require_nonempty(m, region, "neg_half_norm_local");
  const auto members = region.element_indices(m);
  std::vector<Segment> fine;
  fine.reserve(members.size() * refine_factor);
  Eigen::VectorXd w(static_cast<Eigen::Index>(members.size() * refine_factor));
  Eigen::Index k = 0;
  for (std::size_t i : members) {
    const Element& el = m.element(i);
    for (int r = 0; r < refine_factor; ++r) {
      const double t0 = static_cast<double>(r) / refine_factor;
      const double t1 = static_cast<double>(r + 1) / refine_factor;
      const Segment s{el.at(t0), el.at(t1)};
      w[k++] = 0.5 * (e(i, s.at(0.5 - kGaussShift)) + e(i, s.at(0.5 + kGaussShift)));
      fine.push_back(s);
    }
  }
  return std::sqrt(std::max(0.0, single_layer_quadratic_form(fine, w)));
}

double energy_error_global(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& flux,
                           int refine_factor) {
  if (refine_factor < 1) throw InputError("energy_error_global: refine_factor must be positive");
  require_space(phi_h, Space::P0, m.size(), "energy_error_global");
  const SingularSet sing = singular_set(flux, m.diameter());
  const auto graded = graded_breakpoints(kGradingLayers);
  std::vector<Segment> fine;
  std::vector<double> w;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Element& el = m.element(i);
    const double value = phi_h.values[static_cast<Eigen::Index>(i)];
    auto add = [&](const Point& a, const Point& b) {
      const Segment s{a, b};
      const double mean = integrate_segment(s, [&](const Point& x) { return flux(x, el.normal); }, sing) / s.length();
      fine.push_back(s);
      w.push_back(mean - value);
    };
    for (int r = 0; r < refine_factor; ++r) {
      const Point a = el.at(static_cast<double>(r) / refine_factor);
      const Point b = el.at(static_cast<double>(r + 1) / refine_factor);
      const bool at_a = detail::is_point_in(a, sing.points);
      const bool at_b = detail::is_point_in(b, sing.points);
      if (!at_a && !at_b) {
        add(a, b);
        continue;
      }
      // Graded from the singular end; both ends singular is split at the middle.
      const Point mid = 0.5 * (a + b);
      auto grade = [&](const Point& s0, const Point& s1) {
        for (std::size_t k = 0; k + 1 < graded.size(); ++k) add(s0 + graded[k] * (s1 - s0), s0 + graded[k + 1] * (s1 - s0));
      };
      if (at_a && at_b) {
        grade(a, mid);
        grade(b, mid);
      } else if (at_a) {
        grade(a, b);
      } else {
        grade(b, a);
      }
    }
  }
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  return std::sqrt(std::max(0.0, single_layer_quadratic_form(fine, wv)));
}

double energy_error_pythagoras(double exact_energy, const CoefficientVector& phi_h, const CoefficientVector& rhs) {
  if (phi_h.size() != rhs.size()) throw InputError("energy_error_pythagoras: vector lengths differ");
  return std::sqrt(std::max(0.0, exact_energy - phi_h.values.dot(rhs.values)));
}

double h1_seminorm_error_local(const BoundaryMesh& m, const CoefficientVector& phi_h, const BoundaryData& derivative,
                               const BoundaryRegion& region) {
  require_space(phi_h, Space::P1, m.size(), "h1_seminorm_error_local");
  require_nonempty(m, region, "h1_seminorm_error_local");
  const auto n = static_cast<Eigen::Index>(m.size());
  double sum = 0.0;
  for (std::size_t i : region.element_indices(m)) {
    const Element& el = m.element(i);
    const auto k = static_cast<Eigen::Index>(i);
    const double slope = (phi_h.values[(k + 1) % n] - phi_h.values[k]) / el.length;
    const double d1 = derivative(el.at(0.5 - kGaussShift), el.tangent) - slope;
    const double d2 = derivative(el.at(0.5 + kGaussShift), el.tangent) - slope;
    sum += 0.5 * el.length * (d1 * d1 + d2 * d2);
  }
  return std::sqrt(sum);
}

double fit_eoc(std::span<const ErrorRecord> records, const std::string& norm, int window) {
  if (window < 2) throw InputError("fit_eoc: window must be at least 2");
  if (records.size() < 2) throw InputError("fit_eoc: need at least two records");
  const std::size_t count = std::min<std::size_t>(window, records.size());
  const auto tail = records.subspan(records.size() - count);
  double sx = 0.0;
  double sy = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : tail) {
    const auto it = r.norms.find(norm);
    if (it == r.norms.end()) throw InputError("fit_eoc: record without norm '" + norm + "'");
    if (!(it->second > 0.0))
      throw InputError("fit_eoc: norm '" + norm + "' is not positive at level " + std::to_string(r.level));
    xs.push_back(std::log(static_cast<double>(r.N)));
    ys.push_back(std::log(it->second));
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / count;
  const double my = sy / count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  if (!(sxx > 0.0)) throw InputError("fit_eoc: records need distinct N");
  return -sxy / sxx;
}

double boundary_integral(const Polygon& p, const BoundaryData& f) {
  const SingularSet sing = singular_set(f, diameter(p));
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Segment s{p.vertex(k), p.vertex(k + 1)};
    const Point n = outward_normal((s.b - s.a).normalized());
    sum += integrate_segment(s, [&](const Point& x) { return f(x, n); }, sing);
  }
  return sum;
}

ExactEnergies exact_energies(const Polygon& p, const SingularSolution& s) {
  const BoundaryData g = trace_data(s);
  const BoundaryData phi = flux_data(s);
  BoundaryData product;
  product.f = [&](const Point& x, const Point& n) { return g(x, n) * phi(x, n); };
  product.singular_points = phi.singular_points;
  product.singular_exponent = g.singular_exponent + phi.singular_exponent;
  return {boundary_integral(p, product), double_layer_pairing(p, phi, g)};
}

double trace_flux_by_angle(const Polygon& p, const SingularSolution& s) {
  const double a = s.alpha();
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point u = p.vertex(k) - s.center();
    const Point v = p.vertex(k + 1) - s.center();
    const double span = std::atan2(cross(u, v), u.dot(v));
    if (u.norm() == 0.0 || v.norm() == 0.0 || span == 0.0) continue;
    // Ray at angle t from u hits the edge line at distance R(t) = d / cos(t - t_foot).
    const Point dir = v - u;
    const double d = std::abs(cross(u, dir)) / dir.norm();
    const double base = std::atan2(u.y(), u.x());
    const Point foot = u - u.dot(dir) / dir.squaredNorm() * dir;
    const double foot_angle = std::atan2(foot.y(), foot.x());
    auto radius_power = [&](double t) { return std::pow(d / std::cos(base + t - foot_angle), 2.0 * a); };
    sum += 0.5 * a * adaptive_quad(radius_power, 0.0, span, 1e-13);
  }
  return sum;
}

}  // namespace bemloc
