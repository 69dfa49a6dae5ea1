#include "bemloc/operators.hpp"

#include <cstdio>
#include <memory>

#include "bemloc/errors.hpp"
#include "bemloc/kernels.hpp"
#include "panel_cache.hpp"

namespace bemloc {

namespace {

using detail::PanelCache;
constexpr int kCached = PanelCache::kMaxCachedOrder;

std::vector<Segment> segments_of(const BoundaryMesh& m) {
  std::vector<Segment> s;
  s.reserve(m.size());
  for (const auto& e : m.elements()) s.push_back(segment_of(e));
  return s;
}

void require_small_diameter(const BoundaryMesh& m) {
  if (!(m.diameter() < 1.0))
    throw InputError("single-layer operator needs diameter < 1, polygon has diameter " + std::to_string(m.diameter()));
}

double self_entry(double h) { return -kInvTwoPi * h * h * (std::log(h) - 1.5); }

// Outer graded Gauss over a of the exact inner integral over b.
double near_entry(const Segment& a, const Segment& b) {
  SingularSet sing;
  sing.tol = kAssemblyTol;
  sing.min_length = 1e-15 * std::max(a.length(), b.length());
  const Segment near[1] = {b};
  const double v = integrate_segment(a, [&](const Point& x) { return panel_log_moment(b, x); }, sing, near);
  return -kInvTwoPi * v;
}

class SingleLayer {
 public:
  explicit SingleLayer(std::span<const Segment> segments) : cache_(segments) {}

  std::size_t size() const { return cache_.size(); }

  double entry(std::size_t i, std::size_t j) const {
    const Segment& a = cache_.segment(i);
    const Segment& b = cache_.segment(j);
    if (i == j) return self_entry(a.length());
    const auto [qa, qb] = cache_.pair_orders(i, j, kAssemblyTol);
    if (qa > kCached || qb > kCached) return near_entry(a, b);
    const Point* xa = cache_.points(i, qa);
    const double* wa = cache_.weights(i, qa);
    const Point* yb = cache_.points(j, qb);
    const double* wb = cache_.weights(j, qb);
    double sum = 0.0;
    for (int p = 0; p < qa; ++p) {
      double row = 0.0;
      for (int q = 0; q < qb; ++q) row += wb[q] * std::log((xa[p] - yb[q]).squaredNorm());
      sum += wa[p] * row;
    }
    return -0.5 * kInvTwoPi * sum;
  }

 private:
  PanelCache cache_;
};

// Minimal Gauss order at which data with the given singular points is resolved on s.
int data_order(const Segment& s, const BoundaryData& d) {
  return gauss_order(detail::min_point_rho(s, d.singular_points), kAssemblyTol);
}

SingularSet data_singular_set(const BoundaryData& d, double diam) {
  SingularSet sing;
  sing.points = d.singular_points;
  sing.tol = kAssemblyTol;
  sing.min_length = resolution_length(diam, d.singular_exponent);
  return sing;
}

double parameter_on(const Segment& s, const Point& y) {
  const Point d = s.b - s.a;
  return (y - s.a).dot(d) / d.squaredNorm();
}

}  // namespace

double single_layer_entry(const Segment& a, const Segment& b) {
  if (a.a == b.a && a.b == b.b) return self_entry(a.length());
  const double d = segment_distance(a, b);
  if (d > 0.0) {
    const int qa = gauss_order(bernstein_rho_distance(a, d), kAssemblyTol);
    const int qb = gauss_order(bernstein_rho_distance(b, d), kAssemblyTol);
    if (qa <= kCached && qb <= kCached) {
      SingularSet sing;
      sing.tol = kAssemblyTol;
      const auto v = integrate_pair<1>(
          a, b, [](const Point&) { return 1.0; }, [](const Point& x, const Point& y) { return log_distance(x, y); },
          [](const Point&) { return std::array<double, 1>{1.0}; }, sing);
      return -kInvTwoPi * v[0];
    }
  }
  return near_entry(a, b);
}

GalerkinMatrix assemble_V(const BoundaryMesh& m) {
  require_small_diameter(m);
  const auto segs = segments_of(m);
  const SingleLayer op(segs);
  const auto n = static_cast<Eigen::Index>(segs.size());
  GalerkinMatrix v{Space::P0, Eigen::MatrixXd(n, n)};
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) v.values(i, j) = op.entry(i, j);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) v.values(i, j) = v.values(j, i);
  return v;
}

double single_layer_quadratic_form(std::span<const Segment> segments, const Eigen::VectorXd& w) {
  if (static_cast<std::size_t>(w.size()) != segments.size())
    throw InputError("single_layer_quadratic_form: weight count does not match segment count");
  const SingleLayer op(segments);
  const auto n = static_cast<Eigen::Index>(segments.size());
  std::vector<double> rows(segments.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index k = 0; k < n; ++k) {
    if (w[k] == 0.0) continue;
    double off = 0.0;
    for (Eigen::Index l = k + 1; l < n; ++l)
      if (w[l] != 0.0) off += w[l] * op.entry(k, l);
    rows[k] = w[k] * (w[k] * op.entry(k, k) + 2.0 * off);
  }
  double sum = 0.0;
  for (double r : rows) sum += r;
  return sum;
}

CoefficientVector assemble_rhs_symm(const BoundaryMesh& m, const BoundaryData& g) {
  const auto segs = segments_of(m);
  const PanelCache cache(segs);
  const auto& els = m.elements();
  const auto gw = cache.weighted_values([&](std::size_t i, const Point& x) { return g(x, els[i].normal); });
  std::vector<int> order(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) order[i] = data_order(segs[i], g);
  const SingularSet sing = data_singular_set(g, m.diameter());

  const auto n = static_cast<Eigen::Index>(segs.size());
  CoefficientVector b{Space::P0, Eigen::VectorXd::Zero(n)};
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < n; ++j) {
    const Element& ej = els[j];
    double sum = 0.5 * integrate_segment(segs[j], [&](const Point& x) { return g(x, ej.normal); }, sing);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Element& ek = els[k];
      if (ek.edge == ej.edge) continue;
      auto [qa, qb] = cache.pair_orders(j, k, kAssemblyTol);
      qb = std::max(qb, order[k]);
      if (qa <= kCached && qb <= kCached) {
        const Point* xa = cache.points(j, qa);
        const double* wa = cache.weights(j, qa);
        const Point* yb = cache.points(k, qb);
        const double* gb = gw.data() + (k * PanelCache::kStride + PanelCache::offset(qb));
        double acc = 0.0;
        for (int p = 0; p < qa; ++p) {
          double row = 0.0;
          for (int q = 0; q < qb; ++q) row += gb[q] * dlp_kernel(xa[p], yb[q], ek.normal);
          acc += wa[p] * row;
        }
        sum += acc;
      } else {
        const auto v = integrate_pair<1>(
            segs[j], segs[k], [](const Point&) { return 1.0; },
            [&](const Point& x, const Point& y) { return dlp_kernel(x, y, ek.normal); },
            [&](const Point& y) { return std::array<double, 1>{g(y, ek.normal)}; }, sing);
        sum += v[0];
      }
    }
    b.values[j] = sum;
  }
  return b;
}

GalerkinMatrix hypersingular_from_single_layer(const BoundaryMesh& m, const GalerkinMatrix& v) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (v.space != Space::P0 || v.size() != n) throw InputError("hypersingular_from_single_layer: V does not match mesh");
  Eigen::VectorXd inv_h(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_h[i] = 1.0 / m.element(i).length;
  // Column k of D: +1/h_{k-1} on element k-1, -1/h_k on element k.
  Eigen::MatrixXd vd(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index km = (k + n - 1) % n;
    vd.col(k) = v.values.col(km) * inv_h[km] - v.values.col(k) * inv_h[k];
  }
  GalerkinMatrix w{Space::P1, Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index km = (k + n - 1) % n;
    w.values.row(k) = vd.row(km) * inv_h[km] - vd.row(k) * inv_h[k];
  }
  const Eigen::MatrixXd sym = 0.5 * (w.values + w.values.transpose());
  w.values = sym;
  return w;
}

GalerkinMatrix assemble_W(const BoundaryMesh& m) { return hypersingular_from_single_layer(m, assemble_V(m)); }

Eigen::VectorXd hat_integrals(const BoundaryMesh& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = 0.5 * (m.element((i + n - 1) % n).length + m.element(i).length);
  return a;
}

GalerkinMatrix assemble_stabilization(const BoundaryMesh& m) {
  const Eigen::VectorXd a = hat_integrals(m);
  return {Space::P1, a * a.transpose()};
}

CoefficientVector assemble_rhs_hypsing(const BoundaryMesh& m, const BoundaryData& flux) {
  const auto segs = segments_of(m);
  const PanelCache cache(segs);
  const auto& els = m.elements();
  const auto fw = cache.weighted_values([&](std::size_t i, const Point& x) { return flux(x, els[i].normal); });
  std::vector<int> order(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) order[i] = data_order(segs[i], flux);
  const SingularSet sing = data_singular_set(flux, m.diameter());

  const auto n = static_cast<Eigen::Index>(segs.size());
  std::vector<std::array<double, 2>> local(segs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index k = 0; k < n; ++k) {
    const Element& ek = els[k];
    const Segment& sb = segs[k];
    double i0 = 0.0;
    double i1 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Element& ej = els[j];
      if (ej.edge == ek.edge) continue;
      auto [qa, qb] = cache.pair_orders(j, k, kAssemblyTol);
      qa = std::max(qa, order[j]);
      if (qa <= kCached && qb <= kCached) {
        const Point* xa = cache.points(j, qa);
        const double* fa = fw.data() + (j * PanelCache::kStride + PanelCache::offset(qa));
        const Point* yb = cache.points(k, qb);
        const double* wb = cache.weights(k, qb);
        const auto& rule = gauss_rule(qb);
        for (int q = 0; q < qb; ++q) {
          double col = 0.0;
          for (int p = 0; p < qa; ++p) col += fa[p] * dlp_kernel(xa[p], yb[q], ek.normal);
          const double t = 0.5 * (1.0 + rule.nodes[q]);
          i0 += wb[q] * (1.0 - t) * col;
          i1 += wb[q] * t * col;
        }
      } else {
        const auto v = integrate_pair<2>(
            segs[j], sb, [&](const Point& x) { return flux(x, ej.normal); },
            [&](const Point& x, const Point& y) { return dlp_kernel(x, y, ek.normal); },
            [&](const Point& y) {
              const double t = parameter_on(sb, y);
              return std::array<double, 2>{1.0 - t, t};
            },
            sing);
        i0 += v[0];
        i1 += v[1];
      }
    }
    const double j0 = integrate_segment(
        sb, [&](const Point& y) { return flux(y, ek.normal) * (1.0 - parameter_on(sb, y)); }, sing);
    const double j1 =
        integrate_segment(sb, [&](const Point& y) { return flux(y, ek.normal) * parameter_on(sb, y); }, sing);
    local[k] = {0.5 * j0 - i0, 0.5 * j1 - i1};
  }
  CoefficientVector b{Space::P1, Eigen::VectorXd::Zero(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    b.values[k] += local[k][0];
    b.values[(k + 1) % n] += local[k][1];
  }
  return b;
}

double double_layer_pairing(const Polygon& p, const BoundaryData& q, const BoundaryData& f) {
  const std::size_t n = p.size();
  std::vector<Segment> edges;
  std::vector<Point> normals;
  for (std::size_t k = 0; k < n; ++k) {
    edges.push_back({p.vertex(k), p.vertex(k + 1)});
    normals.push_back(outward_normal((p.vertex(k + 1) - p.vertex(k)).normalized()));
  }
  SingularSet sing;
  sing.tol = kAssemblyTol;
  sing.points = q.singular_points;
  for (const auto& s : f.singular_points)
    if (!detail::is_point_in(s, sing.points)) sing.points.push_back(s);
  const double diam = diameter(p);
  sing.min_length = std::min(resolution_length(diam, q.singular_exponent), resolution_length(diam, f.singular_exponent));
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const Point na = normals[a];
      const Point nb = normals[b];
      const auto v = integrate_pair<1>(
          edges[a], edges[b], [&](const Point& x) { return q(x, na); },
          [&](const Point& x, const Point& y) { return dlp_kernel(x, y, nb); },
          [&](const Point& y) { return std::array<double, 1>{f(y, nb)}; }, sing);
      sum += v[0];
    }
  return sum;
}

void write_matrix(const GalerkinMatrix& a, const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!file) throw InputError("write_matrix: cannot open " + path);
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.values.cols(); ++j)
      std::fprintf(file.get(), j == 0 ? "%.17g" : " %.17g", a.values(i, j));
    std::fputc('\n', file.get());
  }
  if (std::ferror(file.get())) throw InputError("write_matrix: write to " + path + " failed");
}

}  // namespace bemloc
