#include "bemloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "bemloc/errors.hpp"

namespace bemloc {

namespace {

constexpr double kPi = std::numbers::pi;

// Signed turning angle between the incoming and outgoing edge at vertex i.
double turning_angle(const Polygon& p, std::size_t i) {
  const std::size_t n = p.size();
  const Point in = p.vertex(i) - p.vertex(i + n - 1);
  const Point out = p.vertex(i + 1) - p.vertex(i);
  return std::atan2(cross(in, out), in.dot(out));
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  auto orient = [](const Point& a, const Point& b, const Point& c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](const Point& a, const Point& b, const Point& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

Point rotate(const Point& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

double signed_area(const Polygon& p) {
  double twice = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) twice += cross(p.vertex(i), p.vertex(i + 1));
  return 0.5 * twice;
}

double perimeter(const Polygon& p) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += (p.vertex(i + 1) - p.vertex(i)).norm();
  return total;
}

double diameter(const Polygon& p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, (p.vertices[i] - p.vertices[j]).norm());
  return d;
}

std::vector<double> interior_angles(const Polygon& p) {
  std::vector<double> angles(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) angles[i] = kPi - turning_angle(p, i);
  return angles;
}

void validate_polygon(const Polygon& p) {
  const std::size_t n = p.size();
  if (n < 3) throw InputError("polygon: fewer than three vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.vertices[i].allFinite()) throw InputError("polygon: vertex " + std::to_string(i) + " is not finite");
    if (p.vertex(i) == p.vertex(i + 1))
      throw InputError("polygon: consecutive vertices " + std::to_string(i) + " and " +
                       std::to_string((i + 1) % n) + " coincide");
  }
  if (!(signed_area(p) > 0.0)) throw InputError("polygon: vertices are not in counter-clockwise order");
  for (std::size_t i = 0; i < n; ++i) {
    const Point in = (p.vertex(i) - p.vertex(i + n - 1)).normalized();
    const Point out = (p.vertex(i + 1) - p.vertex(i)).normalized();
    if (std::abs(cross(in, out)) < 1e-12)
      throw InputError("polygon: interior angle at vertex " + std::to_string(i) + " is pi (or degenerate)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (segments_intersect(p.vertex(i), p.vertex(i + 1), p.vertex(j), p.vertex(j + 1)))
        throw InputError("polygon: edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  }
  const auto angles = interior_angles(p);
  double turning = 0.0;
  for (double w : angles) turning += kPi - w;
  if (std::abs(turning - 2.0 * kPi) > 1e-9) throw InputError("polygon: boundary is not a simple closed loop");
}

std::size_t singular_corner(const Polygon& p) {
  const auto angles = interior_angles(p);
  std::size_t best = 0;
  for (std::size_t i = 1; i < angles.size(); ++i)
    if (angles[i] > angles[best] + 1e-12) best = i;
  return best;
}

Polygon normalize_polygon(const Polygon& p) {
  validate_polygon(p);
  const std::size_t k = singular_corner(p);
  const std::size_t n = p.size();
  Polygon out;
  out.name = p.name;
  out.vertices.reserve(n);
  const Point origin = p.vertex(k);
  for (std::size_t i = 0; i < n; ++i) out.vertices.push_back(p.vertex(k + i) - origin);

  const double omega = interior_angles(out)[0];
  const Point to_next = out.vertices[1].normalized();
  const Point bisector = rotate(to_next, 0.5 * omega);
  const double angle = -std::atan2(bisector.y(), bisector.x());
  const double scale = 0.5 / diameter(out);
  for (auto& v : out.vertices) v = scale * rotate(v, angle);
  out.vertices[0] = Point::Zero();
  return out;
}

Polygon canonical_geometry(std::string_view name) {
  Polygon p;
  p.name = std::string(name);
  if (name == "lshape") {
    // [-1,1]^2 minus [0,1]x[-1,0], rotated by -3pi/4 and scaled by 1/(4 sqrt 2).
    p.vertices = {{0.0, 0.0}, {-0.125, -0.125}, {0.0, -0.25}, {0.25, 0.0}, {0.0, 0.25}, {-0.125, 0.125}};
  } else if (name == "zshape") {
    // [-1,1]^2 minus the triangle (0,0), (-1,0), (-1,-1); reentrant angle 7pi/4.
    Polygon raw{{{0.0, 0.0}, {-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {-1.0, 0.0}}, "zshape"};
    p = normalize_polygon(raw);
  } else if (name == "square") {
    p.vertices = {{0.0, 0.0}, {0.25, -0.25}, {0.5, 0.0}, {0.25, 0.25}};
  } else {
    throw InputError("unknown geometry '" + std::string(name) + "' (expected lshape, zshape or square)");
  }
  validate_polygon(p);
  return p;
}

Polygon read_polygon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open polygon file '" + path + "'");
  Polygon p;
  p.name = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double x = 0.0;
    double y = 0.0;
    if (!(fields >> x)) continue;  // blank or comment-only line
    std::string rest;
    if (!(fields >> y) || (fields >> rest))
      throw InputError(path + ":" + std::to_string(line_no) + ": expected exactly two numbers");
    p.vertices.emplace_back(x, y);
  }
  validate_polygon(p);
  return p;
}

double alpha_D_bound(const Polygon& p) {
  double s = std::numeric_limits<double>::infinity();
  for (double w : interior_angles(p)) {
    if (std::abs(w - kPi) < 1e-12) throw InputError("alpha_D_bound: interior angle equals pi");
    s = std::min({s, kPi / w, kPi / (2.0 * kPi - w)});
  }
  return s - 0.5;
}

Element make_element(const Point& a, const Point& b, std::size_t edge, std::size_t root) {
  Element e;
  e.a = a;
  e.b = b;
  e.length = (b - a).norm();
  e.tangent = (b - a) / e.length;
  e.normal = outward_normal(e.tangent);
  e.edge = edge;
  e.root = root;
  return e;
}

BoundaryMesh::BoundaryMesh(Polygon polygon, std::vector<Element> elements, int level)
    : polygon_(std::move(polygon)), elements_(std::move(elements)), level_(level) {
  if (elements_.empty()) throw InputError("mesh: no elements");
  h_max_ = 0.0;
  h_min_ = std::numeric_limits<double>::infinity();
  length_ = 0.0;
  for (const auto& e : elements_) {
    h_max_ = std::max(h_max_, e.length);
    h_min_ = std::min(h_min_, e.length);
    length_ += e.length;
  }
  diameter_ = bemloc::diameter(polygon_);
}

BoundaryMesh initial_mesh(const Polygon& p, double target_h) {
  if (!(target_h > 0.0)) throw InputError("initial_mesh: target_h must be positive");
  validate_polygon(p);
  std::vector<Element> elements;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point a = p.vertex(k);
    const Point b = p.vertex(k + 1);
    const double len = (b - a).norm();
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / target_h * (1.0 - 1e-12))));
    for (std::size_t i = 0; i < pieces; ++i) {
      const Point s = i == 0 ? a : Point(a + (double(i) / double(pieces)) * (b - a));
      const Point t = i + 1 == pieces ? b : Point(a + (double(i + 1) / double(pieces)) * (b - a));
      elements.push_back(make_element(s, t, k, elements.size()));
    }
  }
  return BoundaryMesh(p, std::move(elements), 0);
}

BoundaryMesh initial_mesh_per_edge(const Polygon& p, std::size_t per_edge) {
  if (per_edge == 0) throw InputError("initial_mesh_per_edge: need at least one element per edge");
  validate_polygon(p);
  std::vector<Element> elements;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point a = p.vertex(k);
    const Point b = p.vertex(k + 1);
    for (std::size_t i = 0; i < per_edge; ++i) {
      const Point s = i == 0 ? a : Point(a + (double(i) / double(per_edge)) * (b - a));
      const Point t = i + 1 == per_edge ? b : Point(a + (double(i + 1) / double(per_edge)) * (b - a));
      elements.push_back(make_element(s, t, k, elements.size()));
    }
  }
  return BoundaryMesh(p, std::move(elements), 0);
}

BoundaryMesh refine_uniform(const BoundaryMesh& m) {
  std::vector<Element> children;
  children.reserve(2 * m.size());
  for (const auto& e : m.elements()) {
    const Point mid = e.midpoint();
    children.push_back(make_element(e.a, mid, e.edge, e.root));
    children.push_back(make_element(mid, e.b, e.edge, e.root));
  }
  return BoundaryMesh(m.polygon(), std::move(children), m.level() + 1);
}

BoundaryRegion::BoundaryRegion(std::vector<bool> coarse_members) : members_(std::move(coarse_members)) {
  if (coarse_count() == 0) throw InputError("region: selection is empty");
}

std::vector<std::size_t> BoundaryRegion::element_indices(const BoundaryMesh& m) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (contains(m.element(i))) out.push_back(i);
  return out;
}

double BoundaryRegion::arc_length(const BoundaryMesh& m) const {
  double total = 0.0;
  for (const auto& e : m.elements())
    if (contains(e)) total += e.length;
  return total;
}

std::size_t BoundaryRegion::coarse_count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

namespace {

std::size_t root_count(const BoundaryMesh& m) {
  std::size_t roots = 0;
  for (const auto& e : m.elements()) roots = std::max(roots, e.root + 1);
  return roots;
}

BoundaryRegion select_by(const BoundaryMesh& m, const std::function<bool(const Element&)>& keep) {
  std::vector<bool> members(root_count(m), true);
  std::vector<bool> seen(members.size(), false);
  for (const auto& e : m.elements()) {
    seen[e.root] = true;
    if (!keep(e)) members[e.root] = false;
  }
  for (std::size_t r = 0; r < members.size(); ++r) members[r] = members[r] && seen[r];
  if (std::find(members.begin(), members.end(), true) == members.end())
    throw InputError("select_region: selector matched no element");
  return BoundaryRegion(std::move(members));
}

}  // namespace

BoundaryRegion select_region(const BoundaryMesh& m, const std::function<bool(const Point&)>& selector) {
  return select_by(m, [&](const Element& e) { return selector(e.midpoint()); });
}

BoundaryRegion select_region_edges(const BoundaryMesh& m, const std::vector<std::size_t>& edges) {
  return select_by(m, [&](const Element& e) { return std::find(edges.begin(), edges.end(), e.edge) != edges.end(); });
}

BoundaryRegion select_region_by_distance(const BoundaryMesh& m, const Point& corner, double fraction) {
  const double min_dist = fraction * m.diameter();
  return select_region(m, [&](const Point& x) { return (x - corner).norm() >= min_dist; });
}

}  // namespace bemloc
