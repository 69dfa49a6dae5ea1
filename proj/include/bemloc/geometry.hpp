#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace bemloc {

using Point = Eigen::Vector2d;

inline double cross(const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); }

// Outward normal of a boundary traversed counter-clockwise.
inline Point outward_normal(const Point& tangent) { return {tangent.y(), -tangent.x()}; }

/// Closed polygon, vertices listed counter-clockwise.
struct Polygon {
  std::vector<Point> vertices;
  std::string name;

  std::size_t size() const { return vertices.size(); }
  const Point& vertex(std::size_t i) const { return vertices[i % vertices.size()]; }
};

double signed_area(const Polygon& p);
double perimeter(const Polygon& p);
double diameter(const Polygon& p);

/// Interior angle at every vertex, in (0, 2*pi).
std::vector<double> interior_angles(const Polygon& p);

/// Throws InputError naming the first violated invariant: at least three
/// vertices, no repeated consecutive vertex, counter-clockwise orientation,
/// no straight angle, no self-intersection.
void validate_polygon(const Polygon& p);

/// Vertex whose angle is the most restrictive for the shift parameter;
/// ties go to the lowest index.
std::size_t singular_corner(const Polygon& p);

/// Re-indexes the polygon so the singular corner is vertex 0, moves it to the
/// origin, rotates its interior bisector onto the positive x-axis and scales
/// the diameter to 1/2.
Polygon normalize_polygon(const Polygon& p);

/// "lshape", "zshape" or "square"; already normalized, singular corner first.
Polygon canonical_geometry(std::string_view name);

/// Plain-text vertex list ("x y" per line, '#' starts a comment). The result is
/// validated but not normalized.
Polygon read_polygon_file(const std::string& path);

/// Supremum of the admissible shift parameter, min_j min{pi/w_j, pi/(2pi-w_j)} - 1/2.
double alpha_D_bound(const Polygon& p);

/// Straight boundary element.
struct Element {
  Point a;
  Point b;
  double length = 0.0;
  Point tangent;
  Point normal;
  std::size_t edge = 0;  // polygon edge carrying the element
  std::size_t root = 0;  // ancestor index in the level-0 mesh

  Point midpoint() const { return 0.5 * (a + b); }
  Point at(double t) const { return a + t * (b - a); }
};

Element make_element(const Point& a, const Point& b, std::size_t edge, std::size_t root);

/// Closed loop of elements; element i runs from node i to node i+1 (mod N).
/// The P1 degree of freedom i lives on node i.
class BoundaryMesh {
 public:
  BoundaryMesh(Polygon polygon, std::vector<Element> elements, int level);

  const Polygon& polygon() const { return polygon_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  const Point& node(std::size_t i) const { return elements_[i % elements_.size()].a; }
  int level() const { return level_; }

  double h() const { return h_max_; }
  double h_min() const { return h_min_; }
  double length() const { return length_; }
  double diameter() const { return diameter_; }

 private:
  Polygon polygon_;
  std::vector<Element> elements_;
  int level_ = 0;
  double h_max_ = 0.0;
  double h_min_ = 0.0;
  double length_ = 0.0;
  double diameter_ = 0.0;
};

/// Splits every polygon edge into ceil(|edge| / target_h) equal elements.
BoundaryMesh initial_mesh(const Polygon& p, double target_h);

/// Splits every polygon edge into the same number of equal elements.
BoundaryMesh initial_mesh_per_edge(const Polygon& p, std::size_t per_edge);

/// Bisects every element; children keep the parent's edge and root.
BoundaryMesh refine_uniform(const BoundaryMesh& m);

/// Union of level-0 elements, carried through refinement by each element's root.
class BoundaryRegion {
 public:
  explicit BoundaryRegion(std::vector<bool> coarse_members);

  bool contains(const Element& e) const { return members_.at(e.root); }
  std::vector<std::size_t> element_indices(const BoundaryMesh& m) const;
  double arc_length(const BoundaryMesh& m) const;
  std::size_t coarse_count() const;
  const std::vector<bool>& coarse_members() const { return members_; }

 private:
  std::vector<bool> members_;
};

/// A level-0 element is a member when every element of m descending from it
/// satisfies the predicate on its midpoint. Throws InputError when nothing is
/// selected.
BoundaryRegion select_region(const BoundaryMesh& m, const std::function<bool(const Point&)>& selector);
BoundaryRegion select_region_edges(const BoundaryMesh& m, const std::vector<std::size_t>& edges);

/// Elements whose midpoint is at least fraction * diam away from the given corner.
BoundaryRegion select_region_by_distance(const BoundaryMesh& m, const Point& corner, double fraction);

}  // namespace bemloc
