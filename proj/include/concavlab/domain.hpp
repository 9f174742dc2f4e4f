#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cvlab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double norm(Point a);

enum class DomainKind { unit_square, rectangle, disk, ellipse, convex_polygon };

std::string_view to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view name);

struct Box {
  Point lo;
  Point hi;
};

/// Bounded convex planar domain. Rectangles sit at the origin, disks and
/// ellipses are centred at the origin, polygons are given counterclockwise.
struct DomainSpec {
  DomainKind kind = DomainKind::unit_square;
  double width = 1.0;
  double height = 1.0;
  double radius = 1.0;
  double semi_x = 1.0;
  double semi_y = 1.0;
  std::vector<Point> vertices;

  static DomainSpec unit_square();
  static DomainSpec rectangle(double w, double h);
  static DomainSpec disk(double r);
  static DomainSpec ellipse(double a, double b);
  static DomainSpec polygon(std::vector<Point> vertices);

  /// Throws NonConvexPolygon or InvalidArgument.
  void validate() const;
  bool strongly_convex() const;
  Box bounding_box() const;
  double inradius() const;
  Point center() const;
  double diameter() const;
  std::string describe() const;
};

/// Signed distance to the boundary: positive inside, negative outside.
double distance_to_boundary(const DomainSpec& domain, Point x);

/// Inward unit normal at a boundary point. Throws VertexAmbiguity at corners.
Point boundary_normal(const DomainSpec& domain, Point p);

enum class NodeClass : std::uint8_t { interior, boundary_band, exterior };

enum Arm : int { east = 0, west = 1, north = 2, south = 3 };

/// Uniform grid over the bounding box with node classification and
/// cut-cell fractions for the interior nodes.
class DiscretizedDomain {
 public:
  DiscretizedDomain(DomainSpec spec, double h);

  const DomainSpec& spec() const { return spec_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Point origin() const { return origin_; }
  Point node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
  int grid_index(int i, int j) const { return j * nx_ + i; }

  NodeClass node_class(int i, int j) const { return cls_[grid_index(i, j)]; }
  double node_distance(int i, int j) const { return dist_[grid_index(i, j)]; }

  std::size_t interior_count() const { return interior_.size(); }
  /// -1 when (i, j) is not an interior node or lies off the grid.
  int interior_index(int i, int j) const;
  std::array<int, 2> interior_node(std::size_t k) const { return interior_[k]; }
  Point interior_point(std::size_t k) const;
  double interior_distance(std::size_t k) const;

  /// Neighbour interior index per arm, -1 when the arm is cut by the boundary.
  const std::array<int, 4>& neighbours(std::size_t k) const { return nbr_[k]; }
  /// Arm length in units of h, in (0, 1].
  const std::array<double, 4>& arm_fractions(std::size_t k) const { return theta_[k]; }
  bool boundary_adjacent(std::size_t k) const;

  /// Interior nodes with distance to the boundary strictly above rho.
  std::vector<bool> inner_region_mask(double rho) const;

 private:
  DomainSpec spec_;
  double h_;
  int nx_ = 0;
  int ny_ = 0;
  Point origin_;
  std::vector<NodeClass> cls_;
  std::vector<double> dist_;
  std::vector<int> index_;
  std::vector<std::array<int, 2>> interior_;
  std::vector<std::array<int, 4>> nbr_;
  std::vector<std::array<double, 4>> theta_;
};

using DomainPtr = std::shared_ptr<const DiscretizedDomain>;

DomainPtr build_discretization(const DomainSpec& spec, double h);

}  // namespace cvlab
