#include "concavlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "concavlab/errors.hpp"

namespace cvlab {

namespace {

constexpr double kBoundaryTol = 1e-8;
// Nodes closer than this fraction of h to the boundary are boundary nodes.
constexpr double kSnapFraction = 1e-6;

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

double signed_area(const std::vector<Point>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

Point inward_edge_normal(Point a, Point b) {
  Point e = b - a;
  double len = norm(e);
  return {-e.y / len, e.x / len};
}

// Distance from (y0, y1), both nonnegative, to the ellipse with semi-axes
// e0 >= e1 > 0, by bisection on the Lagrange multiplier.
double ellipse_distance_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      double z0 = y0 / e0, z1 = y1 / e1;
      double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      double r0 = (e0 / e1) * (e0 / e1);
      double n0 = r0 * z0;
      double s0 = z1 - 1.0;
      double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
      double s = 0.0;
      for (int it = 0; it < 1100; ++it) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        double ratio0 = n0 / (s + r0), ratio1 = z1 / (s + 1.0);
        double gs = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
        if (gs > 0.0)
          s0 = s;
        else if (gs < 0.0)
          s1 = s;
        else
          break;
      }
      double x0 = r0 * y0 / (s + r0), x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  double numer0 = e0 * y0, denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    double xde0 = numer0 / denom0;
    double x0 = e0 * xde0, x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double ellipse_level(double a, double b, Point x) {
  return 1.0 - std::sqrt((x.x / a) * (x.x / a) + (x.y / b) * (x.y / b));
}

// Cheap function with the same sign as the signed distance.
double sign_level(const DomainSpec& d, Point x) {
  if (d.kind == DomainKind::ellipse) return ellipse_level(d.semi_x, d.semi_y, x);
  return distance_to_boundary(d, x);
}

}  // namespace

double norm(Point a) { return std::hypot(a.x, a.y); }

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::unit_square: return "unit_square";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::disk: return "disk";
    case DomainKind::ellipse: return "ellipse";
    case DomainKind::convex_polygon: return "convex_polygon";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(std::string_view name) {
  for (auto k : {DomainKind::unit_square, DomainKind::rectangle, DomainKind::disk, DomainKind::ellipse,
                 DomainKind::convex_polygon})
    if (to_string(k) == name) return k;
  if (name == "square") return DomainKind::unit_square;
  if (name == "polygon") return DomainKind::convex_polygon;
  fail(ErrorCode::invalid_argument, "unknown domain kind '" + std::string(name) + "'");
}

DomainSpec DomainSpec::unit_square() { return DomainSpec{}; }

DomainSpec DomainSpec::rectangle(double w, double h) {
  DomainSpec d;
  d.kind = DomainKind::rectangle;
  d.width = w;
  d.height = h;
  d.validate();
  return d;
}

DomainSpec DomainSpec::disk(double r) {
  DomainSpec d;
  d.kind = DomainKind::disk;
  d.radius = r;
  d.validate();
  return d;
}

DomainSpec DomainSpec::ellipse(double a, double b) {
  DomainSpec d;
  d.kind = DomainKind::ellipse;
  d.semi_x = a;
  d.semi_y = b;
  d.validate();
  return d;
}

DomainSpec DomainSpec::polygon(std::vector<Point> vertices) {
  DomainSpec d;
  d.kind = DomainKind::convex_polygon;
  if (vertices.size() >= 3 && signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  d.vertices = std::move(vertices);
  d.validate();
  return d;
}

void DomainSpec::validate() const {
  auto positive = [](double v, const char* what) {
    require(std::isfinite(v) && v > 0.0, ErrorCode::invalid_argument, std::string(what) + " must be positive");
  };
  switch (kind) {
    case DomainKind::unit_square: break;
    case DomainKind::rectangle:
      positive(width, "width");
      positive(height, "height");
      break;
    case DomainKind::disk: positive(radius, "radius"); break;
    case DomainKind::ellipse:
      positive(semi_x, "semi_x");
      positive(semi_y, "semi_y");
      break;
    case DomainKind::convex_polygon: {
      require(vertices.size() >= 3, ErrorCode::non_convex_polygon, "polygon needs at least 3 vertices");
      double scale = 0.0;
      for (auto v : vertices) scale = std::max(scale, norm(v));
      const std::size_t n = vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        Point a = vertices[i], b = vertices[(i + 1) % n], c = vertices[(i + 2) % n];
        require(norm(b - a) > 1e-12 * std::max(scale, 1.0), ErrorCode::non_convex_polygon, "repeated vertex");
        require(cross(b - a, c - b) > 1e-12 * std::max(scale * scale, 1.0), ErrorCode::non_convex_polygon,
                "vertex " + std::to_string((i + 1) % n) + " is reflex or collinear");
      }
      // A convex turn at every vertex with total turning 2*pi rules out self-intersection.
      double turning = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        Point e0 = vertices[(i + 1) % n] - vertices[i], e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        turning += std::atan2(cross(e0, e1), dot(e0, e1));
      }
      require(std::abs(turning - 2.0 * M_PI) < 1e-6, ErrorCode::non_convex_polygon, "polygon winds more than once");
      break;
    }
  }
}

bool DomainSpec::strongly_convex() const { return kind == DomainKind::disk || kind == DomainKind::ellipse; }

Box DomainSpec::bounding_box() const {
  switch (kind) {
    case DomainKind::unit_square: return {{0, 0}, {1, 1}};
    case DomainKind::rectangle: return {{0, 0}, {width, height}};
    case DomainKind::disk: return {{-radius, -radius}, {radius, radius}};
    case DomainKind::ellipse: return {{-semi_x, -semi_y}, {semi_x, semi_y}};
    case DomainKind::convex_polygon: {
      Box b{vertices.front(), vertices.front()};
      for (auto v : vertices) {
        b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
        b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
      }
      return b;
    }
  }
  return {};
}

namespace {

// Chebyshev centre of a convex polygon: every triple of edge lines is tried.
std::pair<Point, double> polygon_chebyshev(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  std::vector<Point> nrm(n);
  std::vector<double> off(n);
  for (std::size_t i = 0; i < n; ++i) {
    nrm[i] = inward_edge_normal(v[i], v[(i + 1) % n]);
    off[i] = dot(nrm[i], v[i]);
  }
  Point best{};
  double best_r = -1.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        // n_i . x - r = off_i for i in {a, b, c}
        double m[3][4] = {{nrm[a].x, nrm[a].y, -1.0, off[a]},
                          {nrm[b].x, nrm[b].y, -1.0, off[b]},
                          {nrm[c].x, nrm[c].y, -1.0, off[c]}};
        auto det3 = [](double p[3][3]) {
          return p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
                 p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
                 p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
        };
        double base[3][3], sol[3];
        for (int r = 0; r < 3; ++r)
          for (int s = 0; s < 3; ++s) base[r][s] = m[r][s];
        double det = det3(base);
        if (std::abs(det) < 1e-14) continue;
        for (int col = 0; col < 3; ++col) {
          double rep[3][3];
          for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) rep[r][s] = (s == col) ? m[r][3] : m[r][s];
          sol[col] = det3(rep) / det;
        }
        Point x{sol[0], sol[1]};
        double r = sol[2];
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) dmin = std::min(dmin, dot(nrm[i], x) - off[i]);
        if (dmin >= r - 1e-12 && r > best_r) {
          best_r = r;
          best = x;
        }
      }
  return {best, best_r};
}

}  // namespace

double DomainSpec::inradius() const {
  switch (kind) {
    case DomainKind::unit_square: return 0.5;
    case DomainKind::rectangle: return 0.5 * std::min(width, height);
    case DomainKind::disk: return radius;
    case DomainKind::ellipse: return std::min(semi_x, semi_y);
    case DomainKind::convex_polygon: return polygon_chebyshev(vertices).second;
  }
  return 0.0;
}

Point DomainSpec::center() const {
  switch (kind) {
    case DomainKind::unit_square: return {0.5, 0.5};
    case DomainKind::rectangle: return {0.5 * width, 0.5 * height};
    case DomainKind::disk:
    case DomainKind::ellipse: return {0.0, 0.0};
    case DomainKind::convex_polygon: return polygon_chebyshev(vertices).first;
  }
  return {};
}

double DomainSpec::diameter() const {
  switch (kind) {
    case DomainKind::unit_square: return std::sqrt(2.0);
    case DomainKind::rectangle: return std::hypot(width, height);
    case DomainKind::disk: return 2.0 * radius;
    case DomainKind::ellipse: return 2.0 * std::max(semi_x, semi_y);
    case DomainKind::convex_polygon: {
      double d = 0.0;
      for (auto a : vertices)
        for (auto b : vertices) d = std::max(d, norm(a - b));
      return d;
    }
  }
  return 0.0;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case DomainKind::unit_square: break;
    case DomainKind::rectangle: os << "(" << width << "x" << height << ")"; break;
    case DomainKind::disk: os << "(R=" << radius << ")"; break;
    case DomainKind::ellipse: os << "(" << semi_x << "," << semi_y << ")"; break;
    case DomainKind::convex_polygon: os << "(" << vertices.size() << " vertices)"; break;
  }
  return os.str();
}

double distance_to_boundary(const DomainSpec& d, Point x) {
  switch (d.kind) {
    case DomainKind::unit_square: return std::min({x.x, 1.0 - x.x, x.y, 1.0 - x.y});
    case DomainKind::rectangle: return std::min({x.x, d.width - x.x, x.y, d.height - x.y});
    case DomainKind::disk: return d.radius - norm(x);
    case DomainKind::ellipse: {
      double ax = std::abs(x.x), ay = std::abs(x.y);
      double dist = d.semi_x >= d.semi_y ? ellipse_distance_quadrant(d.semi_x, d.semi_y, ax, ay)
                                         : ellipse_distance_quadrant(d.semi_y, d.semi_x, ay, ax);
      return ellipse_level(d.semi_x, d.semi_y, x) >= 0.0 ? dist : -dist;
    }
    case DomainKind::convex_polygon: {
      double dmin = std::numeric_limits<double>::infinity();
      const std::size_t n = d.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        Point a = d.vertices[i], b = d.vertices[(i + 1) % n];
        dmin = std::min(dmin, dot(inward_edge_normal(a, b), x - a));
      }
      return dmin;
    }
  }
  return 0.0;
}

Point boundary_normal(const DomainSpec& d, Point p) {
  double scale = std::max(1.0, d.diameter());
  require(std::abs(distance_to_boundary(d, p)) <= kBoundaryTol * scale, ErrorCode::not_on_boundary,
          "point is not on the boundary");
  auto box_normal = [&](double w, double h) -> Point {
    std::vector<Point> hits;
    if (std::abs(p.x) <= kBoundaryTol * scale) hits.push_back({1, 0});
    if (std::abs(w - p.x) <= kBoundaryTol * scale) hits.push_back({-1, 0});
    if (std::abs(p.y) <= kBoundaryTol * scale) hits.push_back({0, 1});
    if (std::abs(h - p.y) <= kBoundaryTol * scale) hits.push_back({0, -1});
    require(hits.size() == 1, ErrorCode::vertex_ambiguity, "normal undefined at a corner");
    return hits.front();
  };
  switch (d.kind) {
    case DomainKind::unit_square: return box_normal(1.0, 1.0);
    case DomainKind::rectangle: return box_normal(d.width, d.height);
    case DomainKind::disk: {
      double r = norm(p);
      return {-p.x / r, -p.y / r};
    }
    case DomainKind::ellipse: {
      Point g{p.x / (d.semi_x * d.semi_x), p.y / (d.semi_y * d.semi_y)};
      double r = norm(g);
      return {-g.x / r, -g.y / r};
    }
    case DomainKind::convex_polygon: {
      for (auto v : d.vertices)
        require(norm(p - v) > kBoundaryTol * scale, ErrorCode::vertex_ambiguity, "normal undefined at a vertex");
      const std::size_t n = d.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        Point a = d.vertices[i], b = d.vertices[(i + 1) % n];
        Point nrm = inward_edge_normal(a, b);
        if (std::abs(dot(nrm, p - a)) <= kBoundaryTol * scale) return nrm;
      }
      fail(ErrorCode::not_on_boundary, "no edge contains the point");
    }
  }
  return {};
}

DiscretizedDomain::DiscretizedDomain(DomainSpec spec, double h) : spec_(std::move(spec)), h_(h) {
  spec_.validate();
  require(std::isfinite(h) && h > 0.0, ErrorCode::invalid_argument, "grid spacing must be positive");
  const double inr = spec_.inradius();
  require(h < inr, ErrorCode::no_interior_nodes, "grid spacing is not below the inradius");
  Box box = spec_.bounding_box();
  origin_ = box.lo;
  nx_ = static_cast<int>(std::ceil((box.hi.x - box.lo.x) / h - 1e-9)) + 1;
  ny_ = static_cast<int>(std::ceil((box.hi.y - box.lo.y) / h - 1e-9)) + 1;
  const std::size_t total = static_cast<std::size_t>(nx_) * ny_;
  cls_.assign(total, NodeClass::exterior);
  dist_.assign(total, 0.0);
  index_.assign(total, -1);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      double dd = distance_to_boundary(spec_, node(i, j));
      dist_[grid_index(i, j)] = dd;
      if (dd > kSnapFraction * h) {
        cls_[grid_index(i, j)] = NodeClass::interior;
        index_[grid_index(i, j)] = static_cast<int>(interior_.size());
        interior_.push_back({i, j});
      }
    }
  require(!interior_.empty(), ErrorCode::no_interior_nodes, "grid has no interior nodes");

  static constexpr int di[4] = {1, -1, 0, 0};
  static constexpr int dj[4] = {0, 0, 1, -1};
  nbr_.resize(interior_.size());
  theta_.resize(interior_.size());
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    auto [i, j] = interior_[k];
    Point p = node(i, j);
    for (int a = 0; a < 4; ++a) {
      int ni = i + di[a], nj = j + dj[a];
      int q = interior_index(ni, nj);
      nbr_[k][a] = q;
      if (q >= 0) {
        theta_[k][a] = 1.0;
        continue;
      }
      if (ni >= 0 && ni < nx_ && nj >= 0 && nj < ny_) {
        if (cls_[grid_index(ni, nj)] == NodeClass::exterior) cls_[grid_index(ni, nj)] = NodeClass::boundary_band;
        if (dist_[grid_index(ni, nj)] > 0.0) {
          theta_[k][a] = 1.0;
          continue;
        }
      }
      Point e{static_cast<double>(di[a]), static_cast<double>(dj[a])};
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sign_level(spec_, p + (mid * h) * e) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      theta_[k][a] = std::clamp(0.5 * (lo + hi), 1e-12, 1.0);
    }
  }
}

int DiscretizedDomain::interior_index(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
  return index_[grid_index(i, j)];
}

Point DiscretizedDomain::interior_point(std::size_t k) const { return node(interior_[k][0], interior_[k][1]); }

double DiscretizedDomain::interior_distance(std::size_t k) const {
  return dist_[grid_index(interior_[k][0], interior_[k][1])];
}

bool DiscretizedDomain::boundary_adjacent(std::size_t k) const {
  return std::any_of(nbr_[k].begin(), nbr_[k].end(), [](int q) { return q < 0; });
}

std::vector<bool> DiscretizedDomain::inner_region_mask(double rho) const {
  require(rho >= 0.0, ErrorCode::invalid_argument, "rho must be nonnegative");
  std::vector<bool> mask(interior_.size());
  for (std::size_t k = 0; k < interior_.size(); ++k) mask[k] = interior_distance(k) > rho;
  return mask;
}

DomainPtr build_discretization(const DomainSpec& spec, double h) {
  return std::make_shared<const DiscretizedDomain>(spec, h);
}

}  // namespace cvlab
