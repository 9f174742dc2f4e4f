#include "concavlab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "concavlab/audit.hpp"
#include "concavlab/errors.hpp"

namespace cvlab {

double hyers_ulam_constant(int n) {
  require(n >= 1, ErrorCode::invalid_argument, "dimension must be at least 1");
  return n * (n + 3.0) / (4.0 * (n + 1.0));
}

namespace {

HyersUlamCertificate certify(int n, double delta, double distance) {
  HyersUlamCertificate c;
  c.n = n;
  c.delta = delta;
  c.k_n = hyers_ulam_constant(n);
  c.distance = distance;
  c.holds = distance <= c.k_n * delta + 1e-12;
  return c;
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

}  // namespace

Envelope1D concave_approximation(const std::vector<double>& x, const std::vector<double>& f) {
  require(x.size() == f.size(), ErrorCode::invalid_argument, "sample sizes differ");
  require(x.size() >= 2, ErrorCode::hull_degenerate, "need at least two samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    require(x[i] > x[i - 1], ErrorCode::invalid_argument, "abscissae must increase strictly");
  const std::size_t n = x.size();
  Envelope1D env;
  env.x = x;
  env.f = f;
  // Upper chain of the monotone-chain hull.
  for (std::size_t i = 0; i < n; ++i) {
    while (env.hull.size() >= 2) {
      int a = env.hull[env.hull.size() - 2], b = env.hull.back();
      if (cross(x[b] - x[a], f[b] - f[a], x[i] - x[a], f[i] - f[a]) >= 0) env.hull.pop_back();
      else break;
    }
    env.hull.push_back(static_cast<int>(i));
  }
  env.majorant.resize(n);
  double gap = 0.0;
  for (std::size_t s = 0; s + 1 < env.hull.size(); ++s) {
    int a = env.hull[s], b = env.hull[s + 1];
    for (int i = a; i <= b; ++i) {
      double mu = (x[i] - x[a]) / (x[b] - x[a]);
      env.majorant[i] = (1 - mu) * f[a] + mu * f[b];
      gap = std::max(gap, env.majorant[i] - f[i]);
    }
  }
  const double shift = 0.5 * gap;
  env.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) env.g[i] = env.majorant[i] - shift;

  // Largest on-sample defect, which includes the hull-segment witness of the gap.
  double delta = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 2; b < n; ++b)
      for (std::size_t i = a + 1; i < b; ++i) {
        double mu = (x[i] - x[a]) / (x[b] - x[a]);
        delta = std::max(delta, -concavity_value(f[a], f[i], f[b], mu));
      }
  env.certificate = certify(1, delta, shift);
  return env;
}

double Envelope1D::operator()(double xq) const {
  require(xq >= x.front() - 1e-12 && xq <= x.back() + 1e-12, ErrorCode::out_of_domain, "point outside the section");
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  std::size_t i = it == x.begin() ? 0 : std::min<std::size_t>(it - x.begin() - 1, x.size() - 2);
  double mu = (xq - x[i]) / (x[i + 1] - x[i]);
  return (1 - mu) * g[i] + mu * g[i + 1];
}

namespace {

struct P3 {
  double x, y, z;
};

P3 sub(const P3& a, const P3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
P3 cross3(const P3& a, const P3& b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
double dot3(const P3& a, const P3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

struct Face {
  std::array<int, 3> v;
  P3 n;
  double off;
  bool alive = true;
};

/// Incremental hull with points inserted in lexicographic order.
class Hull3 {
 public:
  Hull3(const std::vector<P3>& pts, double eps) : p_(pts), eps_(eps) {}

  std::vector<Face> build() {
    std::vector<int> order(p_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::tie(p_[a].x, p_[a].y, p_[a].z) < std::tie(p_[b].x, p_[b].y, p_[b].z);
    });
    std::array<int, 4> s = simplex(order);
    add_face(s[0], s[1], s[2], s[3]);
    add_face(s[0], s[1], s[3], s[2]);
    add_face(s[0], s[2], s[3], s[1]);
    add_face(s[1], s[2], s[3], s[0]);
    for (int idx : order) {
      if (idx == s[0] || idx == s[1] || idx == s[2] || idx == s[3]) continue;
      insert(idx);
    }
    std::vector<Face> out;
    for (auto& f : faces_)
      if (f.alive) out.push_back(f);
    return out;
  }

 private:
  std::array<int, 4> simplex(const std::vector<int>& order) {
    int a = order.front(), b = -1, c = -1, d = -1;
    double best = 0.0;
    for (int i : order) {
      P3 v = sub(p_[i], p_[a]);
      double l = dot3(v, v);
      if (l > best + eps_) best = l, b = i;
    }
    require(b >= 0, ErrorCode::hull_degenerate, "all points coincide");
    best = 0.0;
    for (int i : order) {
      P3 w = cross3(sub(p_[b], p_[a]), sub(p_[i], p_[a]));
      double l = dot3(w, w);
      if (l > best + eps_) best = l, c = i;
    }
    require(c >= 0, ErrorCode::hull_degenerate, "points are collinear");
    P3 n = cross3(sub(p_[b], p_[a]), sub(p_[c], p_[a]));
    best = 0.0;
    for (int i : order) {
      double l = std::abs(dot3(n, sub(p_[i], p_[a])));
      if (l > best + eps_) best = l, d = i;
    }
    require(d >= 0, ErrorCode::hull_degenerate, "points are coplanar");
    return {a, b, c, d};
  }

  void add_face(int a, int b, int c, int inside) {
    P3 n = cross3(sub(p_[b], p_[a]), sub(p_[c], p_[a]));
    if (dot3(n, sub(p_[inside], p_[a])) > 0) {
      std::swap(b, c);
      n = {-n.x, -n.y, -n.z};
    }
    push(a, b, c, n);
  }

  void push(int a, int b, int c, P3 n) {
    double len = std::sqrt(dot3(n, n));
    n = {n.x / len, n.y / len, n.z / len};
    Face f{{a, b, c}, n, dot3(n, p_[a])};
    int id = static_cast<int>(faces_.size());
    faces_.push_back(f);
    edges_[{a, b}] = id;
    edges_[{b, c}] = id;
    edges_[{c, a}] = id;
  }

  bool visible(const Face& f, int i) const { return dot3(f.n, p_[i]) - f.off > eps_; }

  void insert(int i) {
    std::vector<int> vis;
    for (std::size_t k = 0; k < faces_.size(); ++k)
      if (faces_[k].alive && visible(faces_[k], i)) vis.push_back(static_cast<int>(k));
    if (vis.empty()) return;
    std::vector<std::pair<int, int>> horizon;
    for (int k : vis) {
      const auto& v = faces_[k].v;
      for (int e = 0; e < 3; ++e) {
        int a = v[e], b = v[(e + 1) % 3];
        auto it = edges_.find({b, a});
        if (it == edges_.end() || !visible(faces_[it->second], i)) horizon.push_back({a, b});
      }
    }
    for (int k : vis) {
      faces_[k].alive = false;
      const auto& v = faces_[k].v;
      for (int e = 0; e < 3; ++e) {
        auto it = edges_.find({v[e], v[(e + 1) % 3]});
        if (it != edges_.end() && it->second == k) edges_.erase(it);
      }
    }
    for (auto [a, b] : horizon) push(a, b, i, cross3(sub(p_[b], p_[a]), sub(p_[i], p_[a])));
  }

  const std::vector<P3>& p_;
  double eps_;
  std::vector<Face> faces_;
  std::map<std::pair<int, int>, int> edges_;
};

}  // namespace

double Envelope2D::operator()(Point p) const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& f : faces) v = std::min(v, f(p));
  return v - shift;
}

Envelope2D concave_approximation(const Field& f) {
  const DiscretizedDomain& dom = *f.domain;
  const std::size_t n = f.size();
  require(n >= 3, ErrorCode::hull_degenerate, "need at least three affinely independent nodes");
  std::vector<Point> xy(n);
  for (std::size_t k = 0; k < n; ++k) xy[k] = dom.interior_point(k);

  // Floor points under the planar hull vertices keep the lifted set full-dimensional.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return std::tie(xy[a].x, xy[a].y) < std::tie(xy[b].x, xy[b].y); });
  std::vector<int> ring;
  for (int pass = 0; pass < 2; ++pass) {
    std::size_t base = ring.size();
    for (int i : idx) {
      while (ring.size() >= base + 2) {
        const Point& a = xy[ring[ring.size() - 2]];
        const Point& b = xy[ring.back()];
        if (cross(b.x - a.x, b.y - a.y, xy[i].x - a.x, xy[i].y - a.y) <= 0) ring.pop_back();
        else break;
      }
      ring.push_back(i);
    }
    ring.pop_back();
    std::reverse(idx.begin(), idx.end());
  }
  require(ring.size() >= 3, ErrorCode::hull_degenerate, "nodes are collinear");

  const double fmin = f.min(), fmax = f.max();
  const double zscale = std::max(1.0, fmax - fmin);
  std::vector<P3> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = {xy[k].x, xy[k].y, f.values[k] / zscale};
  for (int r : ring) pts.push_back({xy[r].x, xy[r].y, (fmin - zscale) / zscale});
  double ext = dom.spec().diameter();
  Hull3 hull(pts, 1e-12 * std::max(1.0, ext * ext));
  std::vector<Face> faces = hull.build();

  Envelope2D env;
  for (const auto& fc : faces) {
    if (fc.n.z <= 1e-12) continue;
    bool floor = false;
    for (int v : fc.v) floor = floor || v >= static_cast<int>(n);
    if (floor) continue;
    Plane pl;
    pl.a = -fc.n.x / fc.n.z * zscale;
    pl.b = -fc.n.y / fc.n.z * zscale;
    pl.c = fc.off / fc.n.z * zscale;
    pl.vertices = fc.v;
    env.faces.push_back(pl);
  }
  require(!env.faces.empty(), ErrorCode::hull_degenerate, "no upper faces");

  env.majorant = Field::zeros(f.domain, f.time);
  double gap = 0.0;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& pl : env.faces) m = std::min(m, pl(xy[k]));
    m = std::max(m, f.values[k]);
    env.majorant.values[k] = m;
    if (m - f.values[k] > gap) gap = m - f.values[k], worst = k;
  }
  env.shift = 0.5 * gap;
  env.g = env.majorant;
  for (double& v : env.g.values) v -= env.shift;

  // Defect of f: audit scan plus the witness tuples of the face below the largest gap.
  GridSampler fs(f);
  double delta = 0.0;
  if (gap > 0.0) {
    const Point xs = xy[worst];
    const Plane* face = &env.faces.front();
    for (const auto& pl : env.faces)
      if (pl(xs) < (*face)(xs)) face = &pl;
    Point v[3] = {xy[face->vertices[0]], xy[face->vertices[1]], xy[face->vertices[2]]};
    double det = cross(v[1].x - v[0].x, v[1].y - v[0].y, v[2].x - v[0].x, v[2].y - v[0].y);
    double mu1 = cross(v[1].x - xs.x, v[1].y - xs.y, v[2].x - xs.x, v[2].y - xs.y) / det;
    double mu2 = cross(v[2].x - xs.x, v[2].y - xs.y, v[0].x - xs.x, v[0].y - xs.y) / det;
    std::array<double, 3> mu = {mu1, mu2, 1.0 - mu1 - mu2};
    std::array<int, 3> ord = {0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return mu[a] > mu[b]; });
    const Point p1 = v[ord[0]], p2 = v[ord[1]], p3 = v[ord[2]];
    const double m1 = mu[ord[0]], m2 = mu[ord[1]], m3 = mu[ord[2]];
    auto fval = [&](Point p) { return fs(p); };
    if (m1 >= 1.0 - 1e-14) {
      delta = std::max(delta, gap);
    } else {
      Point q = (1.0 / (m2 + m3)) * (m2 * p2 + m3 * p3);
      delta = std::max(delta, -concavity_value(fval, q, p1, m1));
      if (m3 > 1e-14) delta = std::max(delta, -concavity_value(fval, p2, p3, m3 / (m2 + m3)));
    }
  }
  SamplerConfig cfg;
  cfg.margin = 0.0;
  AuditField af(f, {Transform::power, 1.0, 1.0});
  delta = std::max(delta, -min_defect(af, AuditMode::space, cfg).min);
  env.certificate = certify(2, delta, env.shift);
  return env;
}

}  // namespace cvlab
