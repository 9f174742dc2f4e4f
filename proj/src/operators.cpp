#include "concavlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "concavlab/errors.hpp"

namespace cvlab {

namespace {

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// out = diag(shift) x + tau (-Delta_h) x
void apply_operator(const DiscretizedDomain& dom, std::span<const double> shift, double tau,
                    std::span<const double> x, std::span<double> out) {
  const double inv_h2 = 1.0 / (dom.h() * dom.h());
  const std::size_t n = dom.interior_count();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& nb = dom.neighbours(k);
    const auto& th = dom.arm_fractions(k);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      double v = nb[a] >= 0 ? x[nb[a]] : 0.0;
      acc += (x[k] - v) / th[a];
    }
    out[k] = (shift.empty() ? x[k] : shift[k] * x[k]) + tau * inv_h2 * acc;
  }
}

}  // namespace

Field Field::zeros(DomainPtr domain, double time) {
  Field f{std::move(domain), {}, time};
  f.values.assign(f.domain->interior_count(), 0.0);
  return f;
}

Field Field::sample(DomainPtr domain, const std::function<double(Point)>& fn, double time) {
  Field f = zeros(std::move(domain), time);
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = fn(f.domain->interior_point(k));
  return f;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::min() const { return *std::min_element(values.begin(), values.end()); }

void apply_laplacian(const DiscretizedDomain& dom, std::span<const double> u, std::span<double> out,
                     const std::function<double(Point)>* boundary) {
  const double h = dom.h();
  const std::size_t n = dom.interior_count();
  require(u.size() == n && out.size() == n, ErrorCode::invalid_argument, "field size mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    const auto& nb = dom.neighbours(k);
    const auto& th = dom.arm_fractions(k);
    Point p = dom.interior_point(k);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      double v = 0.0;
      if (nb[a] >= 0)
        v = u[nb[a]];
      else if (boundary)
        v = (*boundary)(p + (th[a] * h) * Point{static_cast<double>(kDi[a]), static_cast<double>(kDj[a])});
      acc += (v - u[k]) / th[a];
    }
    out[k] = acc / (h * h);
  }
}

Field apply_laplacian(const Field& u) {
  Field out = Field::zeros(u.domain, u.time);
  apply_laplacian(*u.domain, u.values, out.values);
  return out;
}

std::vector<double> laplacian_diagonal(const DiscretizedDomain& dom) {
  const double inv_h2 = 1.0 / (dom.h() * dom.h());
  std::vector<double> d(dom.interior_count());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& th = dom.arm_fractions(k);
    d[k] = inv_h2 * (1.0 / th[0] + 1.0 / th[1] + 1.0 / th[2] + 1.0 / th[3]);
  }
  return d;
}

namespace {

SolveStats cg(const DiscretizedDomain& dom, std::span<const double> shift, double tau, std::span<const double> rhs,
              std::span<double> x, const CgOptions& opts) {
  const std::size_t n = dom.interior_count();
  require(rhs.size() == n && x.size() == n, ErrorCode::invalid_argument, "field size mismatch");
  require(shift.empty() || shift.size() == n, ErrorCode::invalid_argument, "shift size mismatch");
  const double bnorm = std::sqrt(dot(rhs, rhs));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {};
  }
  const long max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * static_cast<long>(n);

  std::vector<double> inv_diag(n, 1.0);
  if (opts.jacobi) {
    auto d = laplacian_diagonal(dom);
    for (std::size_t k = 0; k < n; ++k) inv_diag[k] = 1.0 / ((shift.empty() ? 1.0 : shift[k]) + tau * d[k]);
  }
  std::vector<double> r(n), z(n), p(n), ap(n);
  apply_operator(dom, shift, tau, x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
  double rnorm = std::sqrt(dot(r, r));
  const double target = opts.rel_tol * bnorm;
  if (rnorm <= target) return {0, rnorm / bnorm};
  for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
  p = z;
  double rz = dot(r, z);
  for (long it = 1; it <= max_iter; ++it) {
    apply_operator(dom, shift, tau, p, ap);
    double alpha = rz / dot(p, ap);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    rnorm = std::sqrt(dot(r, r));
    if (rnorm <= target) {
      // Confirm with the true residual to guard against drift in the recurrence.
      apply_operator(dom, shift, tau, x, ap);
      for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - ap[k];
      rnorm = std::sqrt(dot(r, r));
      if (rnorm <= target) return {it, rnorm / bnorm};
      // Restart from the true residual.
      for (std::size_t k = 0; k < n; ++k) p[k] = z[k] = inv_diag[k] * r[k];
      rz = dot(r, z);
      continue;
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  fail(ErrorCode::max_iterations, "conjugate gradient stalled at relative residual " + std::to_string(rnorm / bnorm));
}

}  // namespace

SolveStats solve_shifted(const DiscretizedDomain& dom, std::span<const double> shift, double tau,
                         std::span<const double> rhs, std::span<double> x, const CgOptions& opts) {
  double top = 0.0;
  for (double v : rhs) top = std::max(top, std::abs(v));
  if (top == 0.0 || !std::isfinite(top)) return cg(dom, shift, tau, rhs, x, opts);
  const int e = std::ilogb(top);
  if (e > -200 && e < 200) return cg(dom, shift, tau, rhs, x, opts);
  std::vector<double> b(rhs.begin(), rhs.end());
  for (double& v : b) v = std::ldexp(v, -e);
  for (double& v : x) v = std::ldexp(v, -e);
  SolveStats st = cg(dom, shift, tau, b, x, opts);
  for (double& v : x) v = std::ldexp(v, e);
  return st;
}

Field solve_shifted_poisson(double tau, const Field& rhs, const CgOptions& opts) {
  require(tau >= 0.0, ErrorCode::invalid_argument, "tau must be nonnegative");
  Field x = rhs;
  solve_shifted(*rhs.domain, {}, tau, rhs.values, x.values, opts);
  return x;
}

Field solve_poisson(const Field& rhs, const CgOptions& opts) {
  Field x = Field::zeros(rhs.domain, rhs.time);
  std::vector<double> zero(rhs.size(), 0.0);
  solve_shifted(*rhs.domain, zero, 1.0, rhs.values, x.values, opts);
  return x;
}

Eigenpair principal_eigenpair(DomainPtr domain, const EigenOptions& opts) {
  const DiscretizedDomain& dom = *domain;
  const std::size_t n = dom.interior_count();
  std::vector<double> zero(n, 0.0), x(n, 1.0), y(n), ax(n);
  CgOptions cg{1e-12, 0, true};
  double lambda = 0.0, lambda_prev = std::numeric_limits<double>::quiet_NaN();
  Eigenpair out;
  for (int it = 1; it <= opts.max_iter; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    solve_shifted(dom, zero, 1.0, x, y, cg);
    double m = *std::max_element(y.begin(), y.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / m;
    apply_operator(dom, zero, 1.0, x, ax);
    lambda = dot(x, ax) / dot(x, x);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) res = std::max(res, std::abs(ax[k] - lambda * x[k]));
    bool settled = std::abs(lambda - lambda_prev) <= opts.tol * lambda;
    if (settled && res <= 1e-9 * lambda) {
      out.lambda = lambda;
      out.iterations = it;
      out.residual = res;
      out.phi = Field{domain, x, 0.0};
      require(out.phi.min() > 0.0, ErrorCode::no_convergence, "principal eigenvector is not positive");
      return out;
    }
    lambda_prev = lambda;
  }
  fail(ErrorCode::no_convergence, "inverse iteration did not settle");
}

GridSampler::GridSampler(const Field& f) : GridSampler(*f.domain, f.values) {}

GridSampler::GridSampler(const DiscretizedDomain& dom, std::span<const double> values) : dom_(&dom) {
  const std::size_t total = static_cast<std::size_t>(dom.nx()) * dom.ny();
  grid_.assign(total, 0.0);
  std::vector<int> count(total, 0);
  std::vector<double> ghost(total, 0.0);
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    auto [i, j] = dom.interior_node(k);
    grid_[dom.grid_index(i, j)] = values[k];
    const auto& nb = dom.neighbours(k);
    const auto& th = dom.arm_fractions(k);
    for (int a = 0; a < 4; ++a) {
      if (nb[a] >= 0) continue;
      int gi = i + kDi[a], gj = j + kDj[a];
      if (gi < 0 || gj < 0 || gi >= dom.nx() || gj >= dom.ny()) continue;
      ghost[dom.grid_index(gi, gj)] += values[k] * (1.0 - 1.0 / th[a]);
      count[dom.grid_index(gi, gj)] += 1;
    }
  }
  for (std::size_t g = 0; g < total; ++g)
    if (count[g] > 0) grid_[g] = ghost[g] / count[g];
}

double GridSampler::operator()(Point x) const {
  const double h = dom_->h();
  double fx = (x.x - dom_->origin().x) / h, fy = (x.y - dom_->origin().y) / h;
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, dom_->nx() - 2);
  int j = std::clamp(static_cast<int>(std::floor(fy)), 0, dom_->ny() - 2);
  double s = fx - i, t = fy - j;
  const int nx = dom_->nx();
  const double* g = grid_.data() + static_cast<std::size_t>(j) * nx + i;
  return (1 - t) * ((1 - s) * g[0] + s * g[1]) + t * ((1 - s) * g[nx] + s * g[nx + 1]);
}

Point GridSampler::gradient(Point x) const {
  const double h = dom_->h();
  const int nx = dom_->nx(), ny = dom_->ny();
  double fx = (x.x - dom_->origin().x) / h, fy = (x.y - dom_->origin().y) / h;
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
  double s = fx - i, t = fy - j;
  auto at = [&](int a, int b) { return grid_[static_cast<std::size_t>(b) * nx + a]; };
  // Central differences at the four corners, one-sided at the grid edge.
  auto nodal = [&](int a, int b) {
    int a0 = std::max(a - 1, 0), a1 = std::min(a + 1, nx - 1);
    int b0 = std::max(b - 1, 0), b1 = std::min(b + 1, ny - 1);
    return Point{(at(a1, b) - at(a0, b)) / ((a1 - a0) * h), (at(a, b1) - at(a, b0)) / ((b1 - b0) * h)};
  };
  Point g00 = nodal(i, j), g10 = nodal(i + 1, j), g01 = nodal(i, j + 1), g11 = nodal(i + 1, j + 1);
  return (1 - t) * ((1 - s) * g00 + s * g10) + t * ((1 - s) * g01 + s * g11);
}

}  // namespace cvlab
