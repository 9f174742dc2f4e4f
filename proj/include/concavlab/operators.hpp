#pragma once

#include <functional>
#include <span>
#include <vector>

#include "concavlab/domain.hpp"

namespace cvlab {

/// Values at the interior nodes of a discretization. Boundary values are 0.
struct Field {
  DomainPtr domain;
  std::vector<double> values;
  double time = 0.0;

  static Field zeros(DomainPtr domain, double time = 0.0);
  static Field sample(DomainPtr domain, const std::function<double(Point)>& f, double time = 0.0);
  std::size_t size() const { return values.size(); }
  double max_abs() const;
  double max() const;
  double min() const;
};

/// Symmetric cut-cell five-point Laplacian with Dirichlet data on the boundary.
/// Arms cut by the boundary use their true length; rows are scaled by 1/h.
void apply_laplacian(const DiscretizedDomain& dom, std::span<const double> u, std::span<double> out,
                     const std::function<double(Point)>* boundary = nullptr);
Field apply_laplacian(const Field& u);

/// Diagonal of -Delta_h.
std::vector<double> laplacian_diagonal(const DiscretizedDomain& dom);

struct CgOptions {
  double rel_tol = 1e-10;
  long max_iter = 0;  // 0 means 10 * unknowns
  bool jacobi = true;
};

struct SolveStats {
  long iterations = 0;
  double residual = 0.0;  // final relative residual in the 2-norm
};

/// Solves (diag(shift) + tau (-Delta_h)) x = rhs with x as the initial guess.
/// An empty shift means the identity. Throws MaxIterations.
SolveStats solve_shifted(const DiscretizedDomain& dom, std::span<const double> shift, double tau,
                         std::span<const double> rhs, std::span<double> x, const CgOptions& opts = {});

/// (I + tau (-Delta_h)) u = rhs.
Field solve_shifted_poisson(double tau, const Field& rhs, const CgOptions& opts = {});
/// -Delta_h u = rhs.
Field solve_poisson(const Field& rhs, const CgOptions& opts = {});

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 500;
};

struct Eigenpair {
  double lambda = 0.0;
  Field phi;  // positive, sup-normalised
  int iterations = 0;
  double residual = 0.0;  // ||(-Delta_h) phi - lambda phi||_inf
};

/// Inverse power iteration for the smallest eigenvalue of -Delta_h.
Eigenpair principal_eigenpair(DomainPtr domain, const EigenOptions& opts = {});

/// Bilinear interpolation over the full grid, with ghost values at
/// non-interior nodes extrapolated linearly through the boundary.
class GridSampler {
 public:
  GridSampler() = default;
  explicit GridSampler(const Field& f);
  GridSampler(const DiscretizedDomain& dom, std::span<const double> values);

  double operator()(Point x) const;
  Point gradient(Point x) const;
  const std::vector<double>& grid() const { return grid_; }

 private:
  const DiscretizedDomain* dom_ = nullptr;
  std::vector<double> grid_;
};

}  // namespace cvlab
