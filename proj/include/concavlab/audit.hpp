#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "concavlab/operators.hpp"
#include "concavlab/parabolic.hpp"

namespace cvlab {

/// (x1, x3, t1, t3, lambda); infinite times select the stationary slice.
struct Tuple {
  Point x1;
  Point x3;
  double t1 = 0.0;
  double t3 = 0.0;
  double lambda = 0.5;
};

/// C = u2 - lambda u3 - (1 - lambda) u1.
inline double concavity_value(double u1, double u2, double u3, double lambda) {
  return u2 - lambda * u3 - (1.0 - lambda) * u1;
}

/// Harmonic concavity g2 - g1 g3 / (lambda g1 + (1 - lambda) g3); empty outside its domain.
std::optional<double> harmonic_concavity_value(double g1, double g2, double g3, double lambda);

double concavity_value(const std::function<double(Point, double)>& u, const Tuple& tp);
double concavity_value(const std::function<double(Point)>& u, Point x1, Point x3, double lambda);
std::optional<double> harmonic_concavity_value(const std::function<double(Point, double)>& g, const Tuple& tp);

enum class Transform { power, log };

struct TransformSpec {
  Transform kind = Transform::power;
  double alpha = 1.0;
  double beta = 1.0;
};

/// v(x, t) = phi(u(x, t^beta)) with phi = s^alpha or log s. Fields are
/// interpolated bilinearly in space and linearly in physical time before
/// the transform is applied.
class AuditField {
 public:
  AuditField(const Trajectory& traj, const Field* stationary, TransformSpec spec);
  AuditField(const Field& field, TransformSpec spec);

  DomainPtr domain() const { return dom_; }
  const TransformSpec& transform() const { return spec_; }
  std::size_t slice_count() const { return slices_.size(); }
  bool has_infinity() const { return has_inf_; }
  /// Monotone flag of the source trajectory; infinity tuples are skipped when false.
  bool monotone() const { return monotone_; }
  /// Audit time of a finite slice.
  double slice_time(std::size_t i) const { return slices_[i].t; }
  double physical_time(std::size_t i) const { return slices_[i].s; }

  double phi(double u) const;
  double dphi(double u) const;
  /// Value at an interior node on a slice; slice == slice_count() selects infinity.
  double node_value(std::size_t k, std::size_t slice) const;
  double raw_node(std::size_t k, std::size_t slice) const { return slice >= slices_.size() ? inf_.r[k] : slices_[slice].r[k]; }
  double value(Point x, double t) const;
  double raw(Point x, double t) const;
  Point gradient(Point x, double t) const;
  double inf_time_slice() const { return static_cast<double>(slices_.size()); }

 private:
  struct Slice {
    double t = 0.0;
    double s = 0.0;
    GridSampler u;
    std::vector<double> r;  // raw node values
    std::vector<double> v;
  };
  std::size_t bracket(double t) const;
  void add_slice(const Field& f, double t, double s, std::vector<Slice>& into);

  DomainPtr dom_;
  TransformSpec spec_;
  std::vector<Slice> slices_;
  Slice inf_;
  bool has_inf_ = false;
  bool monotone_ = true;
};

enum class AuditMode { space, spacetime, harmonic };
std::string_view to_string(AuditMode m);

struct SamplerConfig {
  std::size_t max_nodes = 256;
  int lambda_divisions = 16;
  std::size_t max_times = 12;
  int refine_candidates = 32;
  double margin = -1.0;            // audit region d > margin; negative means one grid step
  double curvature_margin = -1.0;  // region for the curvature scale; negative means a quarter inradius
  bool use_infinity = true;
  double c_tol = 10.0;
};

struct DefectReport {
  AuditMode mode = AuditMode::space;
  double min = 0.0;
  Tuple argmin;
  std::array<Point, 3> gradients{};
  double gradient_mismatch = 0.0;
  double tau_audit = 0.0;
  double curvature_scale = 0.0;
  long samples = 0;
  std::vector<std::pair<double, double>> per_time;  // (audit time, min) in space mode
  bool passes() const { return min >= -tau_audit; }
};

/// Space and harmonic modes hold the time fixed; harmonic mode skips tuples
/// outside the domain of HC.
DefectReport min_defect(const AuditField& field, AuditMode mode, const SamplerConfig& cfg = {});

/// c_tol h^2 K with K the largest spatial second difference of v over h^2,
/// taken over all slices at nodes deeper than the curvature margin.
double audit_tolerance(const AuditField& field, const SamplerConfig& cfg, double* curvature = nullptr);

/// Worst shortfall of segment midpoints below superlevels, 0 when none.
double quasiconcavity_defect(const Field& f, double tau, int levels = 16, std::size_t max_nodes = 400);

}  // namespace cvlab
