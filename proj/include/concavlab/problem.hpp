#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "concavlab/domain.hpp"

namespace cvlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class WeightKind { constant, separable_power_time, distance_power, ramp_bump, smoothed_bang_bang };

std::string_view to_string(WeightKind kind);
WeightKind weight_kind_from_string(std::string_view name);

/// a(x, t) = spatial(x) * time_factor(t).
struct Weight {
  WeightKind kind = WeightKind::constant;
  double value = 1.0;    // constant level, scale of the ramp bump, coefficient otherwise
  double gamma = 0.0;    // time exponent
  double omega = 0.0;    // distance exponent
  double epsilon = 0.0;  // bump amplitude
  double bump_width = 0.0;   // Gaussian width; 0 picks a quarter of the inradius
  double a1 = 1.0;           // bang-bang level inside the region
  double a2 = 1.0;           // bang-bang level outside is -a2
  double region_radius = 0.0;  // 0 picks half the inradius
  double eta = 0.0;            // mollification width
  double theta = kInf;         // claimed concavity exponent of the spatial part

  double spatial(const DomainSpec& domain, Point x) const;
  double time_factor(double t) const;
  double operator()(const DomainSpec& domain, Point x, double t) const { return spatial(domain, x) * time_factor(t); }
  bool time_dependent() const { return gamma != 0.0 && (kind == WeightKind::separable_power_time || kind == WeightKind::distance_power); }
};

enum class SourceKind { one, power_q, identity, log_s, log1p_q, saturable_q, saturable, logistic, one_minus_s_p, power_sum };

std::string_view to_string(SourceKind kind);
SourceKind source_kind_from_string(std::string_view name);

struct Source {
  SourceKind kind = SourceKind::one;
  double q = 0.0;
  double p = 0.0;

  /// f(s) for the kinds of the form a(x, t) f(s); composite kinds are handled in eval_source.
  double f(double s) const;
  /// d/ds f(s) for s > 0.
  double df(double s) const;
  /// True when b is independent of s.
  bool s_independent() const { return kind == SourceKind::one || (kind == SourceKind::power_q && q == 0.0); }
  /// True when b(x, s, t) / s is a function of the form a(x, t) fbar(s).
  bool logarithmic_type() const;
};

enum class InitialKind { zero, subsolution_seed, samples, principal_eigenfunction };

struct InitialData {
  InitialKind kind = InitialKind::zero;
  double amplitude = 1.0;
  std::vector<double> samples;  // interior-node values for InitialKind::samples
};

struct Problem {
  DomainSpec domain;
  Weight weight;
  Source source;
  double truncation = kInf;  // b is frozen at t = truncation when finite
  InitialData u0;
  std::string label;

  void validate() const;
  /// Time at which b is evaluated for a physical time t (infinity maps to the truncation time).
  double effective_time(double t) const;
};

/// b(x, s, t). Values of s in [-1e-12, 0) are clipped to 0; below that NegativeState.
double eval_source(const Problem& problem, Point x, double s, double t);
/// d/ds b(x, s, t) for s > 0.
double eval_source_ds(const Problem& problem, Point x, double s, double t);

/// Power with the conventions 0^0 = 1 and 0^q = 0 for q > 0.
double spow(double s, double q);

enum class Tri { yes, no, undetermined };
std::string_view to_string(Tri t);

struct HypothesisFlag {
  Tri value = Tri::undetermined;
  std::string basis;  // "catalog", "numeric" or a reason
  long violations = 0;
};

struct HypothesisReport {
  HypothesisFlag h1, h1_star, h1_prime, h2, h2_star, h3;
  double M = 1.0;
  double T = 1.0;
  double k = 0.0;
  double q = 0.0;
  double gamma = 0.0;
  double omega = 0.0;
  double L = 0.0;
  double holder = 1.0;
  double weight_inf = 0.0;
  double weight_sup = 0.0;
  double weight_osc = 0.0;
  double theta = kInf;
  double theta_defect = 0.0;  // sup of the negative part of the concavity function of a^theta
  std::vector<std::string> notes;
};

HypothesisReport check_hypotheses(const Problem& problem, double M, double T);

/// Lambda = sup_{s>0} s fbar'(s) with fbar = f / s. Throws Unbounded.
double sup_slope_lambda(const Source& source);

/// Points spread over the closed domain, used for sampling-based checks.
std::vector<Point> domain_samples(const DomainSpec& domain, int per_axis);

}  // namespace cvlab
