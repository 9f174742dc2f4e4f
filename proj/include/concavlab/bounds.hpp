#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "concavlab/operators.hpp"
#include "concavlab/problem.hpp"

namespace cvlab {

enum class AlphaVariant { lane_emden, constant_weight, torsion };
std::string_view to_string(AlphaVariant v);

/// Closed-form concavity exponent; theta = kInf takes the limit. Throws RangeViolation.
double alpha_exponent(double q, double gamma, double beta, double theta, AlphaVariant variant);

/// Upper end of the admissible exponent window for spacetime audits.
double admissible_alpha_bound(double q, double gamma, double beta);

enum class LogVariant { general, eigen, product_theta, product_osc };

/// -T e^{1 + Lambda T} times the defect term. For the product variants the term is
/// fbar_sup * defect^(1/theta) or fbar_sup * osc(a), with `defect` holding osc(a)
/// in the latter case.
double log_concavity_rhs(double T, double Lambda, double defect, LogVariant variant, double fbar_sup = 1.0,
                         double theta = 1.0);

struct BoundParams {
  double q = 0.0;
  double gamma = 0.0;
  double beta = 1.0;
  double theta = kInf;
  double p = 0.0;
  double omega = 0.0;
  double m = 0.0;  // inf a
  double M = 0.0;  // sup a
  double rho = 0.0;
  double T = 0.0;
  double Lambda = 0.0;
  double sup_norm_u_inf = 0.0;
  double osc_a = 0.0;
  double osc_a2 = 0.0;
  double sup_neg_theta_defect = 0.0;  // sup of (C_{a^theta})^-
  double inf_concavity_a = 0.0;       // inf of C_a over the inner region
  double a_inf_rho = 0.0;             // inf and sup of a over the inner region
  double a_sup_rho = 0.0;
  Point xi;                           // averaged argmin gradient
  double xi_mismatch = 0.0;
  double v1 = 0.0, v3 = 0.0, lambda = 0.0;  // transformed values at the argmin, for sigma
  double k = 0.0;
  bool h1_certified = false;
};

struct BoundReport {
  std::string theorem;
  double rhs = 0.0;
  std::map<std::string, double> constants;
  std::vector<std::pair<std::string, bool>> validity;
  bool experimental = false;
};

enum class QuantMode { oscillation, rough, theta, elliptic_theta, directional };
std::string_view to_string(QuantMode m);
QuantMode quant_mode_from_string(std::string_view s);

/// Throws ValidityViolation when a gate fails, unless allow_outside_gate is set,
/// in which case the report is flagged experimental.
BoundReport quantitative_rhs(const BoundParams& params, QuantMode mode, bool allow_outside_gate = false);

enum class BoundaryKind { interior_t0, corner, torsion_interior, torsion_corner };

struct BoundaryBound {
  double value = 0.0;     // bound with the implicit constant set to 1 for the fitted kinds
  double exponent = 0.0;  // power of t
  double constant = 0.0;  // explicit constant, 0 when no explicit constant is known
};

/// Requires params.h1_certified; throws HypothesisViolated otherwise.
BoundaryBound boundary_lower_bound(const BoundParams& params, BoundaryKind kind, Point x, double t,
                                   const Eigenpair* eig = nullptr);

}  // namespace cvlab
