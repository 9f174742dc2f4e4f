#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concavlab/audit.hpp"
#include "concavlab/bounds.hpp"
#include "concavlab/problem.hpp"

namespace cvlab {

enum class Verdict { pass, fail, not_applicable };
std::string_view to_string(Verdict v);

/// Right-hand side used for logarithmic audits.
enum class LogBound { none, eigen, product_osc };
std::string_view to_string(LogBound b);

struct ScenarioGrid {
  double h = 1.0 / 64;
  double dt = 0.0;  // 0 means dt = h
  double T = 2.0;
  int substeps = 4;
};

struct ScenarioAudit {
  AuditMode mode = AuditMode::space;
  Transform transform = Transform::log;
  double alpha = 1.0;
  std::optional<AlphaVariant> alpha_rule;  // closed-form exponent from the hypothesis report
  double beta = 1.0;
  bool use_infinity = false;
};

struct Scenario {
  std::string id;
  std::string title;
  std::vector<std::string> claims;
  Problem problem;
  ScenarioGrid grid;
  ScenarioAudit audit;
  double M = 1.0;  // state bound for the hypothesis checks
  std::vector<std::string> required;  // hypothesis flags that must read yes

  bool exact = false;     // defect >= -tau
  bool per_time = false;  // exact check at every snapshot
  LogBound log_bound = LogBound::none;
  std::vector<QuantMode> quantitative;
  double quant_theta = 1.0;
  std::optional<double> rho;  // inner margin for weight statistics; empty picks it from the argmin

  bool check_monotone = false;
  bool check_comparison = false;
  bool check_boundary = false;
  bool check_hopf = false;
  bool check_quasiconcavity = false;
  SamplerConfig sampler;
};

struct Assertion {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;  // passes when measured >= bound
  double margin = 0.0;
  std::string note;
  std::optional<Tuple> tuple;
};

struct NamedDefect {
  std::string name;
  TransformSpec transform;
  DefectReport report;
};

struct Diagnostics {
  bool seeded = false;
  bool monotone = true;
  double tau_mono = 0.0;
  long steps = 0;
  long cg_iterations = 0;
  std::size_t snapshots = 0;
  double lambda1 = 0.0;
  std::optional<double> stationary_residual;
  std::optional<double> stationary_sup;
  std::optional<double> comparison_worst;  // max of sub-run minus main run
  std::optional<double> boundary_ratio_min;  // min of u / bound
  std::optional<double> hopf_min;            // min inward quotient at boundary-adjacent nodes
  std::optional<double> quasiconcavity;
  std::optional<double> negative_source_fraction;
  std::vector<std::string> warnings;
};

struct ScenarioReport {
  std::string id;
  std::string title;
  std::vector<std::string> claims;
  Verdict verdict = Verdict::pass;
  std::string reason;
  double h = 0.0;
  double dt = 0.0;
  double T = 0.0;
  HypothesisReport hypotheses;
  std::vector<NamedDefect> defects;
  std::vector<BoundReport> bounds;
  std::vector<Assertion> assertions;
  Diagnostics diagnostics;
  double runtime_seconds = 0.0;
};

/// Ids of the built-in scenarios.
std::vector<std::string> scenario_ids();
/// Builds a built-in scenario at grid step h. Throws InvalidArgument for unknown ids.
Scenario make_scenario(std::string_view id, double h = 1.0 / 64);

/// Exponent the scenario audits with; validates the spacetime window.
double scenario_alpha(const Scenario& s, const HypothesisReport& hyp);

ScenarioReport run_scenario(const Scenario& s);

/// Runs scenarios on up to `jobs` threads; results follow the input order.
std::vector<ScenarioReport> run_scenarios(const std::vector<Scenario>& list, unsigned jobs = 0);

struct WeightStats {
  double inf_a = 0.0;
  double sup_a = 0.0;
  double inf_a2 = 0.0;
  double sup_a2 = 0.0;
  double sup_neg = 0.0;        // sup of (C_a)^-
  double sup_neg_theta = 0.0;  // sup of (C_{a^theta})^-
  double inf_c = 0.0;          // inf of C_a
  long samples = 0;
};

/// Weight statistics over interior nodes deeper than rho, at physical time t.
WeightStats weight_stats(const Problem& problem, const DiscretizedDomain& dom, double rho, double theta, double t,
                         std::size_t max_nodes = 400, int lambda_divisions = 16);

}  // namespace cvlab
