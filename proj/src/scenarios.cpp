#include "concavlab/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "concavlab/errors.hpp"
#include "concavlab/stationary.hpp"

namespace cvlab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

std::string_view to_string(LogBound b) {
  switch (b) {
    case LogBound::none: return "none";
    case LogBound::eigen: return "eigen";
    case LogBound::product_osc: return "product_osc";
  }
  return "?";
}

namespace {

const std::vector<double> kRampEps = {0.0, 0.05, 0.1, 0.2};

std::string eps_tag(double e) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", e);
  return buf;
}

Scenario base(std::string id, std::string title, double h) {
  Scenario s;
  s.id = std::move(id);
  s.title = std::move(title);
  s.grid.h = h;
  s.problem.label = s.id;
  return s;
}

Scenario spacetime_power(Scenario s, AlphaVariant rule, double beta) {
  s.audit.mode = AuditMode::spacetime;
  s.audit.transform = Transform::power;
  s.audit.alpha_rule = rule;
  s.audit.beta = beta;
  s.audit.use_infinity = true;
  s.exact = true;
  s.check_monotone = true;
  s.check_comparison = true;
  s.check_hopf = true;
  s.required = {"h1", "h2", "h3"};
  return s;
}

Scenario spatial_log(Scenario s, LogBound bound) {
  s.problem.domain = DomainSpec::disk(1.0);
  s.problem.u0.kind = InitialKind::principal_eigenfunction;
  s.audit.mode = AuditMode::space;
  s.audit.transform = Transform::log;
  s.audit.alpha = 0.0;
  s.per_time = true;
  s.log_bound = bound;
  s.check_hopf = true;
  return s;
}

Weight distance_weight(double value) {
  Weight w;
  w.kind = WeightKind::distance_power;
  w.value = value;
  w.omega = 1.0;
  w.theta = 1.0;
  return w;
}

Weight ramp_weight(double eps) {
  Weight w;
  w.kind = WeightKind::ramp_bump;
  w.epsilon = eps;
  return w;
}

std::optional<double> parse_suffix(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() || id.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view rest = id.substr(prefix.size());
  double v = 0.0;
  auto r = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (r.ec != std::errc() || r.ptr != rest.data() + rest.size()) return std::nullopt;
  return v;
}

Scenario ramp_eigen(double eps, double h) {
  Scenario s = spatial_log(base("ramp-eigen-disk-" + eps_tag(eps), "eigen-type source with a ramp-bump weight", h),
                           LogBound::eigen);
  s.claims = {"log-concavity-perturbed"};
  s.problem.source.kind = SourceKind::identity;
  s.problem.weight = ramp_weight(eps);
  s.exact = eps == 0.0;
  return s;
}

Scenario ramp_lane_emden(double eps, double h) {
  Scenario s = spacetime_power(
      base("ramp-lane-emden-square-" + eps_tag(eps), "Lane-Emden source with a ramp-bump weight", h),
      AlphaVariant::constant_weight, 1.0);
  s.claims = {"quantitative-oscillation", "quantitative-rough", "quantitative-inner", "quantitative-theta"};
  s.problem.source = {SourceKind::power_q, 0.5, 0.0};
  s.problem.weight = ramp_weight(eps);
  s.quantitative = {QuantMode::oscillation, QuantMode::rough, QuantMode::directional, QuantMode::theta};
  s.quant_theta = 1.0;
  s.exact = eps == 0.0;
  s.check_comparison = false;
  return s;
}

}  // namespace

std::vector<std::string> scenario_ids() {
  std::vector<std::string> ids = {"torsion-square",  "lane-emden-square", "eigen-disk",
                                  "saturable-disk",  "logistic-disk",     "slogs-disk",
                                  "kennington-square", "sum-of-powers-square", "weighted-torsion-square",
                                  "separable-time-square", "bangbang-logistic-disk"};
  for (double e : kRampEps) ids.push_back("ramp-eigen-disk-" + eps_tag(e));
  for (double e : kRampEps) ids.push_back("ramp-lane-emden-square-" + eps_tag(e));
  return ids;
}

Scenario make_scenario(std::string_view id, double h) {
  require(h > 0.0 && h < 1.0, ErrorCode::invalid_argument, "h must lie in (0, 1)");
  if (id == "torsion-square") {
    Scenario s = spacetime_power(base("torsion-square", "parabolic torsion on the unit square", h),
                                 AlphaVariant::lane_emden, 2.0);
    s.claims = {"spacetime-power-concavity"};
    s.problem.source.kind = SourceKind::one;
    s.check_boundary = true;
    return s;
  }
  if (id == "lane-emden-square") {
    Scenario s = spacetime_power(base("lane-emden-square", "sublinear Lane-Emden source on the unit square", h),
                                 AlphaVariant::lane_emden, 1.0);
    s.claims = {"spacetime-power-concavity"};
    s.problem.source = {SourceKind::power_q, 0.5, 0.0};
    s.check_boundary = true;
    return s;
  }
  if (id == "eigen-disk") {
    Scenario s = spatial_log(base("eigen-disk", "eigen-type source with a concave weight on the disk", h),
                             LogBound::eigen);
    s.claims = {"log-concavity"};
    s.problem.source.kind = SourceKind::identity;
    s.problem.weight = distance_weight(1.0);
    s.exact = true;
    return s;
  }
  if (id == "saturable-disk") {
    Scenario s = spatial_log(base("saturable-disk", "saturable source with a constant weight on the disk", h),
                             LogBound::product_osc);
    s.claims = {"log-concavity"};
    s.problem.source.kind = SourceKind::saturable;
    s.exact = true;
    return s;
  }
  if (id == "logistic-disk") {
    Scenario s = spatial_log(base("logistic-disk", "logistic source with a concave weight on the disk", h),
                             LogBound::eigen);
    s.claims = {"log-concavity-population"};
    s.problem.source.kind = SourceKind::logistic;
    s.problem.weight = distance_weight(8.0);
    s.problem.u0.amplitude = 10.0;
    s.M = 10.0;
    s.exact = true;
    return s;
  }
  if (id == "slogs-disk") {
    Scenario s = spatial_log(base("slogs-disk", "logarithmic source with a constant weight on the disk", h),
                             LogBound::product_osc);
    s.claims = {"log-concavity", "log-concavity-perturbed"};
    s.problem.source.kind = SourceKind::log_s;
    s.problem.u0.amplitude = 50.0;
    s.M = 50.0;
    s.exact = true;
    return s;
  }
  if (id == "kennington-square") {
    Scenario s = spacetime_power(base("kennington-square", "decreasing source (1-s)^p on the unit square", h),
                                 AlphaVariant::lane_emden, 2.0);
    s.claims = {"spacetime-power-concavity", "quasiconcavity"};
    s.problem.source = {SourceKind::one_minus_s_p, 0.0, 0.5};
    s.audit.alpha_rule.reset();
    s.audit.alpha = 0.5;
    s.M = 0.5;
    s.required = {"h2", "h3"};
    s.check_comparison = false;
    s.check_quasiconcavity = true;
    return s;
  }
  if (id == "sum-of-powers-square") {
    Scenario s = spacetime_power(base("sum-of-powers-square", "source a s^p + s^q on the unit square", h),
                                 AlphaVariant::constant_weight, 2.0);
    s.claims = {"spacetime-power-concavity"};
    s.problem.source = {SourceKind::power_sum, 0.6, 0.5};
    return s;
  }
  if (id == "weighted-torsion-square") {
    Scenario s = spacetime_power(
        base("weighted-torsion-square", "torsion with the distance weight on the unit square", h),
        AlphaVariant::torsion, 2.0);
    s.claims = {"spacetime-power-concavity-torsion"};
    s.problem.source.kind = SourceKind::one;
    s.problem.weight = distance_weight(1.0);
    s.required = {"h1_prime", "h2", "h3"};
    s.check_comparison = false;
    return s;
  }
  if (id == "separable-time-square") {
    Scenario s = spacetime_power(
        base("separable-time-square", "torsion with the weight t^gamma, truncated at T", h),
        AlphaVariant::constant_weight, 1.0);
    s.claims = {"spacetime-power-concavity"};
    s.problem.source.kind = SourceKind::one;
    s.problem.weight.kind = WeightKind::separable_power_time;
    s.problem.weight.gamma = 0.5;
    s.problem.truncation = s.grid.T;
    s.check_boundary = true;
    return s;
  }
  if (id == "bangbang-logistic-disk") {
    Scenario s = spatial_log(
        base("bangbang-logistic-disk", "logistic source with a smoothed bang-bang weight on the disk", h),
        LogBound::eigen);
    s.claims = {"log-concavity-population-perturbed"};
    s.problem.source.kind = SourceKind::logistic;
    s.problem.weight.kind = WeightKind::smoothed_bang_bang;
    s.problem.weight.a1 = 8.0;
    s.problem.weight.a2 = 1.0;
    s.problem.weight.eta = 2.0 * h;
    s.M = 8.0;
    return s;
  }
  if (auto e = parse_suffix(id, "ramp-eigen-disk-")) return ramp_eigen(*e, h);
  if (auto e = parse_suffix(id, "ramp-lane-emden-square-")) return ramp_lane_emden(*e, h);
  fail(ErrorCode::invalid_argument, "unknown scenario '" + std::string(id) + "'");
}

double scenario_alpha(const Scenario& s, const HypothesisReport& hyp) {
  if (s.audit.transform == Transform::log) return 0.0;
  double alpha = s.audit.alpha;
  if (s.audit.alpha_rule) {
    double theta = *s.audit.alpha_rule == AlphaVariant::constant_weight ? kInf : s.problem.weight.theta;
    alpha = alpha_exponent(hyp.q, hyp.gamma, s.audit.beta, theta, *s.audit.alpha_rule);
  }
  require(alpha > 0.0 && alpha <= 1.0, ErrorCode::invalid_argument, "alpha must lie in (0, 1]");
  if (s.audit.mode == AuditMode::spacetime) {
    double window = admissible_alpha_bound(hyp.q, hyp.gamma, s.audit.beta);
    require(alpha <= window * (1.0 + 1e-12), ErrorCode::invalid_argument,
            "alpha " + std::to_string(alpha) + " exceeds the admissible window " + std::to_string(window));
  }
  return alpha;
}

WeightStats weight_stats(const Problem& problem, const DiscretizedDomain& dom, double rho, double theta, double t,
                         std::size_t max_nodes, int lambda_divisions) {
  std::vector<Point> pts;
  for (std::size_t k = 0; k < dom.interior_count(); ++k)
    if (dom.interior_distance(k) > rho) pts.push_back(dom.interior_point(k));
  require(!pts.empty(), ErrorCode::empty_sampler, "no nodes deeper than rho");
  const double te = problem.effective_time(t);
  auto a = [&](Point x) { return problem.weight(problem.domain, x, te); };

  WeightStats ws;
  ws.inf_a = kInf;
  ws.sup_a = -kInf;
  ws.inf_a2 = kInf;
  ws.sup_a2 = -kInf;
  for (Point p : pts) {
    double v = a(p);
    ws.inf_a = std::min(ws.inf_a, v);
    ws.sup_a = std::max(ws.sup_a, v);
    ws.inf_a2 = std::min(ws.inf_a2, v * v);
    ws.sup_a2 = std::max(ws.sup_a2, v * v);
  }

  std::vector<Point> pick;
  const std::size_t stride = std::max<std::size_t>(1, (pts.size() + max_nodes - 1) / max_nodes);
  for (std::size_t k = 0; k < pts.size(); k += stride) pick.push_back(pts[k]);
  std::vector<double> va(pick.size());
  for (std::size_t i = 0; i < pick.size(); ++i) va[i] = a(pick[i]);
  const bool use_theta = std::isfinite(theta) && ws.inf_a >= 0.0;
  auto powt = [&](double v) { return spow(std::max(v, 0.0), theta); };

  ws.inf_c = 0.0;
  for (std::size_t i = 0; i < pick.size(); ++i)
    for (std::size_t j = i + 1; j < pick.size(); ++j)
      for (int l = 1; l < lambda_divisions; ++l) {
        const double lam = static_cast<double>(l) / lambda_divisions;
        const double a2 = a((1.0 - lam) * pick[i] + lam * pick[j]);
        const double c = concavity_value(va[i], a2, va[j], lam);
        ws.inf_c = std::min(ws.inf_c, c);
        if (use_theta) {
          const double ct = concavity_value(powt(va[i]), powt(a2), powt(va[j]), lam);
          ws.sup_neg_theta = std::max(ws.sup_neg_theta, -ct);
        }
        ++ws.samples;
      }
  ws.sup_neg = std::max(0.0, -ws.inf_c);
  return ws;
}

namespace {

using Clock = std::chrono::steady_clock;

Assertion check(std::string name, double measured, double bound, std::string note = {},
                std::optional<Tuple> tuple = std::nullopt) {
  Assertion a;
  a.name = std::move(name);
  a.measured = measured;
  a.bound = bound;
  a.margin = measured - bound;
  a.passed = measured >= bound;
  a.note = std::move(note);
  if (!a.passed) a.tuple = tuple;
  return a;
}

const HypothesisFlag& flag_named(const HypothesisReport& r, const std::string& name) {
  if (name == "h1") return r.h1;
  if (name == "h1_star") return r.h1_star;
  if (name == "h1_prime") return r.h1_prime;
  if (name == "h2") return r.h2;
  if (name == "h2_star") return r.h2_star;
  if (name == "h3") return r.h3;
  fail(ErrorCode::invalid_argument, "unknown hypothesis flag '" + name + "'");
}

double rho_of(const Scenario& s, const DefectReport& d) {
  if (s.rho) return *s.rho;
  const DomainSpec& spec = s.problem.domain;
  const double h = s.grid.h;
  double r = std::min(distance_to_boundary(spec, d.argmin.x1), distance_to_boundary(spec, d.argmin.x3));
  return std::max(2.0 * h, r);
}

Point averaged_gradient(const DefectReport& d) {
  return (1.0 / 3.0) * (d.gradients[0] + d.gradients[1] + d.gradients[2]);
}

BoundReport log_bound_report(std::string theorem, double rhs, std::map<std::string, double> constants) {
  BoundReport b;
  b.theorem = std::move(theorem);
  b.rhs = rhs;
  b.constants = std::move(constants);
  return b;
}

void check_log_bounds(const Scenario& s, const Trajectory& traj, const AuditField& field, const DefectReport& main,
                      ScenarioReport& rep) {
  const Problem& P = s.problem;
  const DiscretizedDomain& dom = *traj.domain;
  const double T = s.grid.T;
  const double tf = P.weight.time_dependent() ? P.weight.time_factor(P.effective_time(T)) : 1.0;
  if (s.log_bound == LogBound::eigen) {
    WeightStats ws = weight_stats(P, dom, 0.0, kInf, T);
    const double defect = ws.sup_neg * tf;
    const double rhs = log_concavity_rhs(T, 0.0, defect, LogVariant::eigen);
    rep.bounds.push_back(log_bound_report("log-concavity-eigen", rhs,
                                          {{"T", T}, {"Lambda", 0.0}, {"sup_neg_weight_defect", defect},
                                           {"osc_a", ws.sup_a - ws.inf_a}}));
    rep.assertions.push_back(check("log-bound", main.min, rhs - main.tau_audit,
                                   "measured defect >= -e T sup(C*_a)^- - tau", main.argmin));
    if (P.weight.kind == WeightKind::smoothed_bang_bang) {
      const double coarse = -std::exp(1.0) * T * (P.weight.a1 + P.weight.a2);
      rep.bounds.push_back(log_bound_report("log-concavity-eigen-oscillation", coarse,
                                            {{"T", T}, {"a1", P.weight.a1}, {"a2", P.weight.a2}}));
      rep.assertions.push_back(check("log-bound-oscillation", main.min, coarse - main.tau_audit,
                                     "measured defect >= -e T (a1 + a2) - tau", main.argmin));
    }
  } else if (s.log_bound == LogBound::product_osc) {
    const double rho = rho_of(s, main);
    WeightStats ws = weight_stats(P, dom, rho, kInf, T);
    const double Lambda = sup_slope_lambda(P.source);
    double fbar_sup = 0.0;
    for (std::size_t i = 0; i < field.slice_count(); ++i)
      for (std::size_t k = 0; k < dom.interior_count(); ++k) {
        if (dom.interior_distance(k) <= rho) continue;
        const double u = field.raw_node(k, i);
        if (u > 0.0) fbar_sup = std::max(fbar_sup, std::abs(P.source.f(u) / u));
      }
    const double osc = (ws.sup_a - ws.inf_a) * tf;
    const double rhs = log_concavity_rhs(T, Lambda, osc, LogVariant::product_osc, fbar_sup);
    rep.bounds.push_back(log_bound_report("log-concavity-product-oscillation", rhs,
                                          {{"T", T}, {"Lambda", Lambda}, {"rho", rho}, {"fbar_sup", fbar_sup},
                                           {"osc_a", osc}}));
    rep.assertions.push_back(check("log-bound", main.min, rhs - main.tau_audit,
                                   "measured defect >= -T e^(1 + Lambda T) |fbar(u)| osc(a) - tau", main.argmin));
  }
}

void check_quantitative(const Scenario& s, const Trajectory& traj, const StationaryResult& st, const AuditField& field,
                        const DefectReport& main, double beta, ScenarioReport& rep) {
  const Problem& P = s.problem;
  const DiscretizedDomain& dom = *traj.domain;
  const HypothesisReport& hyp = rep.hypotheses;
  const double theta = s.quant_theta;
  WeightStats all = weight_stats(P, dom, 0.0, theta, s.grid.T);

  BoundParams bp;
  bp.q = hyp.q;
  bp.gamma = hyp.gamma;
  bp.beta = beta;
  bp.theta = theta;
  bp.m = all.inf_a;
  bp.M = all.sup_a;
  bp.T = s.grid.T;
  bp.sup_norm_u_inf = st.v.max();
  bp.osc_a = all.sup_a - all.inf_a;
  bp.osc_a2 = all.sup_a2 - all.inf_a2;
  bp.sup_neg_theta_defect = all.sup_neg_theta;
  bp.rho = rho_of(s, main);
  WeightStats inner = weight_stats(P, dom, bp.rho, kInf, s.grid.T);
  bp.inf_concavity_a = inner.inf_c;
  bp.a_inf_rho = inner.inf_a;
  bp.a_sup_rho = inner.sup_a;
  bp.xi = averaged_gradient(main);
  bp.xi_mismatch = main.gradient_mismatch;
  bp.v1 = field.value(main.argmin.x1, main.argmin.t1);
  bp.v3 = field.value(main.argmin.x3, main.argmin.t3);
  bp.lambda = main.argmin.lambda;
  bp.k = hyp.k;

  std::optional<DefectReport> theta_defect;
  for (QuantMode mode : s.quantitative) {
    const bool theta_mode = mode == QuantMode::theta || mode == QuantMode::elliptic_theta;
    const DefectReport* d = &main;
    if (theta_mode) {
      if (!theta_defect) {
        TransformSpec ts{Transform::power, theta * (1.0 - hyp.q) / (2.0 * theta + 1.0), beta};
        AuditField tf(traj, &st.v, ts);
        SamplerConfig cfg = s.sampler;
        cfg.use_infinity = true;
        theta_defect = min_defect(tf, AuditMode::spacetime, cfg);
        rep.defects.push_back({"theta", ts, *theta_defect});
      }
      d = &*theta_defect;
    }
    BoundReport br;
    bool gated = true;
    try {
      br = quantitative_rhs(bp, mode, false);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::validity_violation) throw;
      br = quantitative_rhs(bp, mode, true);
      gated = false;
    }
    rep.bounds.push_back(br);
    if (gated)
      rep.assertions.push_back(check("quantitative-" + std::string(to_string(mode)), d->min,
                                     br.rhs - d->tau_audit, "measured defect >= rhs - tau", d->argmin));
    else
      rep.diagnostics.warnings.push_back(std::string(to_string(mode)) + " bound evaluated outside its gate");
  }
}

double min_increment(const Trajectory& traj) {
  double m = kInf;
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i)
    for (std::size_t k = 0; k < traj.snapshots[i].size(); ++k)
      m = std::min(m, traj.snapshots[i].values[k] - traj.snapshots[i - 1].values[k]);
  return std::isfinite(m) ? m : 0.0;
}

void check_comparison(const Scenario& s, DomainPtr dom, const TimeGrid& grid, const Trajectory& traj,
                      ScenarioReport& rep) {
  if (rep.hypotheses.h1.value != Tri::yes) {
    rep.diagnostics.warnings.push_back("comparison sub-run skipped: (H1) not certified");
    return;
  }
  TimeGrid sub = grid;
  std::size_t offset = 0;
  if (grid.start == 0.0) {
    if (grid.snapshots.size() < 2) return;
    sub.start = grid.snapshots.front();
    sub.snapshots.erase(sub.snapshots.begin());
    offset = 1;
  }
  Problem p = s.problem;
  p.u0.kind = InitialKind::subsolution_seed;
  Trajectory lower = solve_trajectory(p, dom, sub, {0.5});
  double worst = -kInf;
  for (std::size_t j = 0; j < lower.snapshots.size(); ++j) {
    const Field& u = traj.snapshots[j + offset];
    const Field& v = lower.snapshots[j];
    for (std::size_t k = 0; k < u.size(); ++k) worst = std::max(worst, v.values[k] - u.values[k]);
  }
  rep.diagnostics.comparison_worst = worst;
  rep.assertions.push_back(check("comparison", -worst, -traj.tau_mono,
                                 "half-scale seeded sub-run stays below the main run"));
}

void check_boundary(const Scenario& s, const Trajectory& traj, const Eigenpair& eig, ScenarioReport& rep) {
  const HypothesisReport& hyp = rep.hypotheses;
  if (hyp.h1.value != Tri::yes) {
    rep.diagnostics.warnings.push_back("boundary estimate skipped: (H1) not certified");
    return;
  }
  BoundParams bp;
  bp.q = hyp.q;
  bp.gamma = hyp.gamma;
  bp.k = hyp.k;
  bp.h1_certified = true;
  const DiscretizedDomain& dom = *traj.domain;
  double ratio = kInf;
  for (const Field& u : traj.snapshots) {
    if (u.time <= 0.0 || u.time >= s.grid.T) continue;
    BoundaryBound b = boundary_lower_bound(bp, BoundaryKind::interior_t0, dom.interior_point(0), u.time, &eig);
    const double scale = b.constant * std::exp(-eig.lambda * u.time) * std::pow(u.time, b.exponent);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double bound = scale * eig.phi.values[k];
      if (bound > 0.0) ratio = std::min(ratio, u.values[k] / bound);
    }
  }
  if (!std::isfinite(ratio)) return;
  rep.diagnostics.boundary_ratio_min = ratio;
  rep.assertions.push_back(check("boundary-estimate", ratio, 0.99, "min of u over the eigenfunction barrier"));
}

void check_hopf(const Scenario& s, const Trajectory& traj, ScenarioReport& rep) {
  const DiscretizedDomain& dom = *traj.domain;
  double worst = kInf;
  for (const Field& u : traj.snapshots) {
    if (u.time < 0.1 || u.time > s.grid.T) continue;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!dom.boundary_adjacent(k)) continue;
      const auto& fr = dom.arm_fractions(k);
      const double arm = *std::min_element(fr.begin(), fr.end()) * dom.h();
      worst = std::min(worst, u.values[k] / arm);
    }
  }
  if (!std::isfinite(worst)) return;
  rep.diagnostics.hopf_min = worst;
  Assertion a = check("hopf", worst, 0.0, "inward difference quotients at boundary-adjacent nodes for t >= 0.1");
  a.passed = worst > 0.0;
  rep.assertions.push_back(a);
}

double negative_source_fraction(const Problem& P, const Trajectory& traj) {
  const DiscretizedDomain& dom = *traj.domain;
  long neg = 0, total = 0;
  for (const Field& u : traj.snapshots)
    for (std::size_t k = 0; k < u.size(); ++k) {
      ++total;
      if (eval_source(P, dom.interior_point(k), std::max(0.0, u.values[k]), u.time) < 0.0) ++neg;
    }
  return total ? static_cast<double>(neg) / total : 0.0;
}

}  // namespace

ScenarioReport run_scenario(const Scenario& s) {
  const auto start_clock = Clock::now();
  const Problem& P = s.problem;
  P.validate();
  require(s.grid.h > 0.0 && s.grid.T > 0.0 && s.grid.dt >= 0.0 && s.grid.substeps >= 1, ErrorCode::invalid_argument,
          "bad grid parameters");
  ScenarioReport rep;
  rep.id = s.id;
  rep.title = s.title;
  rep.claims = s.claims;
  rep.h = s.grid.h;
  rep.dt = s.grid.dt > 0.0 ? s.grid.dt : s.grid.h;
  rep.T = s.grid.T;
  auto finish = [&]() {
    rep.runtime_seconds = std::chrono::duration<double>(Clock::now() - start_clock).count();
    return rep;
  };

  rep.hypotheses = check_hypotheses(P, s.M, s.grid.T);
  for (const std::string& name : s.required) {
    const HypothesisFlag& f = flag_named(rep.hypotheses, name);
    if (f.value != Tri::yes) {
      rep.verdict = Verdict::not_applicable;
      rep.reason = name + " is " + std::string(to_string(f.value)) + " (" + f.basis + ")";
      return finish();
    }
  }
  double alpha = 0.0;
  try {
    alpha = scenario_alpha(s, rep.hypotheses);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::range_violation) throw;
    rep.verdict = Verdict::not_applicable;
    rep.reason = e.what();
    return finish();
  }
  const double beta = s.audit.beta;

  DomainPtr dom = build_discretization(P.domain, s.grid.h);
  Eigenpair eig = principal_eigenpair(dom);
  const double t0 = needs_seed(P) ? default_seed_time(rep.dt, s.grid.T) : 0.0;
  TimeGrid grid = TimeGrid::rescaled(t0, s.grid.T, beta, rep.dt, s.grid.substeps);
  Trajectory traj = solve_trajectory(P, dom, grid);

  Diagnostics& dg = rep.diagnostics;
  dg.seeded = traj.seeded;
  dg.monotone = traj.monotone_nondecreasing;
  dg.tau_mono = traj.tau_mono;
  dg.steps = traj.steps;
  dg.cg_iterations = traj.cg_iterations;
  dg.snapshots = traj.snapshots.size();
  dg.lambda1 = eig.lambda;

  const bool need_stationary = s.audit.use_infinity || !s.quantitative.empty();
  StationaryResult st;
  if (need_stationary) {
    st = solve_stationary(P, dom);
    dg.stationary_residual = st.residual;
    dg.stationary_sup = st.v.max();
    for (auto& w : st.warnings) dg.warnings.push_back("stationary: " + w);
  }

  TransformSpec ts{s.audit.transform, s.audit.transform == Transform::log ? 1.0 : alpha, beta};
  AuditField field(traj, s.audit.use_infinity ? &st.v : nullptr, ts);
  SamplerConfig cfg = s.sampler;
  cfg.use_infinity = s.audit.use_infinity;
  DefectReport main = min_defect(field, s.audit.mode, cfg);
  rep.defects.push_back({"main", ts, main});

  if (s.exact) {
    rep.assertions.push_back(check("concavity", main.min, -main.tau_audit,
                                   "consistent with concavity up to the audit tolerance", main.argmin));
    if (s.per_time && !main.per_time.empty()) {
      double worst = kInf;
      int failing = 0;
      for (auto [t, m] : main.per_time) {
        worst = std::min(worst, m);
        if (m < -main.tau_audit) ++failing;
      }
      rep.assertions.push_back(check("concavity-every-snapshot", worst, -main.tau_audit,
                                     std::to_string(main.per_time.size()) + " snapshots, " +
                                         std::to_string(failing) + " below tolerance",
                                     main.argmin));
    }
  }
  if (s.log_bound != LogBound::none) check_log_bounds(s, traj, field, main, rep);
  if (!s.quantitative.empty()) check_quantitative(s, traj, st, field, main, beta, rep);

  if (s.check_monotone) {
    Assertion a = check("monotone", min_increment(traj), -traj.tau_mono, "snapshot increments with tau_mono = 10 h^2");
    a.passed = a.passed && traj.monotone_nondecreasing;
    rep.assertions.push_back(a);
  }
  if (s.check_comparison) check_comparison(s, dom, grid, traj, rep);
  if (s.check_boundary) check_boundary(s, traj, eig, rep);
  if (s.check_hopf) check_hopf(s, traj, rep);
  if (s.check_quasiconcavity) {
    const Field& last = need_stationary ? st.v : traj.snapshots.back();
    const double q = quasiconcavity_defect(last, 0.0);
    const double tol = audit_tolerance(AuditField(last, {Transform::power, 1.0, 1.0}), cfg);
    dg.quasiconcavity = q;
    rep.assertions.push_back(check("quasiconcavity", -q, -tol, "superlevel sets of the stationary slice"));
  }
  if (P.source.kind == SourceKind::logistic) dg.negative_source_fraction = negative_source_fraction(P, traj);

  rep.verdict = Verdict::pass;
  for (const Assertion& a : rep.assertions)
    if (!a.passed) {
      rep.verdict = Verdict::fail;
      if (rep.reason.empty()) rep.reason = a.name + " failed with margin " + std::to_string(a.margin);
    }
  return finish();
}

std::vector<ScenarioReport> run_scenarios(const std::vector<Scenario>& list, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, list.size())));
  std::vector<ScenarioReport> out(list.size());
  std::vector<std::exception_ptr> errors(list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < list.size(); i = next++) {
      try {
        out[i] = run_scenario(list[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace cvlab
