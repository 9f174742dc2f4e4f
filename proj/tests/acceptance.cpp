#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "concavlab/bounds.hpp"
#include "concavlab/envelope.hpp"
#include "concavlab/parabolic.hpp"
#include "concavlab/properties.hpp"
#include "concavlab/report.hpp"
#include "concavlab/scenarios.hpp"

using namespace cvlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kH = 1.0 / 64;

int failures = 0;

void line(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Assertion* find(const ScenarioReport& r, const std::string& name) {
  for (const auto& a : r.assertions)
    if (a.name == name) return &a;
  return nullptr;
}

const NamedDefect* main_defect(const ScenarioReport& r) {
  for (const auto& d : r.defects)
    if (d.name == "main") return &d;
  return nullptr;
}

double heat_error(double h) {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), h);
  auto mode = [](Point p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  Problem pr;
  pr.weight.value = 0.0;
  pr.u0.kind = InitialKind::samples;
  pr.u0.samples = Field::sample(dom, mode).values;
  const double t = 0.05;
  const Trajectory traj = solve_trajectory(pr, dom, TimeGrid::uniform(0.0, t, 1e-5, 5000));
  const Field& u = traj.snapshots.back();
  double err = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    err = std::max(err, std::abs(u.values[k] - std::exp(-2.0 * kPi * kPi * t) * mode(dom->interior_point(k))));
  return err;
}

void criterion_1() {
  const double e64 = heat_error(kH), e32 = heat_error(2 * kH);
  const double ratio = e32 / e64;
  line(1, "solver oracle", e64 <= 0.02 && std::abs(ratio - 4.0) <= 1.0,
       fmt("Linf error %.3e at h=1/64 (limit 0.02), ratio h=1/32 vs 1/64 = %.3f (4 +- 1)", e64, ratio));
}

void criterion_2() {
  const Eigenpair sq = principal_eigenpair(build_discretization(DomainSpec::unit_square(), kH));
  const Eigenpair dk = principal_eigenpair(build_discretization(DomainSpec::disk(1.0), kH));
  const double esq = std::abs(sq.lambda / (2 * kPi * kPi) - 1.0), edk = std::abs(dk.lambda / 5.7832 - 1.0);
  const bool shape = sq.phi.min() > 0.0 && dk.phi.min() > 0.0 && sq.phi.max() == 1.0 && dk.phi.max() == 1.0;
  line(2, "eigenpair", esq <= 0.01 && edk <= 0.02 && shape,
       fmt("square %.5f (rel %.2e, limit 1%%), disk %.5f (rel %.2e, limit 2%%), phi positive and sup-normalized: %s",
           sq.lambda, esq, dk.lambda, edk, shape ? "yes" : "no"));
}

double negative_part(const Scenario& base, double h) {
  Scenario s = make_scenario(base.id, h);
  s.check_comparison = s.check_boundary = s.check_hopf = false;
  const ScenarioReport r = run_scenario(s);
  const NamedDefect* d = main_defect(r);
  return d ? std::max(0.0, -d->report.min) : kInf;
}

void criterion_3(const std::map<std::string, ScenarioReport>& reps) {
  bool ok = true;
  std::string detail;
  for (const char* id : {"torsion-square", "lane-emden-square"}) {
    const ScenarioReport& r = reps.at(id);
    const NamedDefect* d = main_defect(r);
    const Assertion* a = find(r, "concavity");
    const bool inf_slice = r.diagnostics.stationary_residual.has_value();
    const bool exact = d && a && a->passed && d->report.mode == AuditMode::spacetime && inf_slice;
    const Scenario s = make_scenario(id, kH);
    const double n32 = negative_part(s, 2 * kH), n64 = d ? std::max(0.0, -d->report.min) : kInf;
    const double n128 = negative_part(s, kH / 2);
    // converged below 1e-12, else each halving cuts the negative part by >= 1.9
    auto halves = [](double coarse, double fine) { return fine <= 1e-12 || coarse >= 1.9 * fine; };
    const bool conv = halves(n32, n64) && halves(n64, n128);
    ok = ok && exact && conv;
    detail += fmt("%s: alpha=%.3g beta=%.3g min=%.3e tau=%.3e inf-slice=%s, neg part 1/32,1/64,1/128 = %.3e, %.3e, %.3e; ",
                  id, d ? d->transform.alpha : 0.0, d ? d->transform.beta : 0.0, d ? d->report.min : 0.0,
                  d ? d->report.tau_audit : 0.0, inf_slice ? "yes" : "no", n32, n64, n128);
  }
  line(3, "exact concavity", ok, detail);
}

void criterion_4(const std::map<std::string, ScenarioReport>& reps) {
  bool ok = true;
  std::string detail;
  for (const char* id : {"eigen-disk", "saturable-disk", "logistic-disk"}) {
    const ScenarioReport& r = reps.at(id);
    const Assertion* every = find(r, "concavity-every-snapshot");
    const NamedDefect* d = main_defect(r);
    const bool pass = every && every->passed && d && d->report.mode == AuditMode::space;
    ok = ok && pass;
    detail += fmt("%s: worst snapshot %.3e vs tau %.3e over %zu snapshots; ", id, every ? every->measured : 0.0,
                  d ? d->report.tau_audit : 0.0, d ? d->report.per_time.size() : 0);
  }
  line(4, "exact log-concavity", ok, detail);
}

void criterion_5(const std::map<std::string, ScenarioReport>& reps) {
  bool ok = true;
  std::string detail;
  for (const char* fam : {"ramp-eigen-disk-", "ramp-lane-emden-square-"}) {
    for (const char* eps : {"0.00", "0.05", "0.10", "0.20"}) {
      const ScenarioReport& r = reps.at(std::string(fam) + eps);
      const NamedDefect* d = main_defect(r);
      if (!d) {
        ok = false;
        continue;
      }
      if (std::string(eps) == "0.00") {
        const bool noise = std::abs(std::min(0.0, d->report.min)) <= d->report.tau_audit;
        ok = ok && noise;
        detail += fmt("%s%s: |defect| %.2e <= tau %.2e; ", fam, eps, std::abs(d->report.min), d->report.tau_audit);
        continue;
      }
      int bounds = 0;
      double margin = kInf;
      for (const auto& a : r.assertions) {
        if (a.name.rfind("log-bound", 0) != 0 && a.name.rfind("quantitative-", 0) != 0) continue;
        ++bounds;
        margin = std::min(margin, a.margin);
        ok = ok && a.passed;
      }
      ok = ok && bounds > 0 && r.verdict == Verdict::pass;
      detail += fmt("%s%s: defect %.2e, %d bounds, min margin %.2e; ", fam, eps, d->report.min, bounds, margin);
    }
  }
  line(5, "quantitative bounds", ok, detail);
}

bool h2_h3(const ScenarioReport& r) {
  return r.hypotheses.h2.value == Tri::yes && r.hypotheses.h3.value == Tri::yes;
}

void criterion_6(const std::vector<ScenarioReport>& all) {
  bool ok = true;
  int mono = 0, comp = 0;
  double worst = -kInf;
  std::string skipped;
  for (const auto& r : all) {
    if (!h2_h3(r)) continue;
    const Scenario s = make_scenario(r.id, kH);
    if (s.problem.u0.kind != InitialKind::zero) {
      skipped += r.id + " ";
      continue;
    }
    ++mono;
    ok = ok && r.diagnostics.monotone && std::abs(r.diagnostics.tau_mono - 10 * kH * kH) < 1e-15;
    if (const Assertion* a = find(r, "comparison")) {
      ++comp;
      ok = ok && a->passed;
      worst = std::max(worst, *r.diagnostics.comparison_worst);
    }
  }
  ok = ok && mono > 0 && comp > 0;
  line(6, "monotonicity & comparison", ok,
       fmt("%d zero-data (H2)+(H3) scenarios monotone with tau_mono=10h^2; %d comparison sub-runs, worst excess %.2e "
           "(allowed %.2e); nonzero initial data not covered: %s",
           mono, comp, worst, 10 * kH * kH, skipped.empty() ? "none" : skipped.c_str()));
}

void criterion_7(const std::map<std::string, ScenarioReport>& reps) {
  bool ok = true;
  std::string detail;
  for (const char* id : {"torsion-square", "lane-emden-square"}) {
    const Assertion* a = find(reps.at(id), "boundary-estimate");
    ok = ok && a && a->passed;
    detail += fmt("%s: min u/barrier %.4f (>= 0.99); ", id, a ? a->measured : 0.0);
  }
  line(7, "boundary estimates", ok, detail);
}

void criterion_8(const std::vector<ScenarioReport>& all) {
  bool ok = true;
  int n = 0;
  double worst = kInf;
  for (const auto& r : all) {
    const Assertion* a = find(r, "hopf");
    if (!a) continue;
    ++n;
    ok = ok && a->passed;
    worst = std::min(worst, a->measured);
  }
  ok = ok && n > 0;
  line(8, "hopf check", ok, fmt("%d scenarios, smallest inward quotient for t >= 0.1: %.3e (> 0)", n, worst));
}

void criterion_9() {
  const PropertySuiteReport r = run_property_suite(1, 10000, 1e-10);
  long violations = 0, evaluated = 0;
  for (const auto& c : r.checks) {
    violations += c.violations;
    evaluated += c.evaluated;
  }
  line(9, "property suites", r.passed(),
       fmt("%zu checks x 10^4 draws (seed 1), %ld evaluated, %ld violations beyond 1e-10", r.checks.size(),
           evaluated, violations));
}

void criterion_10() {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 16);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int holds = 0;
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const double amp = 0.2 * U(rng), cx = U(rng), cy = U(rng), w = 0.05 + 0.25 * U(rng), ax = 0.5 + U(rng);
    const Field f = Field::sample(dom, [&](Point x) {
      const double base = 1.0 - ax * (x.x - 0.5) * (x.x - 0.5) - (x.y - 0.5) * (x.y - 0.5) + 0.3 * x.x;
      const double r2 = (x.x - cx) * (x.x - cx) + (x.y - cy) * (x.y - cy);
      return base + amp * std::exp(-r2 / (w * w));
    });
    const HyersUlamCertificate c = concave_approximation(f).certificate;
    if (c.holds && c.distance <= c.k_n * c.delta * (1.0 + 1e-12)) ++holds;
    if (c.delta > 0.0) worst = std::max(worst, c.distance / (c.k_n * c.delta));
  }
  std::vector<double> x, v;
  for (int i = 0; i <= 64; ++i) {
    x.push_back(i / 64.0);
    v.push_back(std::abs(i / 64.0 - 0.5));
  }
  const HyersUlamCertificate s = concave_approximation(x, v).certificate;
  const bool section = s.distance == 0.25 && s.k_n * s.delta == 0.25;
  line(10, "hyers-ulam", holds == 50 && section,
       fmt("%d/50 fields within k_n delta (largest ratio %.3f); |x-1/2| section distance %.17g, k_1 delta %.17g",
           holds, worst, s.distance, s.k_n * s.delta));
}

void criterion_11() {
  const double a = alpha_exponent(0, 0, 1, kInf, AlphaVariant::lane_emden);
  const double b = alpha_exponent(0, 0.5, 1, kInf, AlphaVariant::constant_weight);
  const double c = alpha_exponent(0.5, 0, 1, kInf, AlphaVariant::constant_weight);
  const double d = alpha_exponent(0, 0, 1, 1, AlphaVariant::torsion);
  const bool ok = std::abs(a - 0.5) < 1e-15 && std::abs(b - 0.4) < 1e-15 && std::abs(c - 0.25) < 1e-15 &&
                  std::abs(d - 1.0 / 3.0) < 1e-15;
  line(11, "exponent formulas", ok, fmt("%.17g, %.17g, %.17g, %.17g", a, b, c, d));
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_reports";
  std::vector<Scenario> list;
  for (const auto& id : scenario_ids()) list.push_back(make_scenario(id, kH));
  const std::vector<ScenarioReport> all = run_scenarios(list);
  std::map<std::string, ScenarioReport> reps;
  for (const auto& r : all) {
    reps[r.id] = r;
    write_report(to_json(r), out, r.id, ReportFormat::json);
  }
  write_report(suite_summary(all), out, "suite", ReportFormat::json);

  criterion_1();
  criterion_2();
  criterion_3(reps);
  criterion_4(reps);
  criterion_5(reps);
  criterion_6(all);
  criterion_7(reps);
  criterion_8(all);
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
