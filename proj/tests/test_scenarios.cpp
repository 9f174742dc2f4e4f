#include <set>

#include "concavlab/errors.hpp"
#include "concavlab/report.hpp"
#include "concavlab/scenarios.hpp"
#include "doctest.h"

using namespace cvlab;

namespace {

const Assertion* find(const ScenarioReport& r, const std::string& name) {
  for (const auto& a : r.assertions)
    if (a.name == name) return &a;
  return nullptr;
}

}  // namespace

TEST_CASE("catalog ids") {
  const auto ids = scenario_ids();
  CHECK(ids.size() == 19);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  for (const auto& id : ids) {
    const Scenario s = make_scenario(id, 1.0 / 16);
    CHECK(s.id == id);
    CHECK(!s.title.empty());
    CHECK(s.grid.h == 1.0 / 16);
  }
  CHECK_THROWS_AS(make_scenario("no-such-scenario"), Error);
}

TEST_CASE("closed-form exponents of the catalog") {
  auto alpha = [](const char* id) {
    const Scenario s = make_scenario(id, 1.0 / 16);
    return scenario_alpha(s, check_hypotheses(s.problem, s.M, s.grid.T));
  };
  CHECK(alpha("torsion-square") == doctest::Approx(0.5));
  CHECK(alpha("lane-emden-square") == doctest::Approx(0.25));
  CHECK(alpha("sum-of-powers-square") == doctest::Approx(0.2));
  CHECK(alpha("weighted-torsion-square") == doctest::Approx(1.0 / 3.0));
  CHECK(alpha("separable-time-square") == doctest::Approx(0.4));
}

TEST_CASE("unmet hypotheses and exponent ranges give not_applicable") {
  Scenario s = make_scenario("logistic-disk", 1.0 / 16);
  s.required = {"h2"};
  const ScenarioReport r = run_scenario(s);
  CHECK(r.verdict == Verdict::not_applicable);
  CHECK(r.reason.find("h2") != std::string::npos);

  Scenario t = make_scenario("separable-time-square", 1.0 / 16);
  t.problem.weight.gamma = 0.9;
  t.audit.beta = 2.0;
  t.audit.alpha_rule = AlphaVariant::lane_emden;
  t.required.clear();
  CHECK(run_scenario(t).verdict == Verdict::not_applicable);
}

TEST_CASE("coarse torsion run passes and is deterministic") {
  const Scenario s = make_scenario("torsion-square", 1.0 / 20);
  const auto reports = run_scenarios({s, s}, 2);
  REQUIRE(reports.size() == 2);
  const ScenarioReport& r = reports[0];
  CHECK(r.verdict == Verdict::pass);
  CHECK(to_json(r).dump() == to_json(reports[1]).dump());
  REQUIRE(find(r, "concavity") != nullptr);
  CHECK(find(r, "concavity")->passed);
  CHECK(r.diagnostics.monotone);
  REQUIRE(r.diagnostics.comparison_worst);
  CHECK(*r.diagnostics.comparison_worst <= r.diagnostics.tau_mono);
  REQUIRE(r.diagnostics.hopf_min);
  CHECK(*r.diagnostics.hopf_min > 0.0);
}

TEST_CASE("weight statistics of simple weights") {
  Problem pr;
  DomainPtr dom = build_discretization(pr.domain, 1.0 / 16);
  const WeightStats c = weight_stats(pr, *dom, 0.1, 1.0, 0.0);
  CHECK(c.inf_a == 1.0);
  CHECK(c.sup_a == 1.0);
  CHECK(c.sup_neg == 0.0);
  CHECK(c.samples > 0);

  pr.weight.kind = WeightKind::ramp_bump;
  pr.weight.epsilon = 0.2;
  const WeightStats r = weight_stats(pr, *dom, 0.1, 1.0, 0.0);
  CHECK(r.sup_a > r.inf_a);
  CHECK(r.sup_neg > 0.0);
}
