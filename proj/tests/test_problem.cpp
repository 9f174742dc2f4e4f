#include <cmath>

#include "concavlab/errors.hpp"
#include "concavlab/problem.hpp"
#include "doctest.h"

using namespace cvlab;

namespace {

Problem with_source(SourceKind kind, double q = 0.0, double p = 0.0) {
  Problem pr;
  pr.source.kind = kind;
  pr.source.q = q;
  pr.source.p = p;
  return pr;
}

}  // namespace

TEST_CASE("source evaluation") {
  const Point c{0.5, 0.5};
  CHECK(eval_source(with_source(SourceKind::power_q, 0.5), c, 4.0, 0.0) == doctest::Approx(2.0));

  Problem logistic = with_source(SourceKind::logistic);
  logistic.weight.value = 2.0;
  CHECK(eval_source(logistic, c, 3.0, 0.0) == doctest::Approx(-3.0));

  Problem sep = with_source(SourceKind::power_q, 0.0);
  sep.weight.kind = WeightKind::separable_power_time;
  sep.weight.value = 3.0;
  sep.weight.gamma = 0.5;
  CHECK(eval_source(sep, c, 0.7, 4.0) == doctest::Approx(6.0));

  sep.truncation = 1.0;
  CHECK(eval_source(sep, c, 0.7, 4.0) == doctest::Approx(3.0));
  CHECK(sep.effective_time(kInf) == 1.0);
}

TEST_CASE("power conventions and negative states") {
  CHECK(spow(0.0, 0.0) == 1.0);
  CHECK(spow(0.0, 0.5) == 0.0);
  const Problem pr = with_source(SourceKind::power_q, 0.5);
  CHECK(eval_source(pr, {0.5, 0.5}, -1e-13, 0.0) == 0.0);
  try {
    eval_source(pr, {0.5, 0.5}, -1e-6, 0.0);
    FAIL("expected a negative-state error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_state);
  }
}

TEST_CASE("hypothesis catalog") {
  const HypothesisReport le = check_hypotheses(with_source(SourceKind::power_q, 0.5), 1.0, 1.0);
  CHECK(le.h1.value == Tri::yes);
  CHECK(le.k == doctest::Approx(1.0));
  CHECK(le.q == doctest::Approx(0.5));
  CHECK(le.gamma == 0.0);
  CHECK(le.h2.value == Tri::yes);
  CHECK(le.h3.value == Tri::yes);

  const HypothesisReport ken = check_hypotheses(with_source(SourceKind::one_minus_s_p, 0.0, 0.5), 0.5, 1.0);
  CHECK(ken.h1.value == Tri::yes);
  CHECK(ken.q == 0.0);
  CHECK(ken.h1_star.value == Tri::no);

  Problem logistic = with_source(SourceKind::logistic);
  logistic.weight.value = 2.0;
  CHECK(check_hypotheses(logistic, 4.0, 1.0).h2.value == Tri::no);
}

TEST_CASE("slope supremum") {
  CHECK(sup_slope_lambda(Source{SourceKind::identity}) == doctest::Approx(0.0));
  CHECK(sup_slope_lambda(Source{SourceKind::log_s}) == doctest::Approx(1.0));
  CHECK(sup_slope_lambda(Source{SourceKind::saturable}) == doctest::Approx(0.25));
}

TEST_CASE("s^(alpha-1) f(s) is strictly decreasing for the audited exponents") {
  struct Case {
    Source src;
    double alpha;
  };
  const Case cases[] = {{{SourceKind::one}, 0.5},
                        {{SourceKind::power_q, 0.5}, 0.25},
                        {{SourceKind::power_sum, 0.6, 0.5}, 0.2},
                        {{SourceKind::power_q, 0.3}, 0.35 * 0.9}};
  for (const auto& c : cases) {
    Problem pr;
    pr.source = c.src;
    double prev = kInf;
    for (int i = 0; i < 1000; ++i) {
      const double s = std::pow(10.0, -6.0 + 7.0 * i / 999.0);
      const double g = std::pow(s, c.alpha - 1.0) * eval_source(pr, {0.5, 0.5}, s, 0.0);
      CHECK(g < prev);
      prev = g;
    }
  }
}

TEST_CASE("distance weight with gamma + omega = 1 is certified 1-concave") {
  Problem pr;
  pr.weight.kind = WeightKind::distance_power;
  pr.weight.value = 1.0;
  pr.weight.gamma = 0.0;
  pr.weight.omega = 1.0;
  pr.weight.theta = 1.0;
  const HypothesisReport rep = check_hypotheses(pr, 1.0, 1.0);
  CHECK(rep.theta_defect <= 1e-12);
  CHECK(rep.h1_prime.value == Tri::yes);
}

TEST_CASE("catalog names round-trip") {
  for (auto k : {SourceKind::one, SourceKind::power_q, SourceKind::logistic, SourceKind::power_sum})
    CHECK(source_kind_from_string(to_string(k)) == k);
  for (auto k : {WeightKind::constant, WeightKind::ramp_bump, WeightKind::smoothed_bang_bang})
    CHECK(weight_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(source_kind_from_string("cubic"), Error);
}
