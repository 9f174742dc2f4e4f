#include <cmath>

#include "concavlab/audit.hpp"
#include "concavlab/errors.hpp"
#include "concavlab/stationary.hpp"
#include "doctest.h"

using namespace cvlab;

TEST_CASE("concavity function on closed-form evaluators") {
  auto affine = [](Point x, double t) { return 0.3 + 2 * x.x - x.y + 0.5 * t; };
  CHECK(std::abs(concavity_value(affine, Tuple{{0.1, 0.2}, {0.7, 0.4}, 0.3, 1.1, 0.37})) < 1e-14);

  auto sq = [](Point x, double) { return x.x * x.x; };
  CHECK(concavity_value(sq, Tuple{{0, 0.4}, {1, 0.4}, 0.5, 0.5, 0.5}) == doctest::Approx(-0.25));

  auto prod = [](Point x, double t) { return x.x * t; };
  CHECK(concavity_value(prod, Tuple{{0, 0.3}, {1, 0.3}, 0, 1, 0.5}) == doctest::Approx(-0.25));
}

TEST_CASE("harmonic concavity function") {
  CHECK(*harmonic_concavity_value(3.0, 3.0, 3.0, 0.3) == doctest::Approx(0.0));
  auto recip = [](Point, double t) { return 1.0 / t; };
  for (double lam : {0.1, 0.5, 0.83}) {
    auto v = harmonic_concavity_value(recip, Tuple{{0, 0}, {0, 0}, 0.4, 2.5, lam});
    REQUIRE(v);
    CHECK(std::abs(*v) < 1e-14);
  }
  auto hc = harmonic_concavity_value([](Point x, double) { return x.x; }, Tuple{{1, 0}, {2, 0}, 0, 0, 0.5});
  REQUIRE(hc);
  CHECK(*hc == doctest::Approx(1.0 / 6.0));
  CHECK(*harmonic_concavity_value(0.0, 0.7, 0.0, 0.4) == 0.7);
  CHECK_FALSE(harmonic_concavity_value(-1.0, 0.7, 0.5, 0.5).has_value());
}

TEST_CASE("transform evaluators") {
  auto dom = build_discretization(DomainSpec::unit_square(), 1.0 / 16);
  Field f = Field::sample(dom, [](Point x) { return 1.0 + x.x + 2 * x.y; });
  AuditField id(f, {Transform::power, 1.0, 1.0});
  Point p{0.33, 0.61};
  CHECK(id.value(p, 0) == doctest::Approx(1.0 + 0.33 + 1.22));
  Field e = Field::sample(dom, [](Point) { return std::exp(1.0); });
  AuditField lg(e, {Transform::log, 0.0, 1.0});
  CHECK(lg.value(p, 0) == doctest::Approx(1.0));
  Field z = Field::sample(dom, [](Point x) { return x.x - 0.5; });
  CHECK_THROWS_AS(AuditField(z, {Transform::log, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(AuditField(f, {Transform::power, 1.5, 1.0}), Error);
}

TEST_CASE("square root of the disk torsion passes the audit") {
  Problem p;
  p.domain = DomainSpec::disk(1.0);
  auto dom = build_discretization(p.domain, 1.0 / 32);
  Field v = solve_stationary(p, dom).v;
  AuditField f(v, {Transform::power, 0.5, 1.0});
  for (std::size_t k = 0; k < dom->interior_count(); ++k) {
    Point x = dom->interior_point(k);
    CHECK(f.node_value(k, 0) == doctest::Approx(std::sqrt((1 - dot(x, x)) / 4)).epsilon(1e-3));
  }
  DefectReport r = min_defect(f, AuditMode::space);
  CHECK(r.tau_audit > 0);
  CHECK(r.passes());
  CHECK(quasiconcavity_defect(v, r.tau_audit) == 0.0);
}

TEST_CASE("quadratic slice reaches the hand-computed defect") {
  const double h = 1.0 / 16;
  auto dom = build_discretization(DomainSpec::unit_square(), h);
  Field f = Field::sample(dom, [](Point x) { return x.x * x.x; });
  SamplerConfig cfg;
  cfg.margin = 0.0;
  DefectReport r = min_defect(AuditField(f, {Transform::power, 1.0, 1.0}), AuditMode::space, cfg);
  const double span = 1 - 2 * h;
  CHECK(r.min == doctest::Approx(-0.25 * span * span).epsilon(1e-9));
  CHECK(r.argmin.lambda == doctest::Approx(0.5));
  CHECK(std::abs(r.argmin.x3.x - r.argmin.x1.x) == doctest::Approx(span));
  CHECK_FALSE(r.passes());
}

TEST_CASE("gradients coincide at an interior minimiser") {
  const double h = 1.0 / 32;
  auto dom = build_discretization(DomainSpec::unit_square(), h);
  // Peaks at x = 0.2 and 0.8, trough at 0.5.
  Field f = Field::sample(dom, [](Point x) {
    return 2.0 - (x.y - 0.5) * (x.y - 0.5) + 0.05 * std::cos(2 * M_PI * (x.x - 0.5) / 0.6 + M_PI);
  });
  DefectReport r = min_defect(AuditField(f, {Transform::power, 1.0, 1.0}), AuditMode::space);
  REQUIRE(r.min < -r.tau_audit);
  CHECK(r.gradient_mismatch <= 20 * h);
}

TEST_CASE("empty sampler") {
  auto dom = build_discretization(DomainSpec::unit_square(), 1.0 / 8);
  Field f = Field::sample(dom, [](Point) { return 1.0; });
  SamplerConfig cfg;
  cfg.max_nodes = 0;
  CHECK_THROWS_AS(min_defect(AuditField(f, {}), AuditMode::space, cfg), Error);
  cfg = {};
  cfg.margin = 10.0;
  CHECK_THROWS_AS(min_defect(AuditField(f, {}), AuditMode::space, cfg), Error);
}

TEST_CASE("quasiconcavity of bump fields") {
  auto dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  Field radial = Field::sample(dom, [](Point x) { return std::exp(-8 * ((x.x - .5) * (x.x - .5) + (x.y - .5) * (x.y - .5))); });
  CHECK(quasiconcavity_defect(radial, 1e-6) == 0.0);
  Field two = Field::sample(dom, [](Point x) {
    auto g = [&](double cx) { return std::exp(-((x.x - cx) * (x.x - cx) + (x.y - .5) * (x.y - .5)) / 0.005); };
    return g(0.25) + g(0.75);
  });
  CHECK(quasiconcavity_defect(two, 1e-6) > 0.1);
}

TEST_CASE("harmonic mode on a reciprocal-concave field") {
  auto dom = build_discretization(DomainSpec::unit_square(), 1.0 / 16);
  // 1 / g affine and positive makes g harmonic-concave with HC = 0.
  Field f = Field::sample(dom, [](Point x) { return 1.0 / (1.0 + x.x + 0.5 * x.y); });
  DefectReport r = min_defect(AuditField(f, {}), AuditMode::harmonic);
  CHECK(r.min >= -r.tau_audit);
}
