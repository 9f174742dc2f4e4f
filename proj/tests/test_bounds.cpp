#include <cmath>
#include <random>

#include "concavlab/bounds.hpp"
#include "concavlab/errors.hpp"
#include "doctest.h"

using namespace cvlab;

TEST_CASE("exponent formulas on worked parameter sets") {
  CHECK(alpha_exponent(0, 0, 1, kInf, AlphaVariant::lane_emden) == doctest::Approx(0.5));
  CHECK(alpha_exponent(0, 0.5, 1, kInf, AlphaVariant::constant_weight) == doctest::Approx(0.4));
  CHECK(alpha_exponent(0.5, 0, 1, kInf, AlphaVariant::constant_weight) == doctest::Approx(0.25));
  CHECK(alpha_exponent(0, 0, 2, 1, AlphaVariant::torsion) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("exponent ranges") {
  CHECK_THROWS_AS(alpha_exponent(1.0, 0, 1, kInf, AlphaVariant::lane_emden), Error);
  CHECK_THROWS_AS(alpha_exponent(0, 0.6, 2, kInf, AlphaVariant::lane_emden), Error);
  CHECK_THROWS_AS(alpha_exponent(0, 0.5, 1, 1.5, AlphaVariant::lane_emden), Error);
  CHECK_THROWS_AS(alpha_exponent(0, 0.5, 2, kInf, AlphaVariant::torsion), Error);
  try {
    alpha_exponent(0, 0.5, 1, 1.5, AlphaVariant::lane_emden);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::range_violation);
    CHECK(std::string(e.what()).find("theta") != std::string::npos);
  }
}

TEST_CASE("lane-emden exponent is nondecreasing in theta with the constant-weight limit") {
  for (double q : {0.0, 0.3, 0.7})
    for (double gamma : {0.0, 0.2, 0.45})
      for (double beta : {1.0, 1.5, 2.0}) {
        if (beta * gamma >= 1.0) continue;
        double prev = -1.0, th0 = 1.0 / (1.0 - beta * gamma);
        for (int i = 0; i < 40; ++i) {
          double th = th0 * std::pow(1.3, i);
          double a = alpha_exponent(q, gamma, beta, th, AlphaVariant::lane_emden);
          CHECK(a >= prev - 1e-15);
          prev = a;
        }
        CHECK(alpha_exponent(q, gamma, beta, 1e12, AlphaVariant::lane_emden) ==
              doctest::Approx(alpha_exponent(q, gamma, beta, kInf, AlphaVariant::constant_weight)));
      }
}

TEST_CASE("admissibility window") {
  CHECK(admissible_alpha_bound(0, 0, 2) == doctest::Approx(0.5));
  CHECK(admissible_alpha_bound(0.5, 0, 1) == doctest::Approx(0.4));
  CHECK(alpha_exponent(0.5, 0, 1, kInf, AlphaVariant::constant_weight) < admissible_alpha_bound(0.5, 0, 1));
}

TEST_CASE("log-concavity right-hand sides") {
  CHECK(log_concavity_rhs(1, 0, 0.1, LogVariant::general) == doctest::Approx(-std::exp(1.0) * 0.1));
  CHECK(log_concavity_rhs(2, 5, 0.1, LogVariant::eigen) == doctest::Approx(-2 * std::exp(1.0) * 0.1));
  CHECK(log_concavity_rhs(1, 1, 0.0, LogVariant::general) == 0.0);
  CHECK(log_concavity_rhs(1, 1, 0.0, LogVariant::product_osc, 3.0) == 0.0);
  CHECK(log_concavity_rhs(0.5, 0.25, 0.04, LogVariant::product_theta, 2.0, 2.0) ==
        doctest::Approx(-0.5 * std::exp(1.125) * 2.0 * 0.2));
}

TEST_CASE("quantitative modes") {
  BoundParams p;
  p.m = 1;
  p.M = 1;
  p.sup_norm_u_inf = 1;
  CHECK(quantitative_rhs(p, QuantMode::oscillation).rhs == 0.0);

  p.theta = 1;
  p.sup_neg_theta_defect = 0.3;
  p.sup_norm_u_inf = 7.0;
  CHECK(quantitative_rhs(p, QuantMode::theta).rhs == doctest::Approx(-0.2));

  BoundParams r;
  r.m = 1;
  r.M = 1.1;
  r.osc_a = 0.1;
  r.sup_norm_u_inf = 1;
  CHECK(quantitative_rhs(r, QuantMode::rough).rhs == doctest::Approx(-0.21));
}

TEST_CASE("validity gates") {
  BoundParams p;
  p.theta = 2;
  p.m = 1;
  p.M = 3;
  p.sup_norm_u_inf = 1;
  p.sup_neg_theta_defect = 0.1;
  CHECK_THROWS_AS(quantitative_rhs(p, QuantMode::theta), Error);
  BoundReport exp = quantitative_rhs(p, QuantMode::theta, true);
  CHECK(exp.experimental);
  p.M = 1.2;
  CHECK_NOTHROW(quantitative_rhs(p, QuantMode::theta));
  // log 2 / log 1.2 is about 3.8.
  CHECK_NOTHROW(quantitative_rhs(p, QuantMode::elliptic_theta));
  p.theta = 4;
  CHECK_THROWS_AS(quantitative_rhs(p, QuantMode::elliptic_theta), Error);
}

TEST_CASE("oscillation-type bound at the argmin") {
  BoundParams p;
  p.q = 0.5;
  p.sup_norm_u_inf = 0.04;
  p.a_inf_rho = 1.0;
  p.a_sup_rho = 1.1;
  p.inf_concavity_a = -0.05;
  p.xi = {0.3, -0.1};
  p.v1 = 0.2;
  p.v3 = 0.3;
  p.lambda = 0.5;
  BoundReport r = quantitative_rhs(p, QuantMode::directional);
  const double xi2 = 0.1, q = 0.5;
  double mm = 2 / (1 - q) * ((1 + q) / (1 - q) * xi2 + (1 - q) / 2 * 1.0);
  double MM = 2 / (1 - q) * ((1 + q) / (1 - q) * xi2 + (1 - q) / 2 * 1.1);
  CHECK(r.constants["m_xi"] == doctest::Approx(mm));
  CHECK(r.constants["epsilon"] == doctest::Approx(0.1));
  CHECK(r.rhs == doctest::Approx(std::pow(0.04, 0.25) / mm * (-0.05 - MM / mm * 0.1)));
  CHECK(r.constants["sigma"] == doctest::Approx(0.25 * mm / 0.0625));
}

TEST_CASE("right-hand sides are nonpositive and vanish with the defect") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 500; ++i) {
    BoundParams p;
    p.q = 0.9 * U(rng);
    p.m = 0.5 + U(rng);
    p.M = p.m * (1 + 0.1 * U(rng));
    p.osc_a = p.M - p.m;
    p.osc_a2 = p.M * p.M - p.m * p.m;
    p.theta = 1 + U(rng);
    p.sup_norm_u_inf = U(rng);
    p.sup_neg_theta_defect = U(rng) < 0.2 ? 0.0 : U(rng);
    p.a_inf_rho = p.m;
    p.a_sup_rho = p.M;
    p.inf_concavity_a = -U(rng);
    for (auto mode : {QuantMode::oscillation, QuantMode::rough, QuantMode::theta, QuantMode::directional})
      CHECK(quantitative_rhs(p, mode).rhs <= 0.0);
    if (p.sup_neg_theta_defect == 0.0) CHECK(quantitative_rhs(p, QuantMode::theta).rhs == 0.0);
  }
}

TEST_CASE("boundary lower bounds") {
  BoundParams p;
  p.h1_certified = true;
  p.beta = 2;
  CHECK(boundary_lower_bound(p, BoundaryKind::corner, {}, 0.1).exponent == doctest::Approx(2.0));
  p.omega = 1;
  CHECK(boundary_lower_bound(p, BoundaryKind::torsion_corner, {}, 0.1).exponent == doctest::Approx(3.0));
  auto dom = build_discretization(DomainSpec::unit_square(), 1.0 / 16);
  Eigenpair eig = principal_eigenpair(dom);
  p.k = 1;
  Point x{0.5, 0.5};
  BoundaryBound b = boundary_lower_bound(p, BoundaryKind::interior_t0, x, 0.3, &eig);
  CHECK(b.constant == doctest::Approx(1.0));
  CHECK(b.value == doctest::Approx(std::exp(-eig.lambda * 0.3) * 0.3 * GridSampler(eig.phi)(x)));
  p.h1_certified = false;
  CHECK_THROWS_AS(boundary_lower_bound(p, BoundaryKind::interior_t0, x, 0.3, &eig), Error);
}
