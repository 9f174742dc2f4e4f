#include <cmath>
#include <random>

#include "concavlab/audit.hpp"
#include "concavlab/envelope.hpp"
#include "concavlab/errors.hpp"
#include "doctest.h"

using namespace cvlab;

TEST_CASE("Hyers-Ulam constants") {
  CHECK(hyers_ulam_constant(1) == doctest::Approx(0.5));
  CHECK(hyers_ulam_constant(2) == doctest::Approx(5.0 / 6.0));
  CHECK_THROWS_AS(hyers_ulam_constant(0), Error);
}

TEST_CASE("absolute-value section meets the bound with equality") {
  std::vector<double> x, f;
  for (int i = 0; i <= 64; ++i) {
    x.push_back(i / 64.0);
    f.push_back(std::abs(i / 64.0 - 0.5));
  }
  Envelope1D env = concave_approximation(x, f);
  for (double m : env.majorant) CHECK(m == doctest::Approx(0.5));
  for (double g : env.g) CHECK(g == doctest::Approx(0.25));
  CHECK(env.certificate.distance == doctest::Approx(0.25));
  CHECK(env.certificate.delta == doctest::Approx(0.5));
  CHECK(env.certificate.k_n * env.certificate.delta == doctest::Approx(0.25));
  CHECK(env.certificate.holds);
}

TEST_CASE("concave sections are reproduced") {
  std::vector<double> x, f;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(i / 40.0);
    f.push_back(std::sin(M_PI * i / 40.0));
  }
  Envelope1D env = concave_approximation(x, f);
  CHECK(env.certificate.distance < 1e-14);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(env.g[i] == doctest::Approx(f[i]));
  CHECK(env(0.3125) == doctest::Approx(0.5 * (env.g[12] + env.g[13])));
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(concave_approximation(std::vector<double>{0.0}, std::vector<double>{1.0}), Error);
  try {
    concave_approximation(std::vector<double>{0.0}, std::vector<double>{1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hull_degenerate);
  }
}

TEST_CASE("planar envelope of a concave field") {
  auto dom = build_discretization(DomainSpec::disk(1.0), 1.0 / 8);
  Field f = Field::sample(dom, [](Point x) { return 1.0 - dot(x, x); });
  Envelope2D env = concave_approximation(f);
  CHECK(env.certificate.distance < 1e-10);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(env.g.values[k] == doctest::Approx(f.values[k]).epsilon(1e-9));

  Field aff = Field::sample(dom, [](Point x) { return 0.5 + x.x - 2 * x.y; });
  Envelope2D ea = concave_approximation(aff);
  CHECK(ea.certificate.distance < 1e-10);
}

TEST_CASE("perturbed concave fields satisfy the Hyers-Ulam bound") {
  auto dom = build_discretization(DomainSpec::unit_square(), 1.0 / 12);
  std::mt19937_64 rng(20260);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int holds = 0;
  for (int draw = 0; draw < 50; ++draw) {
    double amp = 0.02 + 0.2 * U(rng), cx = U(rng), cy = U(rng), w = 0.05 + 0.2 * U(rng);
    Field f = Field::sample(dom, [&](Point x) {
      double base = 1.0 - (x.x - 0.5) * (x.x - 0.5) - 2 * (x.y - 0.4) * (x.y - 0.4);
      double r2 = (x.x - cx) * (x.x - cx) + (x.y - cy) * (x.y - cy);
      return base + amp * std::exp(-r2 / (w * w));
    });
    Envelope2D env = concave_approximation(f);
    CHECK(env.certificate.distance <= env.certificate.k_n * env.certificate.delta + 1e-12);
    holds += env.certificate.holds;
    for (std::size_t k = 0; k < f.size(); ++k)
      CHECK(std::abs(env.g.values[k] - f.values[k]) <= env.certificate.distance + 1e-12);
    // The approximant is concave wherever it is defined.
    std::uniform_real_distribution<double> X(1.0 / 12, 11.0 / 12);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      Point a{X(rng), X(rng)}, b{X(rng), X(rng)};
      worst = std::min(worst, concavity_value([&](Point p) { return env(p); }, a, b, U(rng)));
    }
    CHECK(worst >= -1e-12);
  }
  CHECK(holds == 50);
}
