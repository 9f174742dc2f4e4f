#include <cmath>
#include <random>

#include "concavlab/errors.hpp"
#include "concavlab/operators.hpp"
#include "doctest.h"

using namespace cvlab;

TEST_CASE("laplacian of quadratics and products of sines") {
  auto sq = build_discretization(DomainSpec::unit_square(), 1.0 / 16);
  auto quad = [](Point p) { return p.x * p.x + p.y * p.y; };
  Field u = Field::sample(sq, quad);
  Field out = Field::zeros(sq);
  std::function<double(Point)> bc = quad;
  apply_laplacian(*sq, u.values, out.values, &bc);
  for (double v : out.values) CHECK(v == doctest::Approx(4.0).epsilon(1e-9));

  Field s = Field::sample(sq, [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); });
  Field ls = apply_laplacian(s);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(ls.values[k] == doctest::Approx(-2 * M_PI * M_PI * s.values[k]).epsilon(0.01));
}

TEST_CASE("stencil is exact on affine data over curved domains") {
  for (auto spec : {DomainSpec::disk(1.0), DomainSpec::ellipse(1.5, 0.8)}) {
    auto dom = build_discretization(spec, 0.07);
    std::function<double(Point)> aff = [](Point p) { return 0.3 + 1.7 * p.x - 0.4 * p.y; };
    Field u = Field::sample(dom, aff);
    Field out = Field::zeros(dom);
    apply_laplacian(*dom, u.values, out.values, &aff);
    for (double v : out.values) CHECK(std::abs(v) < 1e-8);
  }
}

TEST_CASE("laplacian is symmetric and negative definite") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (auto spec : {DomainSpec::unit_square(), DomainSpec::disk(1.0), DomainSpec::ellipse(2, 1)}) {
    auto dom = build_discretization(spec, 0.05);
    for (int rep = 0; rep < 5; ++rep) {
      Field f = Field::zeros(dom), g = Field::zeros(dom);
      for (auto& v : f.values) v = nd(rng);
      for (auto& v : g.values) v = nd(rng);
      Field lf = apply_laplacian(f), lg = apply_laplacian(g);
      double a = 0, b = 0, c = 0, scale = 0;
      for (std::size_t k = 0; k < f.size(); ++k) {
        a += lf.values[k] * g.values[k];
        b += f.values[k] * lg.values[k];
        c += f.values[k] * lf.values[k];
        scale += std::abs(lf.values[k] * g.values[k]);
      }
      CHECK(std::abs(a - b) <= 1e-12 * scale);
      CHECK(c < 0.0);
    }
  }
}

TEST_CASE("shifted poisson solve recovers the product of sines") {
  auto sq = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  const double tau = 0.01, h = sq->h();
  double lam_h = 8.0 / (h * h) * std::pow(std::sin(M_PI * h / 2), 2);
  auto s = [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); };
  Field rhs = Field::sample(sq, [&](Point p) { return (1 + tau * lam_h) * s(p); });
  Field u = solve_shifted_poisson(tau, rhs);
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(u.values[k] == doctest::Approx(s(sq->interior_point(k))).epsilon(1e-8));

  Field rhs2 = Field::sample(sq, [&](Point p) { return (1 + 2 * tau * M_PI * M_PI) * s(p); });
  Field u2 = solve_shifted_poisson(tau, rhs2);
  double err = 0;
  for (std::size_t k = 0; k < u2.size(); ++k) err = std::max(err, std::abs(u2.values[k] - s(sq->interior_point(k))));
  CHECK(err < 1e-3);
}

TEST_CASE("conjugate gradient reports its residual and stalls loudly") {
  auto dk = build_discretization(DomainSpec::disk(1.0), 0.05);
  Field rhs = Field::sample(dk, [](Point p) { return 1.0 + p.x; });
  std::vector<double> x(rhs.size(), 0.0);
  auto st = solve_shifted(*dk, {}, 0.5, rhs.values, x);
  CHECK(st.residual <= 1e-10);
  std::fill(x.begin(), x.end(), 0.0);
  bool threw = false;
  try {
    solve_shifted(*dk, {}, 0.5, rhs.values, x, CgOptions{1e-14, 2, false});
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::max_iterations;
  }
  CHECK(threw);
}

TEST_CASE("principal eigenpairs of the square and the disk") {
  auto sq = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  auto e = principal_eigenpair(sq);
  const double h = sq->h();
  double exact_discrete = 8.0 / (h * h) * std::pow(std::sin(M_PI * h / 2), 2);
  CHECK(e.lambda == doctest::Approx(exact_discrete).epsilon(1e-9));
  CHECK(std::abs(e.lambda - 2 * M_PI * M_PI) < 0.01 * 2 * M_PI * M_PI);
  CHECK(e.phi.min() > 0.0);
  CHECK(e.phi.max() == doctest::Approx(1.0));
  CHECK(e.residual <= 1e-8 * e.lambda);

  auto dk = build_discretization(DomainSpec::disk(1.0), 1.0 / 32);
  auto ed = principal_eigenpair(dk);
  CHECK(std::abs(ed.lambda - 5.783185962946784) < 0.02 * 5.783185962946784);
  CHECK(ed.phi.min() > 0.0);
}

TEST_CASE("eigenvalue error is second order on the square") {
  double errs[2];
  int i = 0;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    auto e = principal_eigenpair(build_discretization(DomainSpec::unit_square(), h));
    errs[i++] = std::abs(e.lambda - 2 * M_PI * M_PI);
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("bilinear sampler reproduces bilinear data and vanishes near the boundary") {
  auto sq = build_discretization(DomainSpec::unit_square(), 0.125);
  Field f = Field::sample(sq, [](Point p) { return p.x * (1 - p.x) + 0 * p.y; });
  GridSampler g(f);
  CHECK(g({0.5, 0.5}) == doctest::Approx(0.25));
  CHECK(std::abs(g({0.0, 0.5})) < 1e-12);
  Field lin = Field::sample(sq, [](Point p) { return p.x * p.y; });
  GridSampler gl(lin);
  CHECK(gl({0.31, 0.47}) == doctest::Approx(0.31 * 0.47));
  Point gr = gl.gradient({0.31, 0.47});
  CHECK(gr.x == doctest::Approx(0.47));
  CHECK(gr.y == doctest::Approx(0.31));
}
