#include <cmath>
#include <numbers>

#include "concavlab/errors.hpp"
#include "concavlab/parabolic.hpp"
#include "concavlab/stationary.hpp"
#include "doctest.h"

using namespace cvlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t nearest(const DiscretizedDomain& dom, Point p) {
  std::size_t best = 0;
  double d = kInf;
  for (std::size_t k = 0; k < dom.interior_count(); ++k) {
    const double e = norm(dom.interior_point(k) - p);
    if (e < d) d = e, best = k;
  }
  return best;
}

Problem heat() {
  Problem pr;
  pr.weight.value = 0.0;
  return pr;
}

Field sines(DomainPtr dom) {
  return Field::sample(dom, [](Point p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); });
}

}  // namespace

TEST_CASE("time grids") {
  const TimeGrid g = TimeGrid::rescaled(0.01, 2.0, 2.0, 1.0 / 64, 4);
  REQUIRE(!g.snapshots.empty());
  CHECK(g.snapshots.back() == 2.0);
  double prev = g.start;
  for (double t : g.snapshots) {
    CHECK(t > prev);
    prev = t;
  }
  CHECK(default_seed_time(0.01, 2.0) == doctest::Approx(0.02));
  CHECK(default_seed_time(0.01, 5.0) == doctest::Approx(0.05));
  CHECK_THROWS_AS(TimeGrid::rescaled(1.0, 0.5, 1.0, 0.1), Error);
}

TEST_CASE("implicit heat step contracts the first mode") {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  Field u = sines(dom);
  const double dt = 0.01;
  const Field v = advance(heat(), u, dt);
  CHECK(v.max() / u.max() == doctest::Approx(1.0 / (1.0 + 2.0 * kPi * kPi * dt)).epsilon(0.01));
  CHECK(v.max_abs() <= u.max_abs());
}

TEST_CASE("first torsion step from zero") {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  Problem pr;
  const double dt = 1e-3;
  const Field u = advance(pr, Field::zeros(dom), dt);
  CHECK(u.values[nearest(*dom, {0.5, 0.5})] == doctest::Approx(dt).epsilon(0.01));
  const Field direct = solve_shifted_poisson(dt, Field::sample(dom, [&](Point) { return dt; }));
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(u.values[k] == doctest::Approx(direct.values[k]).epsilon(1e-8));
}

TEST_CASE("heat trajectory follows the analytic decay") {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  Problem pr = heat();
  pr.u0.kind = InitialKind::samples;
  pr.u0.samples = sines(dom).values;
  const Trajectory traj = solve_trajectory(pr, dom, TimeGrid::uniform(0.0, 0.05, 1.0 / 2048, 4));
  CHECK(traj.snapshots.back().max() == doctest::Approx(std::exp(-2.0 * kPi * kPi * 0.05)).epsilon(0.01));
  CHECK(!traj.seeded);
}

TEST_CASE("subsolution seed values") {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  const Eigenpair eig = principal_eigenpair(dom);
  const std::size_t c = nearest(*dom, {0.5, 0.5});

  Problem torsion;
  const Field w = seed_from_subsolution(torsion, dom, 0.01, eig);
  CHECK(w.values[c] == doctest::Approx(std::exp(-2.0 * kPi * kPi * 0.01) * 0.01).epsilon(1e-3));

  Problem le;
  le.source = {SourceKind::power_q, 0.5};
  const HypothesisReport hyp = check_hypotheses(le, 1.0, 1.0);
  const double t = 0.1;
  const Field w2 = subsolution(hyp, eig, t);
  CHECK(w2.values[c] == doctest::Approx(0.25 * std::exp(-eig.lambda * t) * t * t).epsilon(1e-12));
  CHECK(subsolution(hyp, eig, 0.0).max_abs() == 0.0);
  CHECK_THROWS_AS(seed_from_subsolution(le, dom, 0.0, eig), Error);

  const double eps = 1e-6;
  const Field w3 = subsolution(hyp, eig, t + eps);
  const Field lap = apply_laplacian(w2);
  for (std::size_t k = 0; k < w2.size(); ++k) {
    const double wt = (w3.values[k] - w2.values[k]) / eps;
    const double b = eval_source(le, dom->interior_point(k), w2.values[k], t);
    CHECK(wt - lap.values[k] <= b + 1e-8);
  }

  Problem logistic;
  logistic.source.kind = SourceKind::logistic;
  logistic.weight.value = -1.0;
  CHECK_THROWS_AS(subsolution(check_hypotheses(logistic, 1.0, 1.0), eig, 0.1), Error);
}

TEST_CASE("lane-emden runs are seeded, monotone and ordered by their seeds") {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  Problem le;
  le.source = {SourceKind::power_q, 0.5};
  CHECK(needs_seed(le));
  const double dt = 1.0 / 32, T = 0.5;
  const TimeGrid grid = TimeGrid::uniform(default_seed_time(dt, T), T, dt);
  const Trajectory u = solve_trajectory(le, dom, grid);
  const Trajectory v = solve_trajectory(le, dom, grid, {0.5});
  CHECK(u.seeded);
  CHECK(u.monotone_nondecreasing);
  CHECK(u.tau_mono == doctest::Approx(10.0 / (32.0 * 32.0)));
  REQUIRE(u.snapshots.size() == v.snapshots.size());
  for (std::size_t i = 0; i < u.snapshots.size(); ++i)
    for (std::size_t k = 0; k < dom->interior_count(); ++k)
      CHECK(v.snapshots[i].values[k] <= u.snapshots[i].values[k] + u.tau_mono);
}

TEST_CASE("torsion trajectory approaches the stationary solution") {
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 32);
  Problem pr;
  CHECK(!needs_seed(pr));
  const Trajectory traj = solve_trajectory(pr, dom, TimeGrid::uniform(0.0, 2.0, 1.0 / 32));
  const std::size_t c = nearest(*dom, {0.5, 0.5});
  CHECK(traj.snapshots.back().values[c] == doctest::Approx(0.0737).epsilon(0.01));
  const Field v = solve_stationary(pr, dom).v;
  const auto dist = distances_to(traj, v);
  for (std::size_t i = 2; i < dist.size(); ++i) CHECK(dist[i] <= dist[i - 1] + 1e-12);
}

TEST_CASE("decay to tiny values and blow-up") {
  Problem pr;
  pr.source.kind = SourceKind::log_s;
  pr.u0.kind = InitialKind::principal_eigenfunction;
  pr.u0.amplitude = 1e4;
  DomainPtr dom = build_discretization(DomainSpec::unit_square(), 1.0 / 16);
  const Trajectory decay = solve_trajectory(pr, dom, TimeGrid::uniform(0.0, 12.0, 0.05));
  CHECK(decay.snapshots.back().max() < 1e-100);
  CHECK(decay.snapshots.back().min() >= 0.0);

  pr.domain = DomainSpec::rectangle(8.0, 8.0);
  pr.u0.amplitude = 10.0;
  DomainPtr big = build_discretization(pr.domain, 0.5);
  try {
    solve_trajectory(pr, big, TimeGrid::uniform(0.0, 20.0, 0.05));
    FAIL("expected blow-up");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::state_blowup);
  }
}
