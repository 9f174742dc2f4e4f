#include "concavlab/parabolic.hpp"

#include <algorithm>
#include <cmath>

#include "concavlab/errors.hpp"

namespace cvlab {

namespace {

constexpr double kBlowup = 1e6;
constexpr double kClip = -1e-12;

bool semi_implicit(const Problem& p) {
  return p.source.kind == SourceKind::logistic || p.source.kind == SourceKind::log_s;
}

}  // namespace

bool needs_seed(const Problem& p) {
  if (p.u0.kind == InitialKind::subsolution_seed) return true;
  if (p.u0.kind != InitialKind::zero) return false;
  return !(p.source.s_independent() || p.source.kind == SourceKind::one_minus_s_p);
}

TimeGrid TimeGrid::rescaled(double start, double T, double beta, double dt, int substeps) {
  require(T > start && start >= 0.0, ErrorCode::invalid_argument, "time grid needs 0 <= start < T");
  require(dt > 0.0 && substeps >= 1 && beta > 0.0, ErrorCode::invalid_argument, "bad time grid parameters");
  TimeGrid g;
  g.start = start;
  g.substeps = substeps;
  const int count = std::max(1, static_cast<int>(std::ceil((T - start) / (dt * substeps) - 1e-9)));
  const double a = std::pow(start, 1.0 / beta), b = std::pow(T, 1.0 / beta);
  for (int k = 1; k <= count; ++k) {
    double tau = a + (b - a) * k / count;
    g.snapshots.push_back(k == count ? T : std::pow(tau, beta));
  }
  return g;
}

double default_seed_time(double dt, double T) { return std::min(10.0 * dt, 0.01 * T); }

Field subsolution(const HypothesisReport& hyp, const Eigenpair& eig, double t) {
  require(hyp.h1.value == Tri::yes, ErrorCode::hypothesis_violated, "subsolution needs (H1)");
  const double q = hyp.q, gamma = hyp.gamma;
  const double C = std::pow((1.0 - q) * hyp.k / (1.0 + gamma), 1.0 / (1.0 - q));
  const double scale = C * std::exp(-eig.lambda * t) * std::pow(t, (1.0 + gamma) / (1.0 - q));
  Field w = eig.phi;
  for (double& v : w.values) v *= scale;
  w.time = t;
  return w;
}

Field seed_from_subsolution(const Problem& problem, DomainPtr domain, double t0, const Eigenpair& eig) {
  require(t0 > 0.0, ErrorCode::invalid_argument, "seed time must be positive");
  require(eig.phi.domain == domain, ErrorCode::invalid_argument, "eigenpair belongs to another grid");
  HypothesisReport hyp = check_hypotheses(problem, 0.5, std::max(1.0, t0));
  return subsolution(hyp, eig, t0);
}

Field advance(const Problem& problem, const Field& u, double dt, StepStats* stats) {
  const DiscretizedDomain& dom = *u.domain;
  const std::size_t n = u.size();
  const double t_new = u.time + dt;
  std::vector<double> rhs(n), shift(n, 1.0);
  const bool implicit = semi_implicit(problem);
  for (std::size_t k = 0; k < n; ++k) {
    require(u.values[k] >= kClip, ErrorCode::negative_state, "state is negative before the step");
    double s = std::max(0.0, u.values[k]);
    Point x = dom.interior_point(k);
    double b = eval_source(problem, x, s, t_new);
    double dminus = 0.0;
    if (implicit && s > 0.0) dminus = std::max(0.0, -eval_source_ds(problem, x, s, t_new));
    rhs[k] = s + dt * (b + dminus * s);
    shift[k] = 1.0 + dt * dminus;
  }
  Field out{u.domain, u.values, t_new};
  for (double& v : out.values) v = std::max(v, 0.0);
  SolveStats st = solve_shifted(dom, shift, dt, rhs, out.values, CgOptions{1e-12, 0, true});
  double min_inc = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    double& v = out.values[k];
    if (v < 0.0) {
      require(v >= kClip, ErrorCode::negative_state, "step produced a negative state");
      v = 0.0;
    }
    require(std::isfinite(v) && v <= kBlowup, ErrorCode::state_blowup, "state exceeded 1e6");
    min_inc = std::min(min_inc, v - u.values[k]);
  }
  if (stats) {
    stats->cg_iterations = st.iterations;
    stats->min_increment = min_inc;
  }
  return out;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  for (const auto& f : snapshots) t.push_back(f.time);
  return t;
}

Trajectory solve_trajectory(const Problem& problem, DomainPtr domain, const TimeGrid& grid,
                            const TrajectoryOptions& opts) {
  problem.validate();
  require(!grid.snapshots.empty(), ErrorCode::invalid_argument, "time grid has no snapshots");
  Trajectory traj;
  traj.domain = domain;
  traj.h = domain->h();
  traj.tau_mono = 10.0 * traj.h * traj.h;

  Field u = Field::zeros(domain, grid.start);
  if (needs_seed(problem)) {
    require(grid.start > 0.0, ErrorCode::invalid_argument, "seeded runs start at a positive time");
    Eigenpair eig = principal_eigenpair(domain);
    u = seed_from_subsolution(problem, domain, grid.start, eig);
    for (double& v : u.values) v *= opts.seed_scale;
    traj.seeded = true;
  } else if (problem.u0.kind == InitialKind::samples) {
    require(problem.u0.samples.size() == domain->interior_count(), ErrorCode::invalid_argument,
            "initial samples do not match the grid");
    u.values = problem.u0.samples;
  } else if (problem.u0.kind == InitialKind::principal_eigenfunction) {
    Eigenpair eig = principal_eigenpair(domain);
    u.values = eig.phi.values;
    for (double& v : u.values) v *= problem.u0.amplitude;
  }
  traj.snapshots.push_back(u);

  double t = grid.start;
  for (double target : grid.snapshots) {
    require(target > t, ErrorCode::invalid_argument, "snapshot times must increase");
    const double dt = (target - t) / grid.substeps;
    for (int s = 0; s < grid.substeps; ++s) {
      StepStats st;
      u = advance(problem, u, dt, &st);
      traj.cg_iterations += st.cg_iterations;
      ++traj.steps;
      if (st.min_increment < -traj.tau_mono) traj.monotone_nondecreasing = false;
    }
    u.time = target;
    t = target;
    traj.snapshots.push_back(u);
  }
  return traj;
}

std::vector<double> distances_to(const Trajectory& traj, const Field& ref) {
  std::vector<double> d;
  for (const auto& f : traj.snapshots) {
    double m = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f.values[k] - ref.values[k]));
    d.push_back(m);
  }
  return d;
}

}  // namespace cvlab
