#pragma once

#include <optional>
#include <vector>

#include "concavlab/operators.hpp"
#include "concavlab/problem.hpp"

namespace cvlab {

/// Snapshot times after the start time, with a fixed number of backward
/// Euler substeps per snapshot interval.
struct TimeGrid {
  double start = 0.0;
  std::vector<double> snapshots;
  int substeps = 4;

  /// Snapshots evenly spaced in t^(1/beta) on (start, T], about dt per substep.
  static TimeGrid rescaled(double start, double T, double beta, double dt, int substeps = 4);
  static TimeGrid uniform(double start, double T, double dt, int substeps = 4) { return rescaled(start, T, 1.0, dt, substeps); }
};

/// True when the run starts from the subsolution seed at a positive time.
bool needs_seed(const Problem& p);

/// Seed time used for zero initial data: min(10 dt, T / 100).
double default_seed_time(double dt, double T);

/// Lower barrier C e^{-lambda1 t} t^{(1+gamma)/(1-q)} phi1 with C from (H1).
Field subsolution(const HypothesisReport& hyp, const Eigenpair& eig, double t);
Field seed_from_subsolution(const Problem& problem, DomainPtr domain, double t0, const Eigenpair& eig);

struct StepStats {
  long cg_iterations = 0;
  double min_increment = 0.0;  // min over nodes of u_new - u_old
};

/// One semi-implicit backward Euler step from t to t + dt.
Field advance(const Problem& problem, const Field& u, double dt, StepStats* stats = nullptr);

struct Trajectory {
  DomainPtr domain;
  std::vector<Field> snapshots;  // the first entry is the start state
  double h = 0.0;
  double tau_mono = 0.0;
  bool monotone_nondecreasing = true;
  bool seeded = false;
  long steps = 0;
  long cg_iterations = 0;

  std::vector<double> times() const;
};

struct TrajectoryOptions {
  double seed_scale = 1.0;  // multiplies the subsolution seed
};

/// Integrates from the grid start time. Zero data for a source that
/// vanishes at s = 0 is replaced by the subsolution seed.
Trajectory solve_trajectory(const Problem& problem, DomainPtr domain, const TimeGrid& grid,
                            const TrajectoryOptions& opts = {});

/// Sup-norm distance of each snapshot to a reference field.
std::vector<double> distances_to(const Trajectory& traj, const Field& ref);

}  // namespace cvlab
