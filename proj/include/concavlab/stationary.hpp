#pragma once

#include <string>
#include <vector>

#include "concavlab/operators.hpp"
#include "concavlab/problem.hpp"

namespace cvlab {

struct StationaryOptions {
  double damping = 0.5;
  double tol = 1e-10;
  long max_iter = 10000;
};

struct StationaryResult {
  Field v;
  long iterations = 0;
  double change = 0.0;    // last sup-norm update
  double residual = 0.0;  // ||(-Delta_h) v - b(v)||_inf
  std::vector<std::string> warnings;
};

/// Positive solution of -Delta_h v = b(x, v, T*) with T* the truncation time.
StationaryResult solve_stationary(const Problem& problem, DomainPtr domain, const StationaryOptions& opts = {});

}  // namespace cvlab
