#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvlab {

struct PropertyCheck {
  std::string name;
  long draws = 0;
  long evaluated = 0;
  long skipped = 0;  // draws outside the side conditions of the inequality
  long violations = 0;
  double worst_margin = 0.0;  // smallest lhs - rhs over evaluated draws
};

struct PropertySuiteReport {
  std::uint64_t seed = 0;
  long draws = 0;
  double tolerance = 0.0;
  std::vector<PropertyCheck> checks;

  bool passed() const;
};

/// Randomized checks of the concavity-function inequalities with a fixed seed.
/// A draw violates when lhs < rhs - tol * max(1, |lhs|, |rhs|).
PropertySuiteReport run_property_suite(std::uint64_t seed, long draws, double tol = 1e-10);

}  // namespace cvlab
