#pragma once

#include <array>
#include <vector>

#include "concavlab/operators.hpp"

namespace cvlab {

/// k_n = n (n + 3) / (4 (n + 1)).
double hyers_ulam_constant(int n);

struct HyersUlamCertificate {
  int n = 1;
  double delta = 0.0;     // largest measured concavity defect of f
  double k_n = 0.0;
  double distance = 0.0;  // ||f - g||_inf
  bool holds = false;     // distance <= k_n delta (up to 1e-12)
};

/// Least concave majorant of a 1-D section and its shifted approximant.
struct Envelope1D {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> majorant;  // at the sample abscissae
  std::vector<double> g;         // majorant - distance
  std::vector<int> hull;         // indices of the hull vertices
  HyersUlamCertificate certificate;

  /// Piecewise-linear g at any x in the sample range.
  double operator()(double x) const;
};

/// Abscissae must be strictly increasing with at least two samples.
Envelope1D concave_approximation(const std::vector<double>& x, const std::vector<double>& f);

struct Plane {
  double a = 0.0, b = 0.0, c = 0.0;  // z = a x + b y + c
  std::array<int, 3> vertices{};
  double operator()(Point p) const { return a * p.x + b * p.y + c; }
};

/// Least concave majorant of a planar field over the hull of its interior nodes.
struct Envelope2D {
  Field majorant;
  Field g;
  std::vector<Plane> faces;  // upper faces of the lifted hull
  double shift = 0.0;        // half the largest gap between majorant and f
  HyersUlamCertificate certificate;

  /// Minimum over the face planes minus the shift, valid on the hull of the nodes.
  double operator()(Point p) const;
};

Envelope2D concave_approximation(const Field& f);

}  // namespace cvlab
