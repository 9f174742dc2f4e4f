#include "concavlab/errors.hpp"

namespace cvlab {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::no_interior_nodes: return "NoInteriorNodes";
    case ErrorCode::non_convex_polygon: return "NonConvexPolygon";
    case ErrorCode::vertex_ambiguity: return "VertexAmbiguity";
    case ErrorCode::not_on_boundary: return "NotOnBoundary";
    case ErrorCode::negative_state: return "NegativeState";
    case ErrorCode::unbounded: return "Unbounded";
    case ErrorCode::max_iterations: return "MaxIterations";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::hypothesis_violated: return "HypothesisViolated";
    case ErrorCode::state_blowup: return "StateBlowup";
    case ErrorCode::out_of_domain: return "OutOfDomain";
    case ErrorCode::nonpositive_value: return "NonpositiveValue";
    case ErrorCode::empty_sampler: return "EmptySampler";
    case ErrorCode::hull_degenerate: return "HullDegenerate";
    case ErrorCode::range_violation: return "RangeViolation";
    case ErrorCode::validity_violation: return "ValidityViolation";
    case ErrorCode::no_stationary_limit: return "NoStationaryLimit";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace cvlab
