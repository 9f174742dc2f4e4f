#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvlab {

enum class ErrorCode {
  invalid_argument,
  no_interior_nodes,
  non_convex_polygon,
  vertex_ambiguity,
  not_on_boundary,
  negative_state,
  unbounded,
  max_iterations,
  no_convergence,
  hypothesis_violated,
  state_blowup,
  out_of_domain,
  nonpositive_value,
  empty_sampler,
  hull_degenerate,
  range_violation,
  validity_violation,
  no_stationary_limit,
  io_error,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace cvlab
