#pragma once

#include <iosfwd>

namespace cvlab::cli {

/// Runs one command line. Returns 0 when everything passed or was not
/// applicable, 1 when a check failed, 2 for usage and execution errors.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvlab::cli
