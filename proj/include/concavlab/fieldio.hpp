#pragma once

#include <filesystem>

#include "concavlab/operators.hpp"

namespace cvlab {

/// CSV with header "x,y,value", one row per interior node.
void write_field_csv(const Field& f, const std::filesystem::path& path);
/// Rows are matched to interior nodes of `domain`; missing nodes throw IoError.
Field read_field_csv(DomainPtr domain, const std::filesystem::path& path, double time = 0.0);

/// Binary dump: magic "CVLF", then float64 h, nx, ny, time, then nx*ny float64
/// values in row-major order (j outer), 0 at non-interior nodes. Little-endian.
void write_field_binary(const Field& f, const std::filesystem::path& path);

struct BinaryHeader {
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  double time = 0.0;
};
BinaryHeader read_binary_header(const std::filesystem::path& path);
/// The grid of `domain` must match the header.
Field read_field_binary(DomainPtr domain, const std::filesystem::path& path);

}  // namespace cvlab
