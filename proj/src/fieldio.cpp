#include "concavlab/fieldio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "concavlab/errors.hpp"

namespace cvlab {

namespace {

constexpr char kMagic[4] = {'C', 'V', 'L', 'F'};

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double get_f64(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  require(is.gcount() == 8, ErrorCode::io_error, "truncated binary field");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode);
  require(os.good(), ErrorCode::io_error, "cannot write " + path.string());
  return os;
}

BinaryHeader read_header(std::istream& is, const std::filesystem::path& path) {
  char magic[4];
  is.read(magic, 4);
  require(is.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0, ErrorCode::io_error,
          path.string() + " is not a binary field dump");
  BinaryHeader h;
  h.h = get_f64(is);
  h.nx = static_cast<int>(get_f64(is));
  h.ny = static_cast<int>(get_f64(is));
  h.time = get_f64(is);
  return h;
}

}  // namespace

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  os << "x,y,value\n";
  char buf[96];
  for (std::size_t k = 0; k < f.size(); ++k) {
    Point p = f.domain->interior_point(k);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x, p.y, f.values[k]);
    os << buf;
  }
  require(os.good(), ErrorCode::io_error, "write failed for " + path.string());
}

Field read_field_csv(DomainPtr domain, const std::filesystem::path& path, double time) {
  std::ifstream is(path);
  require(is.good(), ErrorCode::io_error, "cannot read " + path.string());
  const DiscretizedDomain& dom = *domain;
  Field f = Field::zeros(domain, time);
  std::vector<bool> seen(f.size(), false);
  std::string line;
  long row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y, v;
    require(static_cast<bool>(ls >> x >> y >> v), ErrorCode::io_error,
            path.string() + ": malformed row " + std::to_string(row));
    const int i = static_cast<int>(std::lround((x - dom.origin().x) / dom.h()));
    const int j = static_cast<int>(std::lround((y - dom.origin().y) / dom.h()));
    const int k = dom.interior_index(i, j);
    require(k >= 0, ErrorCode::io_error, path.string() + ": row " + std::to_string(row) + " is not an interior node");
    f.values[k] = v;
    seen[k] = true;
  }
  require(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }), ErrorCode::io_error,
          path.string() + " does not cover every interior node");
  return f;
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary);
  const DiscretizedDomain& dom = *f.domain;
  os.write(kMagic, 4);
  put_f64(os, dom.h());
  put_f64(os, dom.nx());
  put_f64(os, dom.ny());
  put_f64(os, f.time);
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) {
      const int k = dom.interior_index(i, j);
      put_f64(os, k >= 0 ? f.values[k] : 0.0);
    }
  require(os.good(), ErrorCode::io_error, "write failed for " + path.string());
}

BinaryHeader read_binary_header(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::io_error, "cannot read " + path.string());
  return read_header(is, path);
}

Field read_field_binary(DomainPtr domain, const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::io_error, "cannot read " + path.string());
  const BinaryHeader h = read_header(is, path);
  const DiscretizedDomain& dom = *domain;
  require(h.nx == dom.nx() && h.ny == dom.ny() && std::abs(h.h - dom.h()) <= 1e-12 * dom.h(), ErrorCode::io_error,
          path.string() + ": grid does not match the domain");
  Field f = Field::zeros(domain, h.time);
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) {
      const double v = get_f64(is);
      const int k = dom.interior_index(i, j);
      if (k >= 0) f.values[k] = v;
    }
  return f;
}

}  // namespace cvlab
