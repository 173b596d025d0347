#ifndef TPSTOKES_FIELD_IO_HPP
#define TPSTOKES_FIELD_IO_HPP

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tpstokes/field.hpp"

namespace tpstokes {

// Field files: a UTF-8 "key: value" header terminated by a blank line,
// followed by the samples as row-major little-endian float64 in the index
// order (component, t, x1, x2, z). Boundary fields use nz = 1 and a
// normal_grid of "0". Identical inputs produce identical bytes.
//
//   dims: <n> <nt> <nx1> <nx2> <nz>
//   components: <c>
//   tau: <float>
//   L: <float>
//   normal_grid: <float> ...
//   dtype: float64-le

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void require_little_endian() {
  const std::uint16_t probe = 1;
  if (*reinterpret_cast<const std::uint8_t*>(&probe) != 1)
    throw std::runtime_error("field_io: little-endian host required");
}

}  // namespace detail

struct FieldFileHeader {
  int n = 0, nt = 0, nx1 = 0, nx2 = 0, nz = 0;
  int components = 0;
  double tau = 0.0, L = 0.0;
  std::vector<double> normal_grid;
};

inline std::string field_header_text(const TorusPlaneGrid& g, int components, int nz_override = -1) {
  std::ostringstream out;
  const int nz = nz_override >= 0 ? nz_override : g.nz();
  out << "dims: " << g.dim() << ' ' << g.nt() << ' ' << g.nx() << ' ' << g.nx2() << ' ' << nz
      << '\n';
  out << "components: " << components << '\n';
  out << "tau: " << detail::format_double(g.tau()) << '\n';
  out << "L: " << detail::format_double(g.box_length()) << '\n';
  out << "normal_grid:";
  if (nz == 1) {
    out << " 0";
  } else {
    for (double z : g.normal_nodes()) out << ' ' << detail::format_double(z);
  }
  out << '\n';
  out << "dtype: float64-le\n\n";
  return out.str();
}

inline void write_field_file(const std::string& path, const PhysicalField& f) {
  detail::require_little_endian();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field_file: cannot open " + path);
  out << field_header_text(f.grid(), f.components());
  out.write(reinterpret_cast<const char*>(f.raw().data()),
            static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_field_file: write failed for " + path);
}

// Boundary samples (t, x') in the same container convention.
inline void write_boundary_file(const std::string& path, const TorusPlaneGrid& g, int components,
                                const std::vector<double>& samples) {
  detail::require_little_endian();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_boundary_file: cannot open " + path);
  out << field_header_text(g, components, 1);
  out.write(reinterpret_cast<const char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * sizeof(double)));
}

inline FieldFileHeader read_field_header(std::istream& in, const std::string& path) {
  FieldFileHeader h;
  std::string line;
  bool saw_dtype = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) break;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("field file " + path + ": malformed header line '" + line + "'");
    const std::string key = line.substr(0, colon);
    std::istringstream val(line.substr(colon + 1));
    if (key == "dims") {
      val >> h.n >> h.nt >> h.nx1 >> h.nx2 >> h.nz;
    } else if (key == "components") {
      val >> h.components;
    } else if (key == "tau") {
      val >> h.tau;
    } else if (key == "L") {
      val >> h.L;
    } else if (key == "normal_grid") {
      double z;
      while (val >> z) h.normal_grid.push_back(z);
    } else if (key == "dtype") {
      std::string d;
      val >> d;
      if (d != "float64-le")
        throw std::runtime_error("field file " + path + ": unsupported dtype '" + d + "'");
      saw_dtype = true;
    } else {
      throw std::runtime_error("field file " + path + ": unknown header key '" + key + "'");
    }
  }
  if (!saw_dtype || h.n == 0 || h.components == 0)
    throw std::runtime_error("field file " + path + ": incomplete header");
  return h;
}

struct LoadedField {
  FieldFileHeader header;
  std::vector<double> samples;  // (component, t, x1, x2, z) row-major
};

inline LoadedField read_field_file(const std::string& path) {
  detail::require_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field_file: cannot open " + path);
  LoadedField lf;
  lf.header = read_field_header(in, path);
  const auto& h = lf.header;
  const std::size_t count = static_cast<std::size_t>(h.components) * h.nt * h.nx1 * h.nx2 * h.nz;
  lf.samples.resize(count);
  in.read(reinterpret_cast<char*>(lf.samples.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
    throw std::runtime_error("read_field_file: truncated payload in " + path);
  return lf;
}

// Reassembles a PhysicalField when the stored lattice matches `grid`.
inline PhysicalField to_physical_field(const LoadedField& lf, const GridPtr& grid) {
  const auto& h = lf.header;
  if (h.n != grid->dim() || h.nt != grid->nt() || h.nx1 != grid->nx() || h.nx2 != grid->nx2() ||
      h.nz != grid->nz())
    throw std::invalid_argument("to_physical_field: stored lattice does not match the grid");
  PhysicalField f(grid, h.components);
  f.raw() = lf.samples;
  return f;
}

// 64-bit FNV-1a over a file's bytes; used for the artifact manifest.
inline std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fnv1a_file: cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  return h;
}

}  // namespace tpstokes

#endif  // TPSTOKES_FIELD_IO_HPP
