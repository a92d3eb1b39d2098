#include "oped/io.hpp"

#include "oped/grids.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace oped {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raw raster output assumes a little-endian host");

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_block(std::ostream& out, const Eigen::MatrixXd& data) {
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out << ' ';
      out << fmt17(data(r, c));
    }
    out << '\n';
  }
}

// Reads one (2m+1) x 2m block; blank lines before the block are skipped.
Eigen::MatrixXd read_block(std::istream& in, int m, const std::string& path) {
  Eigen::MatrixXd data(2 * m + 1, 2 * m);
  int row = 0;
  std::string line;
  while (row < 2 * m + 1 && std::getline(in, line)) {
    std::istringstream ls(line);
    double v;
    int col = 0;
    while (ls >> v) {
      if (col >= 2 * m)
        throw SinogramFormatError(path + ": row has more than 2m values");
      data(row, col++) = v;
    }
    if (!ls.eof())
      throw SinogramFormatError(path + ": malformed number in data row");
    if (col == 0) continue;  // blank separator line
    if (col != 2 * m)
      throw SinogramFormatError(path + ": row has fewer than 2m values");
    ++row;
  }
  if (row != 2 * m + 1)
    throw SinogramFormatError(path + ": fewer data rows than 2m+1");
  return data;
}

void expect_no_trailing(std::istream& in, const std::string& path) {
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string token;
    if (ls >> token)
      throw SinogramFormatError(path + ": trailing content after data rows");
  }
}

struct Header {
  int dim = 0;
  int m = 0;
  int n = 0;
  double L = 0.0;
};

Header read_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw SinogramFormatError(path + ": empty file");
  std::istringstream ls(line);
  std::string magic;
  Header h;
  if (!(ls >> magic >> h.dim >> h.m) || magic != "OPED-SINO")
    throw SinogramFormatError(path + ": missing OPED-SINO header");
  if (h.dim == 3) {
    if (!(ls >> h.n >> h.L))
      throw SinogramFormatError(path + ": 3D header needs n and L");
    if (h.n < 1 || !(h.L > 0))
      throw SinogramFormatError(path + ": invalid n or L in header");
  } else if (h.dim != 2) {
    throw SinogramFormatError(path + ": unsupported dimension in header");
  }
  if (h.m < 1) throw SinogramFormatError(path + ": invalid m in header");
  std::string extra;
  if (ls >> extra)
    throw SinogramFormatError(path + ": trailing tokens in header");
  return h;
}

}  // namespace

void write_sinogram(std::ostream& out, const Sinogram2D& s) {
  out << "OPED-SINO 2 " << s.m << '\n';
  write_block(out, s.data);
}

void write_sinogram(std::ostream& out, const Sinogram3D& s) {
  out << "OPED-SINO 3 " << s.m << ' ' << s.n << ' ' << fmt17(s.L) << '\n';
  for (int i = 0; i < s.n; ++i) {
    if (i) out << '\n';
    write_block(out, s.slices[i]);
  }
}

namespace {

template <typename S>
void save_any(const std::string& path, const S& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open sinogram file for writing: " + path);
  write_sinogram(out, s);
  if (!out) throw std::runtime_error("short write to sinogram file: " + path);
}

}  // namespace

void save_sinogram(const std::string& path, const Sinogram2D& s) { save_any(path, s); }
void save_sinogram(const std::string& path, const Sinogram3D& s) { save_any(path, s); }

int sinogram_dim(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SinogramFormatError("cannot open sinogram file: " + path);
  return read_header(in, path).dim;
}

Sinogram2D load_sinogram2d(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SinogramFormatError("cannot open sinogram file: " + path);
  const Header h = read_header(in, path);
  if (h.dim != 2) throw SinogramFormatError(path + ": expected a 2D sinogram");
  Sinogram2D s;
  s.m = h.m;
  s.data = read_block(in, h.m, path);
  expect_no_trailing(in, path);
  return s;
}

Sinogram3D load_sinogram3d(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SinogramFormatError("cannot open sinogram file: " + path);
  const Header h = read_header(in, path);
  if (h.dim != 3) throw SinogramFormatError(path + ": expected a 3D sinogram");
  Sinogram3D s;
  s.m = h.m;
  s.n = h.n;
  s.L = h.L;
  s.zs = gauss_t_nodes(h.n, h.L);
  s.slices.reserve(h.n);
  for (int i = 0; i < h.n; ++i) s.slices.push_back(read_block(in, h.m, path));
  expect_no_trailing(in, path);
  return s;
}

std::pair<double, double> finite_range(const Eigen::ArrayXXd& values) {
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (!std::isfinite(v)) continue;
    if (!seen) {
      lo = hi = v;
      seen = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

void write_pgm(const std::string& path, const Eigen::ArrayXXd& values,
               double lo, double hi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open PGM file for writing: " + path);
  out << "P5\n" << values.cols() << ' ' << values.rows() << "\n65535\n";
  const double span = hi - lo;
  for (Eigen::Index q = 0; q < values.rows(); ++q)
    for (Eigen::Index p = 0; p < values.cols(); ++p) {
      const double v = values(q, p);
      std::uint16_t u = 0;
      if (std::isfinite(v) && span > 0.0) {
        const double scaled = (v - lo) / span;
        u = std::uint16_t(std::lround(std::clamp(scaled, 0.0, 1.0) * 65535.0));
      }
      const unsigned char bytes[2] = {static_cast<unsigned char>(u >> 8),
                                      static_cast<unsigned char>(u & 0xff)};
      out.write(reinterpret_cast<const char*>(bytes), 2);
    }
  if (!out) throw std::runtime_error("short write to PGM file: " + path);
}

void write_raw(const std::string& path, const Eigen::ArrayXXd& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open raw file for writing: " + path);
  for (Eigen::Index q = 0; q < values.rows(); ++q)
    for (Eigen::Index p = 0; p < values.cols(); ++p) {
      const double v = values(q, p);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  if (!out) throw std::runtime_error("short write to raw file: " + path);
}

}  // namespace oped
