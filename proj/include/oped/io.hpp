#pragma once

#include "oped/image.hpp"
#include "oped/phantom.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

namespace oped {

struct SinogramFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text sinogram format, value-exact round trip (17 significant digits):
///   line 1:  OPED-SINO 2 <m>            (3D: OPED-SINO 3 <m> <n> <L>)
///   then (2m+1) rows of 2m space-separated values; 3D files carry n such
///   blocks separated by blank lines, slice-major in i.
void write_sinogram(std::ostream& out, const Sinogram2D& s);
void write_sinogram(std::ostream& out, const Sinogram3D& s);
void save_sinogram(const std::string& path, const Sinogram2D& s);
void save_sinogram(const std::string& path, const Sinogram3D& s);

/// Peeks the header; returns 2 or 3. Throws SinogramFormatError.
int sinogram_dim(const std::string& path);
Sinogram2D load_sinogram2d(const std::string& path);
Sinogram3D load_sinogram3d(const std::string& path);

/// Min/max over finite raster values; (0, 0) when none are finite.
std::pair<double, double> finite_range(const Eigen::ArrayXXd& values);

/// 16-bit binary PGM (P5, maxval 65535) with linear [lo, hi] scaling.
/// Non-finite pixels map to 0.
void write_pgm(const std::string& path, const Eigen::ArrayXXd& values,
               double lo, double hi);

/// Raw 64-bit little-endian doubles, row-major (row q, then column p).
void write_raw(const std::string& path, const Eigen::ArrayXXd& values);

}  // namespace oped
