#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace oped {

/// Square raster over [-1, 1]^2. Pixel (p, q) has center
///   x_p = -1 + (2p+1)/width,  y_q = -1 + (2q+1)/height,
/// strictly inside the extent. The mask marks centers with x^2 + y^2 <= 1.
struct ImageGrid {
  int width = 0;
  int height = 0;

  ImageGrid() = default;
  ImageGrid(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("ImageGrid: empty grid");
  }

  double x(int p) const { return -1.0 + (2.0 * p + 1.0) / width; }
  double y(int q) const { return -1.0 + (2.0 * q + 1.0) / height; }
  bool masked(int p, int q) const {
    const double xx = x(p), yy = y(q);
    return xx * xx + yy * yy <= 1.0;
  }
  bool operator==(const ImageGrid&) const = default;
};

/// Raster image; values(q, p) holds the pixel in column p, row q.
/// Pixels outside the disk mask carry `fill`.
struct Image {
  ImageGrid grid;
  Eigen::ArrayXXd values;  // (height, width)
  double fill = 0.0;
};

}  // namespace oped
