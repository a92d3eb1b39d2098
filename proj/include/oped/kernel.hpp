#pragma once

#include "oped/grids.hpp"
#include "oped/image.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oped {

/// C^r cutoff equal to 1 on [0, 1] and supported in [0, 2]; damps
/// high-degree terms of the reconstruction kernel.
struct Multiplier {
  std::function<double(double)> eval;
  int smoothness = 0;

  double operator()(double t) const { return eval(t); }
};

/// Default multiplier: 1 on [0,1], 1 - B(t-1) on (1,2) with the degree-7
/// blend B(u) = 35u^4 - 84u^5 + 70u^6 - 20u^7, 0 from 2 on. B matches value
/// and first three derivatives at both ends, so the cutoff is C^3.
Multiplier eta_default();

/// Degree-2m summation kernel
///   Phi_nu(t; x, y) = 1/(2m+1) sum_{k=0}^{2m} (k+1) U_k(t) U_k(phi_nu; x, y).
double phi_nu(int m, int nu, double t, const Eigen::Vector2d& p);

/// T_{j,nu}(p) by the explicit sum
///   1/(2m+1)^2 sum_k (k+1) sin((k+1) psi_j) U_k(phi_nu; p),
/// j is 1-based. Unconditionally stable; the oracle form.
double kernel_sum(int m, int j, int nu, const Eigen::Vector2d& p);

/// T_{j,nu}(p) by the compact two-recurrence formula; falls back to
/// kernel_sum inside a small band around the removable singularity
/// cos theta_nu(p) = cos psi_j.
double kernel_closed(int m, int j, int nu, const Eigen::Vector2d& p);

/// Multiplier variant
///   1/(2m+1)^2 sum_k eta(k/m) (k+1) sin((k+1) psi_j) U_k(phi_nu; p).
double kernel_eta(int m, int j, int nu, const Eigen::Vector2d& p,
                  const Multiplier& eta);

/// T_{j,nu}(p) for all j = 1..2m of one view, sharing the per-view
/// recurrences. Same values as kernel_closed. The Ref overload writes into a
/// caller-owned buffer of size 2m (the hot loop of raster reconstruction).
Eigen::ArrayXd kernel_closed_row(int m, int nu, const Eigen::Vector2d& p);
void kernel_closed_row(int m, int nu, const Eigen::Vector2d& p,
                       Eigen::Ref<Eigen::ArrayXd> out);

/// Multiplier-variant row; same values as kernel_eta.
Eigen::ArrayXd kernel_eta_row(int m, int nu, const Eigen::Vector2d& p,
                              const Multiplier& eta);
void kernel_eta_row(int m, int nu, const Eigen::Vector2d& p,
                    const Multiplier& eta, Eigen::Ref<Eigen::ArrayXd> out);

enum class TableVariant : std::int64_t { plain = 0, eta = 1 };

/// Precomputed kernel values at every masked pixel center, laid out
/// pixel-major, then nu, then j (the reconstruction traversal order).
struct KernelTable {
  int m = 0;
  ImageGrid grid;
  TableVariant variant = TableVariant::plain;
  std::vector<std::int32_t> slot;  ///< height*width entries, -1 outside mask
  int slots = 0;
  Eigen::ArrayXd values;           ///< slots * (2m+1) * 2m entries

  double value(int s, int nu, int jj) const {
    return values[(std::int64_t(s) * (2 * m + 1) + nu) * (2 * m) + jj];
  }
  int slot_at(int p, int q) const { return slot[std::size_t(q) * grid.width + p]; }
};

/// Dense deterministic precomputation over the grid's masked pixels.
/// `eta` is required for TableVariant::eta and ignored otherwise.
KernelTable build_table(int m, const ImageGrid& grid,
                        TableVariant variant = TableVariant::plain,
                        const Multiplier* eta = nullptr);

/// Binary cache: magic "OPEDTBL1", header, raw little-endian values and an
/// FNV-1a checksum, validated on load.
void save_table(const std::string& path, const KernelTable& table);
KernelTable load_table(const std::string& path);

}  // namespace oped
