#pragma once

#include <Eigen/Core>

#include <memory>

namespace srsp {

/**
 * Periodic cubic grid with n points per axis on [-L/2, L/2)^3.
 *
 * Samples are stored x-fastest: index = ix + n*(iy + n*iz). The grid point with
 * integer index n/2 on every axis sits at the origin. Wavenumbers follow the
 * FFT ordering, (2*pi/L) * {0, 1, ..., n/2-1, -n/2, ..., -1} per axis.
 *
 * Copies are cheap: per-mode symbol tables are shared between copies.
 */
class Grid {
 public:
  /// Throws ConfigError unless n is a power of two with n >= 8 and box_length > 0.
  Grid(int n, double box_length);

  int n() const noexcept { return n_; }
  double box_length() const noexcept { return box_length_; }
  double spacing() const noexcept { return box_length_ / n_; }
  double cell_volume() const noexcept {
    const double h = spacing();
    return h * h * h;
  }
  Eigen::Index size() const noexcept {
    return static_cast<Eigen::Index>(n_) * n_ * n_;
  }

  Eigen::Index index(int ix, int iy, int iz) const noexcept {
    return ix + static_cast<Eigen::Index>(n_) * (iy + static_cast<Eigen::Index>(n_) * iz);
  }
  double coordinate(int i) const noexcept { return (i - n_ / 2) * spacing(); }
  /// Angular wavenumber of FFT bin i along one axis.
  double wavenumber(int i) const noexcept;
  /// Largest representable wavenumber magnitude per axis (pi/h).
  double nyquist() const noexcept;

  /// |k|^2 per mode, FFT order.
  const Eigen::ArrayXd& k_squared() const noexcept;
  /// |k| per mode.
  const Eigen::ArrayXd& k_abs() const noexcept;
  /// sqrt(1 + |k|^2) per mode.
  const Eigen::ArrayXd& bracket_k() const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.box_length_ == b.box_length_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) noexcept { return !(a == b); }

 private:
  struct Tables;
  int n_;
  double box_length_;
  std::shared_ptr<const Tables> tables_;
};

/// Validating factory.
Grid make_grid(int n, double box_length);

}  // namespace srsp
