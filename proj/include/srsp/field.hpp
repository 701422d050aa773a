#pragma once

#include "srsp/grid.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <functional>

namespace srsp {

using cdouble = std::complex<double>;

/// Complex samples u(x_j) on a Grid, x-fastest.
class Field {
 public:
  /// Zero field.
  explicit Field(const Grid& grid);
  /// Throws ConfigError if values.size() != n^3.
  Field(const Grid& grid, Eigen::ArrayXcd values);

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::ArrayXcd& values() const noexcept { return values_; }
  Eigen::ArrayXcd& values() noexcept { return values_; }

  cdouble operator()(int ix, int iy, int iz) const { return values_[grid_.index(ix, iy, iz)]; }

  bool all_finite() const noexcept;
  bool is_zero() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cdouble s) {
    values_ *= s;
    return *this;
  }

 private:
  Grid grid_;
  Eigen::ArrayXcd values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cdouble s, Field a);
inline Field operator*(double s, Field a) { return cdouble(s) * std::move(a); }

/// Samples f(x, y, z) at every grid point.
Field sample(const Grid& grid, const std::function<cdouble(double, double, double)>& f);

/// exp(-|x|^2 / width^2) scaled by amplitude.
Field gaussian(const Grid& grid, double width, double amplitude = 1.0);

/// Smooth random complex field: random Fourier coefficients damped by exp(-|k|^2 corr^2 / 4),
/// normalized to unit mass. Deterministic in seed.
Field random_smooth_field(const Grid& grid, std::uint64_t seed, double correlation_length = 1.0);

/// Independent standard normal real and imaginary parts per sample, unit mass.
Field random_noise_field(const Grid& grid, std::uint64_t seed);

/// Complex L2 product h^3 sum u conj(v).
cdouble inner(const Field& u, const Field& v);
/// Re<u, v>.
double real_inner(const Field& u, const Field& v);
/// ||u||_2^2 by physical-space quadrature.
double mass(const Field& u);

/// Sum with compensated rounding error; mass and projections rely on it.
double compensated_sum(const Eigen::ArrayXd& terms);

/// Throws NumericalInputError if any sample is NaN or Inf.
void require_finite(const Field& u, const char* where);
/// Throws ConfigError if the grids differ.
void require_same_grid(const Field& a, const Field& b, const char* where);

}  // namespace srsp
