#include "srsp/resample.hpp"

#include "srsp/errors.hpp"
#include "srsp/fft.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace srsp {
namespace {

// Row i holds the weights producing the band-limited interpolant at theta * x_i.
Eigen::MatrixXcd interpolation_matrix(const Grid& grid, double theta) {
  const int n = grid.n();
  const double L = grid.box_length();
  const double half = 0.5 * L;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = theta * grid.coordinate(i);
    if (s < -half || s >= half) continue;
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * std::numbers::pi * (s - grid.coordinate(j)) / L;
      double acc = 1.0 + std::cos(0.5 * n * t);
      for (int k = 1; k < n / 2; ++k) acc += 2.0 * std::cos(k * t);
      m(i, j) = acc / n;
    }
  }
  return m;
}

Field dilate_spectral(const Field& u, double theta) {
  const Grid& grid = u.grid();
  const int n = grid.n();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  const Eigen::MatrixXcd m = interpolation_matrix(grid, theta);
  const Eigen::MatrixXcd mt = m.transpose();

  Eigen::ArrayXcd work = u.values();
  {
    Eigen::Map<Eigen::MatrixXcd> a(work.data(), n, n2);
    a = (m * a).eval();
  }
  for (int iz = 0; iz < n; ++iz) {
    Eigen::Map<Eigen::MatrixXcd> slab(work.data() + iz * n2, n, n);
    slab = (slab * mt).eval();
  }
  {
    Eigen::Map<Eigen::MatrixXcd> b(work.data(), n2, n);
    b = (b * mt).eval();
  }
  return Field(grid, std::move(work));
}

Field dilate_trilinear(const Field& u, double theta) {
  const Grid& grid = u.grid();
  const int n = grid.n();
  const double h = grid.spacing();
  const double half = 0.5 * grid.box_length();
  Field out(grid);
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int iz = 0; iz < n; ++iz) {
    const double sz = theta * grid.coordinate(iz);
    if (sz < -half || sz >= half) continue;
    const double fz = sz / h + n / 2;
    const int z0 = static_cast<int>(std::floor(fz));
    const double tz = fz - z0;
    for (int iy = 0; iy < n; ++iy) {
      const double sy = theta * grid.coordinate(iy);
      if (sy < -half || sy >= half) continue;
      const double fy = sy / h + n / 2;
      const int y0 = static_cast<int>(std::floor(fy));
      const double ty = fy - y0;
      for (int ix = 0; ix < n; ++ix) {
        const double sx = theta * grid.coordinate(ix);
        if (sx < -half || sx >= half) continue;
        const double fx = sx / h + n / 2;
        const int x0 = static_cast<int>(std::floor(fx));
        const double tx = fx - x0;
        cdouble acc = 0.0;
        for (int dz = 0; dz < 2; ++dz) {
          const double wz = dz ? tz : 1.0 - tz;
          for (int dy = 0; dy < 2; ++dy) {
            const double wy = dy ? ty : 1.0 - ty;
            for (int dx = 0; dx < 2; ++dx) {
              const double wx = dx ? tx : 1.0 - tx;
              acc += wx * wy * wz * u(wrap(x0 + dx), wrap(y0 + dy), wrap(z0 + dz));
            }
          }
        }
        out.values()[grid.index(ix, iy, iz)] = acc;
      }
    }
  }
  return out;
}

}  // namespace

double dilation_loss(const Field& u, double theta) {
  const Grid& grid = u.grid();
  const double total = mass(u);
  if (total == 0.0 || theta == 1.0) return 0.0;
  const int n = grid.n();
  double lost = 0.0;
  if (theta > 1.0) {
    const Eigen::ArrayXcd coeffs = forward_transform(grid, u.values());
    const double cutoff = grid.nyquist() / theta;
    for (int iz = 0; iz < n; ++iz) {
      const double kz = std::abs(grid.wavenumber(iz));
      for (int iy = 0; iy < n; ++iy) {
        const double kyz = std::max(kz, std::abs(grid.wavenumber(iy)));
        for (int ix = 0; ix < n; ++ix) {
          if (std::max(kyz, std::abs(grid.wavenumber(ix))) > cutoff) {
            lost += std::norm(coeffs[grid.index(ix, iy, iz)]);
          }
        }
      }
    }
    return lost * grid.cell_volume() / static_cast<double>(grid.size()) / total;
  }
  const double cutoff = 0.5 * theta * grid.box_length();
  for (int iz = 0; iz < n; ++iz) {
    const double z = std::abs(grid.coordinate(iz));
    for (int iy = 0; iy < n; ++iy) {
      const double yz = std::max(z, std::abs(grid.coordinate(iy)));
      for (int ix = 0; ix < n; ++ix) {
        if (std::max(yz, std::abs(grid.coordinate(ix))) >= cutoff) {
          lost += std::norm(u(ix, iy, iz));
        }
      }
    }
  }
  return lost * grid.cell_volume() / total;
}

ScaledField dilate(const Field& u, double theta, ResampleMethod method) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("dilate: theta must be positive");
  require_finite(u, "dilate");
  ScaledField out{theta == 1.0 ? u
                  : method == ResampleMethod::spectral ? dilate_spectral(u, theta)
                                                       : dilate_trilinear(u, theta)};
  out.lost_fraction = dilation_loss(u, theta);
  out.resolution_warning = out.lost_fraction > resolution_tolerance;
  return out;
}

ScaledField scale_mass_preserving(const Field& u, double theta, ResampleMethod method) {
  ScaledField out = dilate(u, theta, method);
  out.field *= cdouble(std::pow(theta, 1.5));
  return out;
}

Field circular_shift(const Field& u, int sx, int sy, int sz) {
  const Grid& grid = u.grid();
  const int n = grid.n();
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  Field out(grid);
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        out.values()[grid.index(wrap(ix + sx), wrap(iy + sy), wrap(iz + sz))] = u(ix, iy, iz);
      }
    }
  }
  return out;
}

}  // namespace srsp
