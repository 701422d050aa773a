#pragma once

// Test-only reference values and brute-force oracles. Nothing here calls the
// library's transforms or convolution routines.

#include "srsp/field.hpp"
#include "srsp/spectral.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace srsp::oracle {

// Closed-form integrals for u(x) = exp(-|x|^2) on R^3 (checked by 1-D radial quadrature).
inline const double gaussian_l2_sq = std::pow(std::numbers::pi / 2.0, 1.5);  // 1.9687012432
inline const double gaussian_hdot_half_sq = std::numbers::pi;
inline const double gaussian_l83 = std::pow(3.0 * std::numbers::pi / 8.0, 1.5);  // 1.2787089668
inline const double gaussian_d_value = std::pow(std::numbers::pi, 2.5) / 4.0;   // 4.3733545819
inline const double gaussian_phi_origin = std::numbers::pi;
inline const double gaussian_weinstein = 0.6849361479891044;

/// Kernel samples K(x_j) = (1/L^3) sum_k K_T(k) exp(i k.x_j) by explicit summation.
inline Eigen::ArrayXd direct_kernel_samples(const Grid& grid, double truncation_radius) {
  const int n = grid.n();
  const double L = grid.box_length();
  const double T = truncation_radius;
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) k[i] = 2.0 * std::numbers::pi * (i < n / 2 ? i : i - n) / L;
  auto symbol = [&](int a, int b, int c) {
    const double k2 = k[a] * k[a] + k[b] * k[b] + k[c] * k[c];
    if (k2 == 0.0) return 2.0 * std::numbers::pi * T * T;
    return 4.0 * std::numbers::pi * (1.0 - std::cos(T * std::sqrt(k2))) / k2;
  };
  // Displacements are multiples of h; index d in [0, n) per axis, periodic.
  Eigen::ArrayXd samples(grid.size());
  const double h = grid.spacing();
  for (int dz = 0; dz < n; ++dz) {
    for (int dy = 0; dy < n; ++dy) {
      for (int dx = 0; dx < n; ++dx) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) {
          for (int b = 0; b < n; ++b) {
            for (int a = 0; a < n; ++a) {
              acc += symbol(a, b, c) * std::cos(k[a] * dx * h + k[b] * dy * h + k[c] * dz * h);
            }
          }
        }
        samples[dx + n * (dy + n * dz)] = acc / (L * L * L);
      }
    }
  }
  return samples;
}

/// Phi(x_i) = sum_j K(x_i - x_j) |u(x_j)|^2 h^3, O(N^2).
inline Eigen::ArrayXd direct_sum_potential(const Field& u, const Eigen::ArrayXd& kernel) {
  const Grid& grid = u.grid();
  const int n = grid.n();
  const Eigen::ArrayXd density = u.values().abs2();
  Eigen::ArrayXd phi = Eigen::ArrayXd::Zero(grid.size());
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        double acc = 0.0;
        for (int jz = 0; jz < n; ++jz)
          for (int jy = 0; jy < n; ++jy)
            for (int jx = 0; jx < n; ++jx) {
              const int d = wrap(ix - jx) + n * (wrap(iy - jy) + n * wrap(iz - jz));
              acc += kernel[d] * density[jx + n * (jy + n * jz)];
            }
        phi[grid.index(ix, iy, iz)] = acc * grid.cell_volume();
      }
  return phi;
}

inline double direct_sum_d_value(const Field& u, const Eigen::ArrayXd& kernel) {
  return (direct_sum_potential(u, kernel) * u.values().abs2()).sum() * u.grid().cell_volume();
}

/// Explicit DFT norm with weight w(|k|): h^3/N sum w |u^_k|^2, O(N^2).
template <class Weight>
double direct_fourier_norm(const Field& u, Weight w) {
  const Grid& grid = u.grid();
  const int n = grid.n();
  double total = 0.0;
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) {
        const double ka = grid.wavenumber(a), kb = grid.wavenumber(b), kc = grid.wavenumber(c);
        std::complex<double> acc = 0.0;
        for (int iz = 0; iz < n; ++iz)
          for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
              const double phase = -(ka * grid.coordinate(ix) + kb * grid.coordinate(iy) +
                                     kc * grid.coordinate(iz));
              acc += u(ix, iy, iz) * std::polar(1.0, phase);
            }
        total += w(std::sqrt(ka * ka + kb * kb + kc * kc)) * std::norm(acc);
      }
  return total * grid.cell_volume() / static_cast<double>(grid.size());
}

/// Central difference of a scalar function.
template <class F>
double central_difference(F f, double eps) {
  return (f(eps) - f(-eps)) / (2.0 * eps);
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace srsp::oracle
