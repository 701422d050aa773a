#include "srsp/grid.hpp"

#include "srsp/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace srsp {

struct Grid::Tables {
  Eigen::ArrayXd k_squared;
  Eigen::ArrayXd k_abs;
  Eigen::ArrayXd bracket_k;
};

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int n, double box_length) : n_(n), box_length_(box_length) {
  if (n < 8 || !is_power_of_two(n)) {
    throw ConfigError("grid: n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw ConfigError("grid: box length must be positive and finite");
  }
  auto tables = std::make_shared<Tables>();
  const Eigen::Index total = size();
  tables->k_squared.resize(total);
  Eigen::ArrayXd axis(n);
  for (int i = 0; i < n; ++i) axis[i] = wavenumber(i);
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      const double kyz = axis[iy] * axis[iy] + axis[iz] * axis[iz];
      for (int ix = 0; ix < n; ++ix) {
        tables->k_squared[index(ix, iy, iz)] = axis[ix] * axis[ix] + kyz;
      }
    }
  }
  tables->k_abs = tables->k_squared.sqrt();
  tables->bracket_k = (1.0 + tables->k_squared).sqrt();
  tables_ = std::move(tables);
}

double Grid::wavenumber(int i) const noexcept {
  const int m = i < n_ / 2 ? i : i - n_;
  return 2.0 * std::numbers::pi * m / box_length_;
}

double Grid::nyquist() const noexcept { return std::numbers::pi / spacing(); }

const Eigen::ArrayXd& Grid::k_squared() const noexcept { return tables_->k_squared; }
const Eigen::ArrayXd& Grid::k_abs() const noexcept { return tables_->k_abs; }
const Eigen::ArrayXd& Grid::bracket_k() const noexcept { return tables_->bracket_k; }

Grid make_grid(int n, double box_length) { return Grid(n, box_length); }

}  // namespace srsp
