#include "srsp/field.hpp"

#include "srsp/errors.hpp"
#include "srsp/fft.hpp"

#include <cmath>
#include <random>
#include <string>

namespace srsp {

Field::Field(const Grid& grid) : grid_(grid), values_(Eigen::ArrayXcd::Zero(grid.size())) {}

Field::Field(const Grid& grid, Eigen::ArrayXcd values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ConfigError("field: expected " + std::to_string(grid_.size()) + " samples, got " +
                      std::to_string(values_.size()));
  }
}

bool Field::all_finite() const noexcept {
  return values_.real().isFinite().all() && values_.imag().isFinite().all();
}

bool Field::is_zero() const noexcept { return (values_ == cdouble(0.0)).all(); }

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other, "field +=");
  values_ += other.values_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other, "field -=");
  values_ -= other.values_;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cdouble s, Field a) { return a *= s; }

Field sample(const Grid& grid, const std::function<cdouble(double, double, double)>& f) {
  Field out(grid);
  const int n = grid.n();
  for (int iz = 0; iz < n; ++iz) {
    const double z = grid.coordinate(iz);
    for (int iy = 0; iy < n; ++iy) {
      const double y = grid.coordinate(iy);
      for (int ix = 0; ix < n; ++ix) {
        out.values()[grid.index(ix, iy, iz)] = f(grid.coordinate(ix), y, z);
      }
    }
  }
  return out;
}

Field gaussian(const Grid& grid, double width, double amplitude) {
  if (!(width > 0.0)) throw ConfigError("gaussian: width must be positive");
  const double inv = 1.0 / (width * width);
  return sample(grid, [=](double x, double y, double z) {
    return cdouble(amplitude * std::exp(-(x * x + y * y + z * z) * inv));
  });
}

namespace {

Field normalize_unit_mass(Field u) {
  const double m = mass(u);
  u *= cdouble(1.0 / std::sqrt(m));
  return u;
}

}  // namespace

Field random_smooth_field(const Grid& grid, std::uint64_t seed, double correlation_length) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::ArrayXcd coeffs(grid.size());
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    coeffs[j] = cdouble(re, im);
  }
  const double c2 = correlation_length * correlation_length;
  coeffs *= (-0.25 * c2 * grid.k_squared()).exp().cast<cdouble>();
  return normalize_unit_mass(Field(grid, inverse_transform(grid, coeffs)));
}

Field random_noise_field(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::ArrayXcd values(grid.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    values[j] = cdouble(re, im);
  }
  return normalize_unit_mass(Field(grid, std::move(values)));
}

cdouble inner(const Field& u, const Field& v) {
  require_same_grid(u, v, "inner");
  return (u.values() * v.values().conjugate()).sum() * u.grid().cell_volume();
}

double real_inner(const Field& u, const Field& v) {
  require_same_grid(u, v, "real_inner");
  const auto& a = u.values();
  const auto& b = v.values();
  const Eigen::ArrayXd terms = a.real() * b.real() + a.imag() * b.imag();
  return compensated_sum(terms) * u.grid().cell_volume();
}

double mass(const Field& u) {
  return compensated_sum(u.values().abs2().eval()) * u.grid().cell_volume();
}

double compensated_sum(const Eigen::ArrayXd& terms) {
  // Neumaier's variant of Kahan summation.
  double sum = 0.0;
  double carry = 0.0;
  for (const double t : terms) {
    const double next = sum + t;
    carry += std::abs(sum) >= std::abs(t) ? (sum - next) + t : (t - next) + sum;
    sum = next;
  }
  return sum + carry;
}

void require_finite(const Field& u, const char* where) {
  if (!u.all_finite()) {
    throw NumericalInputError(std::string(where) + ": field contains NaN or Inf");
  }
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (a.grid() != b.grid()) throw ConfigError(std::string(where) + ": fields live on different grids");
}

}  // namespace srsp
