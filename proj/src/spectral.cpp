#include "srsp/spectral.hpp"

#include "srsp/errors.hpp"
#include "srsp/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace srsp {

void Params::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("params: alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("params: beta must be positive");
  if (!(p > 2.0) || p > critical_exponent + 1e-12) {
    throw ConfigError("params: p must lie in (2, 8/3]");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("params: rho must be positive");
}

void Params::validate_couplings() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("params: alpha must be nonnegative");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("params: beta must be nonnegative");
  if (!(p > 2.0) || p > critical_exponent + 1e-12) {
    throw ConfigError("params: p must lie in (2, 8/3]");
  }
}

bool Params::is_critical() const noexcept { return std::abs(p - critical_exponent) <= 1e-12; }

std::string to_string(KineticVariant v) {
  return v == KineticVariant::homogeneous ? "homogeneous" : "inhomogeneous";
}

KineticVariant parse_variant(const std::string& s) {
  if (s == "inhomogeneous") return KineticVariant::inhomogeneous;
  if (s == "homogeneous") return KineticVariant::homogeneous;
  throw ConfigError("unknown kinetic variant '" + s + "'");
}

namespace {

const Eigen::ArrayXd& kinetic_symbol(const Grid& grid, KineticVariant variant) {
  return variant == KineticVariant::homogeneous ? grid.k_abs() : grid.bracket_k();
}

Eigen::ArrayXd convolve_density(const Grid& grid, const Eigen::ArrayXd& density,
                                const Eigen::ArrayXd& symbol) {
  Eigen::ArrayXcd coeffs = forward_transform(grid, density);
  coeffs *= symbol.cast<cdouble>();
  return inverse_transform(grid, coeffs).real();
}

// density^{(p-2)/2} = |u|^{p-2}, zero where the density vanishes.
Eigen::ArrayXd local_factor(const Eigen::ArrayXd& density, double p) {
  const double e = 0.5 * (p - 2.0);
  Eigen::ArrayXd out(density.size());
  if (std::abs(p - 2.5) < 1e-15) {
    out = density.sqrt().sqrt();
  } else if (std::abs(p - critical_exponent) < 1e-15) {
    out = density.unaryExpr([](double r) { return std::cbrt(r); });
  } else {
    out = (density > 0.0).select(density.pow(e), 0.0);
  }
  return out;
}

double sum_power(const Eigen::ArrayXd& density, double p) {
  return (density * local_factor(density, p)).sum();
}

// (1 + x)^a - 1 without cancellation.
double relative_power_change(double x, double a) {
  if (std::abs(x) < 1e-3) {
    double term = a * x;
    double sum = term;
    for (int k = 1; k < 6; ++k) {
      term *= (a - k) * x / (k + 1);
      sum += term;
    }
    return sum;
  }
  return std::expm1(a * std::log1p(x));
}

}  // namespace

CoulombKernel make_coulomb_kernel(const Grid& grid, double truncation_radius) {
  if (!(truncation_radius > 0.0)) throw ConfigError("coulomb kernel: truncation radius must be positive");
  const double T = truncation_radius;
  const double four_pi = 4.0 * std::numbers::pi;
  Eigen::ArrayXd symbol(grid.size());
  const auto& k2 = grid.k_squared();
  const auto& k = grid.k_abs();
  for (Eigen::Index j = 0; j < symbol.size(); ++j) {
    if (k2[j] == 0.0) {
      symbol[j] = 2.0 * std::numbers::pi * T * T;
    } else {
      // 1 - cos(x) = 2 sin^2(x/2) avoids cancellation for small T|k|.
      const double s = std::sin(0.5 * T * k[j]);
      symbol[j] = four_pi * 2.0 * s * s / k2[j];
    }
  }
  return CoulombKernel{T, std::make_shared<const Eigen::ArrayXd>(std::move(symbol))};
}

const CoulombKernel& default_coulomb_kernel(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double>, CoulombKernel> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(grid.n(), grid.box_length());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, make_coulomb_kernel(grid, 0.5 * grid.box_length())).first;
  }
  return it->second;
}

NormSet norms(const Field& u, double p) {
  require_finite(u, "norms");
  const Grid& grid = u.grid();
  const Eigen::ArrayXcd coeffs = forward_transform(grid, u.values());
  const Eigen::ArrayXd a2 = coeffs.abs2();
  const double w = grid.cell_volume() / static_cast<double>(grid.size());
  NormSet out;
  out.l2_sq = a2.sum() * w;
  out.h_half_sq = (grid.bracket_k() * a2).sum() * w;
  out.hdot_half_sq = (grid.k_abs() * a2).sum() * w;
  out.h_minus_half_sq = (a2 / grid.bracket_k()).sum() * w;
  out.lp_p = sum_power(u.values().abs2(), p) * grid.cell_volume();
  return out;
}

Field apply_multiplier(const Field& u, const Eigen::ArrayXd& symbol) {
  require_finite(u, "apply_multiplier");
  const Grid& grid = u.grid();
  Eigen::ArrayXcd coeffs = forward_transform(grid, u.values());
  coeffs *= symbol.cast<cdouble>();
  return Field(grid, inverse_transform(grid, coeffs));
}

Field apply_half_wave(const Field& u) { return apply_multiplier(u, u.grid().bracket_k()); }

Field apply_abs_derivative(const Field& u) { return apply_multiplier(u, u.grid().k_abs()); }

Eigen::ArrayXd hartree_potential(const Field& u, const CoulombKernel& kernel) {
  require_finite(u, "hartree_potential");
  return convolve_density(u.grid(), u.values().abs2(), *kernel.symbol);
}

Eigen::ArrayXd hartree_potential(const Field& u) {
  return hartree_potential(u, default_coulomb_kernel(u.grid()));
}

double hartree_double_integral(const Field& u, const CoulombKernel& kernel) {
  const Eigen::ArrayXd density = u.values().abs2();
  const Eigen::ArrayXd phi = hartree_potential(u, kernel);
  return (phi * density).sum() * u.grid().cell_volume();
}

double hartree_double_integral(const Field& u) {
  return hartree_double_integral(u, default_coulomb_kernel(u.grid()));
}

EnergyBreakdown energy(const Field& u, const Params& params, KineticVariant variant) {
  params.validate_couplings();
  EnergyBreakdown out;
  out.variant = variant;
  out.norms = norms(u, params.p);
  out.d_value = hartree_double_integral(u);
  out.kinetic = 0.5 * (variant == KineticVariant::homogeneous ? out.norms.hdot_half_sq
                                                               : out.norms.h_half_sq);
  out.hartree = params.alpha * out.d_value;
  out.potential = params.beta * out.norms.lp_p;
  out.total = out.kinetic + out.hartree - out.potential;
  return out;
}

Eigen::ArrayXcd power_nonlinearity(const Eigen::ArrayXcd& u, double p) {
  return u * local_factor(u.abs2(), p).cast<cdouble>();
}

Field gradient(const Field& u, const Params& params, KineticVariant variant) {
  return EnergyReference(u, params, variant).gradient();
}

EnergyReference::EnergyReference(Field u, const Params& params, KineticVariant variant)
    : u_(std::move(u)), params_(params), variant_(variant) {
  params_.validate_couplings();
  require_finite(u_, "energy");
  const Grid& grid = u_.grid();
  u_hat_ = forward_transform(grid, u_.values());
  density_ = u_.values().abs2();
  factor_ = local_factor(density_, params_.p);
  power_density_ = density_ * factor_;
  potential_ = convolve_density(grid, density_, *default_coulomb_kernel(grid).symbol);

  const Eigen::ArrayXd a2 = u_hat_.abs2();
  const double w = grid.cell_volume() / static_cast<double>(grid.size());
  NormSet& nm = breakdown_.norms;
  nm.l2_sq = a2.sum() * w;
  nm.h_half_sq = (grid.bracket_k() * a2).sum() * w;
  nm.hdot_half_sq = (grid.k_abs() * a2).sum() * w;
  nm.h_minus_half_sq = (a2 / grid.bracket_k()).sum() * w;
  nm.lp_p = power_density_.sum() * grid.cell_volume();

  breakdown_.variant = variant_;
  breakdown_.d_value = (potential_ * density_).sum() * grid.cell_volume();
  breakdown_.kinetic =
      0.5 * (variant_ == KineticVariant::homogeneous ? nm.hdot_half_sq : nm.h_half_sq);
  breakdown_.hartree = params_.alpha * breakdown_.d_value;
  breakdown_.potential = params_.beta * nm.lp_p;
  breakdown_.total = breakdown_.kinetic + breakdown_.hartree - breakdown_.potential;
}

Field EnergyReference::gradient() const {
  const Grid& grid = u_.grid();
  Eigen::ArrayXcd kin = u_hat_ * kinetic_symbol(grid, variant_).cast<cdouble>();
  Eigen::ArrayXcd g = inverse_transform(grid, kin);
  g += (4.0 * params_.alpha) * potential_.cast<cdouble>() * u_.values();
  g -= (params_.beta * params_.p) * factor_.cast<cdouble>() * u_.values();
  return Field(grid, std::move(g));
}

double EnergyReference::energy_change(const Field& to, double* mass_change) const {
  require_same_grid(u_, to, "energy_change");
  require_finite(to, "energy_change");
  const Grid& grid = u_.grid();
  const double dv = grid.cell_volume();
  const Eigen::ArrayXcd delta = to.values() - u_.values();

  // Kinetic: sum w (Re(u^ conj d^) + |d^|^2 / 2), with the 1/2 prefactor of the energy.
  const Eigen::ArrayXcd delta_hat = forward_transform(grid, delta);
  const Eigen::ArrayXd cross = (u_hat_ * delta_hat.conjugate()).real();
  const Eigen::ArrayXd& w = kinetic_symbol(grid, variant_);
  const double d_kinetic =
      0.5 * (w * (2.0 * cross + delta_hat.abs2())).sum() * dv / static_cast<double>(grid.size());

  // Hartree: D(rho + e) - D(rho) = 2 <K rho, e> + <K e, e>.
  const Eigen::ArrayXd d_density =
      2.0 * (u_.values().conjugate() * delta).real() + delta.abs2();
  if (mass_change) *mass_change = compensated_sum(d_density) * dv;
  const Eigen::ArrayXd d_potential =
      convolve_density(grid, d_density, *default_coulomb_kernel(grid).symbol);
  const double d_hartree =
      params_.alpha * ((2.0 * potential_ + d_potential) * d_density).sum() * dv;

  // Local term: |to|^p - |u|^p = |u|^p expm1((p/2) log1p(e / |u|^2)).
  const double half_p = 0.5 * params_.p;
  double d_local = 0.0;
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    const double r = density_[j];
    const double e = d_density[j];
    // Cancellation only matters for small relative changes; elsewhere (including
    // subnormal r, where e / r can overflow) the direct difference is exact enough.
    if (std::abs(e) < r) {
      d_local += power_density_[j] * relative_power_change(e / r, half_p);
    } else {
      d_local += std::pow(std::norm(to.values()[j]), half_p) - power_density_[j];
    }
  }
  d_local *= params_.beta * dv;

  return d_kinetic + d_hartree - d_local;
}

double boundary_mass_fraction(const Field& u, double layer) {
  const Grid& grid = u.grid();
  const double total = mass(u);
  if (total == 0.0) return 0.0;
  const double cutoff = (0.5 - layer) * grid.box_length();
  const int n = grid.n();
  double edge = 0.0;
  for (int iz = 0; iz < n; ++iz) {
    const double z = std::abs(grid.coordinate(iz));
    for (int iy = 0; iy < n; ++iy) {
      const double yz = std::max(z, std::abs(grid.coordinate(iy)));
      for (int ix = 0; ix < n; ++ix) {
        if (std::max(yz, std::abs(grid.coordinate(ix))) >= cutoff) {
          edge += std::norm(u.values()[grid.index(ix, iy, iz)]);
        }
      }
    }
  }
  return edge * grid.cell_volume() / total;
}

}  // namespace srsp
