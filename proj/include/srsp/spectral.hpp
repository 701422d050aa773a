#pragma once

#include "srsp/field.hpp"
#include "srsp/grid.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>

namespace srsp {

/// Couplings, exponent and mass of the minimization problem.
struct Params {
  double alpha = 1.0;
  double beta = 1.0;
  double p = 2.5;
  double rho = 0.1;

  /// Throws ConfigError unless alpha > 0, beta > 0, 2 < p <= 8/3, rho > 0.
  void validate() const;
  /// Looser check for energy evaluation: alpha, beta >= 0 (term isolation), 2 < p <= 8/3.
  void validate_couplings() const;
  /// p equals the critical exponent 8/3 (to rounding).
  bool is_critical() const noexcept;
};

inline constexpr double critical_exponent = 8.0 / 3.0;

enum class KineticVariant { inhomogeneous, homogeneous };

std::string to_string(KineticVariant v);
/// Accepts "inhomogeneous" / "homogeneous"; throws ConfigError otherwise.
KineticVariant parse_variant(const std::string& s);

/// Sobolev-type norms of one field.
struct NormSet {
  double l2_sq = 0.0;             ///< ||u||_2^2
  double lp_p = 0.0;              ///< ||u||_p^p
  double h_half_sq = 0.0;         ///< sum <k> |u^|^2
  double hdot_half_sq = 0.0;      ///< sum |k| |u^|^2
  double h_minus_half_sq = 0.0;   ///< sum <k>^-1 |u^|^2
};

struct EnergyBreakdown {
  KineticVariant variant = KineticVariant::inhomogeneous;
  double kinetic = 0.0;    ///< half the H^{1/2} (or homogeneous) norm squared
  double hartree = 0.0;    ///< alpha * d_value
  double potential = 0.0;  ///< beta * ||u||_p^p
  double total = 0.0;      ///< kinetic + hartree - potential
  double d_value = 0.0;    ///< Coulomb double integral without the coupling
  NormSet norms;
};

/**
 * Fourier symbol of the truncated free-space Coulomb kernel,
 *   K_T(k) = 4 pi (1 - cos(T |k|)) / |k|^2,   K_T(0) = 2 pi T^2.
 * Periodic convolution with this symbol reproduces free-space 1/|x| convolution
 * exactly when the density support has diameter at most min(T, L - T).
 */
struct CoulombKernel {
  double truncation_radius = 0.0;
  std::shared_ptr<const Eigen::ArrayXd> symbol;
};

/// Throws ConfigError if truncation_radius <= 0.
CoulombKernel make_coulomb_kernel(const Grid& grid, double truncation_radius);
/// Kernel with T = L/2, cached per grid.
const CoulombKernel& default_coulomb_kernel(const Grid& grid);

/// All five norms via discrete Plancherel (lp_p by physical quadrature).
NormSet norms(const Field& u, double p);

/// Applies a real Fourier multiplier given per mode.
Field apply_multiplier(const Field& u, const Eigen::ArrayXd& symbol);
/// sqrt(1 - Laplacian): multiplier sqrt(1 + |k|^2).
Field apply_half_wave(const Field& u);
/// |D|: multiplier |k|.
Field apply_abs_derivative(const Field& u);

/// Phi = |x|^{-1} * |u|^2 (real). Aliasing from an inadequate box is the caller's problem.
Eigen::ArrayXd hartree_potential(const Field& u, const CoulombKernel& kernel);
Eigen::ArrayXd hartree_potential(const Field& u);

/// D(u) = sum Phi |u|^2 h^3.
double hartree_double_integral(const Field& u, const CoulombKernel& kernel);
double hartree_double_integral(const Field& u);

EnergyBreakdown energy(const Field& u, const Params& params,
                       KineticVariant variant = KineticVariant::inhomogeneous);

/// L2 gradient: T u + 4 alpha Phi u - beta p |u|^{p-2} u, T = sqrt(1-Laplacian) or |D|.
Field gradient(const Field& u, const Params& params,
               KineticVariant variant = KineticVariant::inhomogeneous);

/// |u|^{p-2} u with the value 0 wherever u == 0.
Eigen::ArrayXcd power_nonlinearity(const Eigen::ArrayXcd& u, double p);

/**
 * Cached spectral data of a reference field. Lets descent methods evaluate
 * the gradient and exact energy differences without recomputing transforms.
 */
class EnergyReference {
 public:
  EnergyReference(Field u, const Params& params, KineticVariant variant);

  const Field& field() const noexcept { return u_; }
  const EnergyBreakdown& breakdown() const noexcept { return breakdown_; }
  double energy() const noexcept { return breakdown_.total; }

  Field gradient() const;

  /**
   * E(to) - E(reference) assembled from the increment to - reference, so the
   * result keeps full relative precision even when it is many orders of
   * magnitude below E itself. mass_change, if given, receives ||to||^2 - ||u||^2
   * assembled the same way.
   */
  double energy_change(const Field& to, double* mass_change = nullptr) const;

 private:
  Field u_;
  Params params_;
  KineticVariant variant_;
  Eigen::ArrayXcd u_hat_;
  Eigen::ArrayXd density_;
  Eigen::ArrayXd factor_;         // |u|^{p-2}
  Eigen::ArrayXd power_density_;  // |u|^p
  Eigen::ArrayXd potential_;
  EnergyBreakdown breakdown_;
};

/// Fraction of the mass within the outer layer (max-norm coordinate >= (1/2 - layer) L).
double boundary_mass_fraction(const Field& u, double layer = 1.0 / 16.0);

}  // namespace srsp
