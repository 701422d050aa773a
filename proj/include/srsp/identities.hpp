#pragma once

#include "srsp/field.hpp"
#include "srsp/spectral.hpp"

#include <optional>

namespace srsp {

/// A raw residual with the magnitude of its largest constituent term.
struct Residual {
  double residual = 0.0;
  double scale = 1.0;  ///< 1 for the zero field
  double relative() const noexcept { return residual / scale; }
};

/// Analytic scaling derivatives at theta = 1 and their finite-difference cross-checks.
struct ScalingDerivatives {
  double f_prime = 0.0;     ///< d/dtheta (E / mass)(theta v)
  double g_prime = 0.0;     ///< d/dtheta E(theta^{3/2} v(theta x))
  double f_prime_fd = 0.0;
  double g_prime_fd = 0.0;
  double f_agreement = 0.0;  ///< |f' - fd| relative to the virial term scale over the mass
  double g_agreement = 0.0;  ///< |g' - fd| relative to the Pohozaev term scale
};

struct IdentityReport {
  double virial_residual = 0.0;
  double virial_scale = 1.0;
  double pohozaev_residual = 0.0;
  double pohozaev_scale = 1.0;
  double el_residual_rel = 0.0;
  double f_prime_at_1 = 0.0;
  double g_prime_at_1 = 0.0;
  double omega = 0.0;
  ScalingDerivatives derivatives;

  double virial_relative() const noexcept { return virial_residual / virial_scale; }
  double pohozaev_relative() const noexcept { return pohozaev_residual / pohozaev_scale; }
};

/// 2 alpha D(v) - beta (p - 2) ||v||_p^p.
Residual virial_residual(const Field& v, const Params& params);

/**
 * Dilation identity: kinetic difference + alpha D - beta (3p - 6)/2 ||v||_p^p.
 * The kinetic difference is (1/2)(||v||_{H^1/2}^2 - ||v||_{H^-1/2}^2) for the
 * inhomogeneous variant and (1/2)||v||_{Hdot^1/2}^2 for the homogeneous one.
 */
Residual pohozaev_residual(const Field& v, const Params& params,
                           KineticVariant variant = KineticVariant::inhomogeneous);

/// Same residual with the kinetic part as one multiplier |k|^2 / sqrt(1 + |k|^2).
double pohozaev_multiplier_form(const Field& v, const Params& params);

/// ||grad E(v) - omega v||_2 / ||v||_2. Throws DegenerateInputError for v = 0.
double el_residual(const Field& v, const Params& params, double omega,
                   KineticVariant variant = KineticVariant::inhomogeneous);

/// Throws DegenerateInputError for v = 0.
ScalingDerivatives scaling_derivative_check(const Field& v, const Params& params,
                                            KineticVariant variant = KineticVariant::inhomogeneous);

/// Full report. omega defaults to the Rayleigh quotient of the gradient.
IdentityReport verify_identities(const Field& v, const Params& params,
                                 std::optional<double> omega = std::nullopt,
                                 KineticVariant variant = KineticVariant::inhomogeneous);

}  // namespace srsp
