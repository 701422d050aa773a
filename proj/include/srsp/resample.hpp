#pragma once

#include "srsp/field.hpp"

namespace srsp {

enum class ResampleMethod {
  spectral,   ///< separable trigonometric interpolation (exact for band-limited fields)
  trilinear,  ///< piecewise-linear, second-order accurate
};

/// Result of a dilation. lost_fraction estimates the mass fraction the grid cannot represent.
struct ScaledField {
  Field field;
  bool resolution_warning = false;
  double lost_fraction = 0.0;
};

/// Mass fraction above which a dilation is flagged as under-resolved.
inline constexpr double resolution_tolerance = 1e-6;

/// u(theta x), zero where theta x leaves the box. Throws ConfigError if theta <= 0.
ScaledField dilate(const Field& u, double theta, ResampleMethod method = ResampleMethod::spectral);

/// theta^{3/2} u(theta x); preserves ||u||_2 up to interpolation and truncation error.
ScaledField scale_mass_preserving(const Field& u, double theta,
                                  ResampleMethod method = ResampleMethod::spectral);

/**
 * Mass fraction lost when sampling u(theta x) on the same grid: for theta > 1 the
 * spectral weight above nyquist/theta on some axis, for theta < 1 the mass outside
 * the cube of half-side theta L/2.
 */
double dilation_loss(const Field& u, double theta);

/// Circular shift by integer grid offsets (sx, sy, sz).
Field circular_shift(const Field& u, int sx, int sy, int sz);

}  // namespace srsp
