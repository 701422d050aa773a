#pragma once

#include "srsp/field.hpp"
#include "srsp/resample.hpp"
#include "srsp/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace srsp {

/// Ingredients of the scale-invariant quotient ||phi||_{8/3} / (||phi||_{Hdot^1/2}^{1/2} D^{1/8}).
struct QuotientParts {
  double l83_norm = 0.0;      ///< ||phi||_{8/3}
  double hdot_half_sq = 0.0;  ///< ||phi||_{Hdot^1/2}^2
  double d_value = 0.0;
  double quotient = 0.0;
};

/// Throws DegenerateInputError for phi = 0.
QuotientParts weinstein_parts(const Field& phi);
double weinstein_quotient(const Field& phi);

struct AscentConfig {
  int steps = 200;  ///< 0 evaluates the initial field only
  double step_size = 0.5;
  std::uint64_t seed = 0;
  double init_width = 0.0;  ///< 0 means L/8
  double init_noise = 0.2;  ///< relative amplitude of the seeded perturbation; 0 gives a pure Gaussian

  void validate() const;
};

struct AscentPoint {
  int iteration = 0;
  double quotient = 0.0;  ///< best so far
  double rms_radius = 0.0;
};

struct BestConstantEstimate {
  double s_lower = 0.0;
  Field maximizer;
  std::vector<AscentPoint> ascent_trace;
};

/**
 * Preconditioned gradient ascent on log Q with unit-mass renormalization.
 * Steps are accepted only if they raise Q, so the trace is non-decreasing.
 */
BestConstantEstimate estimate_best_constant(const Grid& grid, const AscentConfig& config);

enum class Verdict { unbounded_certified, indeterminate };
std::string to_string(Verdict v);

struct ThresholdVerdict {
  double alpha = 0.0;
  double beta = 0.0;
  double lhs = 0.0;        ///< (27 alpha / beta^3)^{1/8}
  double rhs_lower = 0.0;  ///< sqrt(2) s_lower
  Verdict verdict = Verdict::indeterminate;
};

/// Throws ConfigError unless alpha, beta, s_lower > 0.
ThresholdVerdict classify_boundedness(double alpha, double beta, double s_lower);

struct ScalingRow {
  double theta = 0.0;
  double energy = 0.0;      ///< E with the inhomogeneous kinetic term
  double energy_tilde = 0.0;
  double hdot_half = 0.0;   ///< ||phi_theta||_{Hdot^1/2}
  double mass = 0.0;
  std::string method;       ///< analytic, spectral or trilinear
  double kinetic_gap = 0.0; ///< (||.||_{H^1/2}^2 - ||.||_{Hdot^1/2}^2) / 2
};

struct ScalingTable {
  double base_energy_tilde = 0.0;
  bool sign_report = false;  ///< precondition on the sign of E~(phi) failed; no rows
  bool truncated = false;
  double truncated_at = 0.0;  ///< first theta the grid could not resolve
  std::vector<std::string> warnings;
  std::vector<ScalingRow> rows;

  /// max |(E~(phi_theta)/theta) / E~(phi) - 1| over the rows.
  double ratio_spread() const;
};

/// Exact family theta -> theta^{3/2} phi(theta x) sampled afresh (e.g. a closed-form Gaussian).
using ScalingFamily = std::function<Field(double theta)>;

/**
 * theta increasing, p = 8/3, E~(phi) < 0 expected. Rows stop at the first theta the
 * grid cannot resolve.
 */
ScalingTable blowup_experiment(const Field& phi, const Params& params,
                               const std::vector<double>& thetas,
                               ResampleMethod method = ResampleMethod::spectral,
                               const ScalingFamily& exact = {});

/// theta decreasing in (0, 1], p = 8/3, E~(phi) > 0 expected.
ScalingTable blowdown_experiment(const Field& phi, const Params& params,
                                 const std::vector<double>& thetas,
                                 ResampleMethod method = ResampleMethod::spectral,
                                 const ScalingFamily& exact = {});

/**
 * CSV with header theta,E,E_tilde,hdot_half,mass,method,kinetic_gap. A truncated
 * table ends with a row "theta,,,,,truncated," naming the first unresolved theta.
 */
std::string scaling_csv(const ScalingTable& table);

}  // namespace srsp
