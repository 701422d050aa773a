#pragma once

#include "srsp/field.hpp"
#include "srsp/identities.hpp"
#include "srsp/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace srsp {

enum class InitKind { gaussian, from_file, random };

struct InitSpec {
  InitKind kind = InitKind::gaussian;
  double width = 0.0;  ///< gaussian width; 0 means L/8
  std::string path;    ///< snapshot for from_file
  std::uint64_t seed = 0;
};

struct MinimizeConfig {
  int max_iters = 5000;
  double grad_tol = 1e-8;  ///< on ||projected gradient||_2 / sqrt(rho)
  double initial_step = 0.1;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  InitSpec init;
  int recenter_every = 0;
  bool preconditioned = true;
  double energy_floor = -1e6;
  /// At p = 8/3: a localized iterate with E~ < -margin * Hdot/2 certifies I = -inf.
  double unbounded_margin = 1e-2;
  KineticVariant variant = KineticVariant::inhomogeneous;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct TraceEntry {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;  ///< projected-gradient L2 norm
  double step = 0.0;       ///< accepted step (0 on the last row)
};

struct GroundStateResult {
  Field field;
  EnergyBreakdown energy;
  double omega = 0.0;
  IdentityReport residuals;
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;
  double imaginary_fraction = 0.0;  ///< ||Im v||^2 / ||v||^2 after phase alignment
  std::vector<TraceEntry> trace;
};

/// sqrt(rho / ||u||^2) u. Throws DegenerateInputError for u = 0.
Field project_mass(const Field& u, double rho);

/// Initial field described by spec on grid, before projection.
Field initial_field(const Grid& grid, const InitSpec& spec);

/// Normalized gradient flow on S(rho) from the configured initial field.
GroundStateResult minimize(const Grid& grid, const Params& params, const MinimizeConfig& config);
/// Same, starting from u (projected onto S(rho) first).
GroundStateResult minimize_from(const Field& u, const Params& params, const MinimizeConfig& config);

/// Re<grad E(v), v> / ||v||^2. Throws DegenerateInputError for v = 0.
double lagrange_multiplier(const Field& v, const Params& params,
                           KineticVariant variant = KineticVariant::inhomogeneous);

/// Integer circular shift putting the periodic density centroid at the box center.
Field recenter(const Field& u);

/// Multiplies by the global phase maximizing the real part's mass.
Field align_phase(const Field& u, double* imaginary_fraction = nullptr);

}  // namespace srsp
