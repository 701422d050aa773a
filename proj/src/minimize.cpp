#include "srsp/minimize.hpp"

#include "srsp/errors.hpp"
#include "srsp/resample.hpp"
#include "srsp/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srsp {

namespace {

// Boundary-layer mass fraction below which an iterate counts as localized.
constexpr double localized_fraction = 1e-3;

void require_nonzero(const Field& u, const char* where) {
  if (u.is_zero()) throw DegenerateInputError(std::string(where) + ": zero field");
}

Eigen::ArrayXd preconditioner(const Grid& grid, KineticVariant variant) {
  if (variant == KineticVariant::homogeneous) return 1.0 / (grid.k_abs() + 1.0);
  return 1.0 / grid.bracket_k();
}

void check_unbounded(const EnergyReference& ref, double energy, const Params& params,
                     const MinimizeConfig& config, int iteration) {
  if (energy < config.energy_floor) {
    throw UnboundedDetected("energy fell below the configured floor", energy, iteration);
  }
  if (!params.is_critical()) return;
  const EnergyBreakdown& b = ref.breakdown();
  const double half_hdot = 0.5 * b.norms.hdot_half_sq;
  const double e_tilde = half_hdot + b.hartree - b.potential;
  if (e_tilde < -config.unbounded_margin * half_hdot &&
      boundary_mass_fraction(ref.field()) < localized_fraction) {
    throw UnboundedDetected("localized iterate with negative homogeneous energy", energy,
                            iteration);
  }
}

double max_abs(const Eigen::ArrayXcd& a) { return a.abs().maxCoeff(); }

}  // namespace

void MinimizeConfig::validate() const {
  if (max_iters < 0) throw ConfigError("minimize: max_iters must be nonnegative");
  if (!(grad_tol > 0.0)) throw ConfigError("minimize: grad_tol must be positive");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw ConfigError("minimize: initial_step must be positive");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw ConfigError("minimize: backtrack_factor must lie in (0, 1)");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ConfigError("minimize: armijo_c must lie in (0, 1)");
  if (recenter_every < 0) throw ConfigError("minimize: recenter_every must be nonnegative");
  if (std::isnan(energy_floor)) throw ConfigError("minimize: energy_floor must be a number");
  if (!(unbounded_margin >= 0.0)) throw ConfigError("minimize: unbounded_margin must be nonnegative");
  if (init.kind == InitKind::gaussian && !(init.width >= 0.0)) {
    throw ConfigError("minimize: gaussian width must be nonnegative");
  }
  if (init.kind == InitKind::from_file && init.path.empty()) {
    throw ConfigError("minimize: from_file init needs a path");
  }
}

Field project_mass(const Field& u, double rho) {
  if (!(rho > 0.0)) throw ConfigError("project_mass: rho must be positive");
  require_finite(u, "project_mass");
  const double m = mass(u);
  if (m == 0.0) throw DegenerateInputError("project_mass: cannot project the zero field");
  return std::sqrt(rho / m) * u;
}

Field initial_field(const Grid& grid, const InitSpec& spec) {
  switch (spec.kind) {
    case InitKind::gaussian:
      return gaussian(grid, spec.width > 0.0 ? spec.width : grid.box_length() / 8.0);
    case InitKind::from_file: {
      Field u = read_snapshot(spec.path);
      if (!(u.grid() == grid)) throw ConfigError("init snapshot grid does not match the run grid");
      return u;
    }
    case InitKind::random: {
      // Smooth complex noise under a broad envelope.
      Field u = random_smooth_field(grid, spec.seed, grid.box_length() / 16.0);
      u.values() *= gaussian(grid, grid.box_length() / 4.0).values();
      return u;
    }
  }
  throw ConfigError("unknown init kind");
}

double lagrange_multiplier(const Field& v, const Params& params, KineticVariant variant) {
  require_nonzero(v, "lagrange_multiplier");
  return real_inner(gradient(v, params, variant), v) / mass(v);
}

Field recenter(const Field& u) {
  require_nonzero(u, "recenter");
  const Grid& grid = u.grid();
  const int n = grid.n();
  const Eigen::ArrayXd density = u.values().abs2();
  Eigen::Index peak = 0;
  density.maxCoeff(&peak);
  const int m[3] = {static_cast<int>(peak % n), static_cast<int>((peak / n) % n),
                    static_cast<int>(peak / (static_cast<Eigen::Index>(n) * n))};
  auto wrap = [n](int d) { return ((d + n / 2) % n + n) % n - n / 2; };
  double moment[3] = {0.0, 0.0, 0.0};
  double total = 0.0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double r = density[grid.index(ix, iy, iz)];
        moment[0] += r * wrap(ix - m[0]);
        moment[1] += r * wrap(iy - m[1]);
        moment[2] += r * wrap(iz - m[2]);
        total += r;
      }
  int shift[3];
  for (int a = 0; a < 3; ++a) {
    const double centroid = m[a] + moment[a] / total;
    shift[a] = static_cast<int>(std::lround(n / 2 - centroid));
  }
  if (shift[0] == 0 && shift[1] == 0 && shift[2] == 0) return u;
  return circular_shift(u, shift[0], shift[1], shift[2]);
}

Field align_phase(const Field& u, double* imaginary_fraction) {
  const cdouble s = (u.values() * u.values()).sum();
  const double theta = s == cdouble(0.0) ? 0.0 : 0.5 * std::arg(s);
  Field v = std::polar(1.0, -theta) * u;
  if (imaginary_fraction) {
    const double total = v.values().abs2().sum();
    *imaginary_fraction = total > 0.0 ? v.values().imag().square().sum() / total : 0.0;
  }
  return v;
}

GroundStateResult minimize(const Grid& grid, const Params& params, const MinimizeConfig& config) {
  config.validate();
  return minimize_from(initial_field(grid, config.init), params, config);
}

GroundStateResult minimize_from(const Field& u0, const Params& params, const MinimizeConfig& config) {
  config.validate();
  params.validate_couplings();
  if (!(params.rho > 0.0) || !std::isfinite(params.rho)) {
    throw ConfigError("params: rho must be positive");
  }
  const double rho = params.rho;
  const KineticVariant variant = config.variant;
  const Grid& grid = u0.grid();
  const Eigen::ArrayXd precond = preconditioner(grid, variant);
  const double tol = config.grad_tol * std::sqrt(rho);

  GroundStateResult result{Field(grid), {}, 0.0, {}, 0, false, false, 0.0, {}};
  Field u = project_mass(u0, rho);
  EnergyReference ref(u, params, variant);
  double e = ref.energy();
  check_unbounded(ref, e, params, config, 0);
  double tau = config.initial_step;

  for (int it = 0;; ++it) {
    const Field g = ref.gradient();
    if (!g.all_finite()) throw NumericalFailure("minimize: non-finite gradient");
    const double lambda = real_inner(g, u) / rho;
    Field tangent = g;
    tangent -= lambda * u;
    const double gnorm = std::sqrt(mass(tangent));

    if (gnorm <= tol) {
      result.converged = true;
      result.trace.push_back({it, e, gnorm, 0.0});
      break;
    }
    if (it >= config.max_iters) {
      result.trace.push_back({it, e, gnorm, 0.0});
      break;
    }

    Field d = tangent;
    if (config.preconditioned) {
      const Field pg = apply_multiplier(g, precond);
      const Field pu = apply_multiplier(u, precond);
      d = pg;
      d -= (real_inner(pg, u) / real_inner(pu, u)) * pu;
    }
    const double slope = real_inner(g, d);
    const double d_max = max_abs(d.values());
    const double u_max = max_abs(u.values());

    bool accepted = false;
    double de = 0.0;
    Field candidate(grid);
    while (tau * d_max > std::numeric_limits<double>::epsilon() * 1e-2 * u_max) {
      Field w = u;
      w -= tau * d;
      candidate = project_mass(w, rho);
      // The retraction hits S(rho) only to rounding; the multiplier term removes the
      // first-order energy change caused by that residual mass drift.
      double dm = 0.0;
      de = ref.energy_change(candidate, &dm) - 0.5 * lambda * dm;
      if (std::isfinite(de) && de <= -config.armijo_c * tau * slope) {
        accepted = true;
        break;
      }
      tau *= config.backtrack_factor;
    }
    if (!accepted) {
      result.stagnated = true;
      result.trace.push_back({it, e, gnorm, 0.0});
      break;
    }

    result.trace.push_back({it, e, gnorm, tau});
    e += de;
    u = std::move(candidate);
    if (config.recenter_every > 0 && (it + 1) % config.recenter_every == 0) u = recenter(u);
    ref = EnergyReference(u, params, variant);
    if (!std::isfinite(ref.energy())) throw NumericalFailure("minimize: non-finite energy");
    check_unbounded(ref, e, params, config, it + 1);
    result.iterations = it + 1;
    tau = std::min(2.0 * tau, config.initial_step);
  }

  result.field = align_phase(recenter(u), &result.imaginary_fraction);
  result.energy = energy(result.field, params, variant);
  result.omega = lagrange_multiplier(result.field, params, variant);
  result.residuals = verify_identities(result.field, params, result.omega, variant);
  return result;
}

}  // namespace srsp
