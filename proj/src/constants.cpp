#include "srsp/constants.hpp"

#include "srsp/errors.hpp"
#include "srsp/fft.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace srsp {

namespace {

constexpr int max_halvings = 40;

struct QuotientEval {
  QuotientParts parts;
  Field grad_log;  // L2 gradient of log Q
};

QuotientParts assemble(double lp, double hd, double d) {
  QuotientParts q;
  q.l83_norm = std::pow(lp, 3.0 / 8.0);
  q.hdot_half_sq = hd;
  q.d_value = d;
  q.quotient = q.l83_norm / (std::pow(hd, 0.25) * std::pow(d, 0.125));
  return q;
}

QuotientEval evaluate(const Field& phi) {
  const Grid& grid = phi.grid();
  const Eigen::ArrayXcd phi_hat = forward_transform(grid, phi.values());
  const double w = grid.cell_volume() / static_cast<double>(grid.size());
  const double hd = (grid.k_abs() * phi_hat.abs2()).sum() * w;
  const Eigen::ArrayXd density = phi.values().abs2();
  const Eigen::ArrayXd cbrt_density = density.unaryExpr([](double r) { return std::cbrt(r); });
  const double lp = (density * cbrt_density).sum() * grid.cell_volume();
  const Eigen::ArrayXd potential = hartree_potential(phi);
  const double d = (potential * density).sum() * grid.cell_volume();

  Eigen::ArrayXcd coeffs = phi_hat * grid.k_abs().cast<cdouble>();
  Eigen::ArrayXcd g = (cbrt_density / lp).cast<cdouble>() * phi.values();
  g -= (0.5 / hd) * inverse_transform(grid, coeffs);
  g -= (potential * (0.5 / d)).cast<cdouble>() * phi.values();
  return {assemble(lp, hd, d), Field(grid, std::move(g))};
}

double rms_radius(const Field& phi) {
  const Grid& grid = phi.grid();
  const int n = grid.n();
  double acc = 0.0;
  double total = 0.0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double x = grid.coordinate(ix), y = grid.coordinate(iy), z = grid.coordinate(iz);
        const double r = std::norm(phi(ix, iy, iz));
        acc += r * (x * x + y * y + z * z);
        total += r;
      }
  return total > 0.0 ? std::sqrt(acc / total) : 0.0;
}

Field unit_mass(const Field& u) { return std::sqrt(1.0 / mass(u)) * u; }

std::string format_theta(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", theta);
  return buf;
}

ScalingTable run_scaling(const Field& phi, const Params& params, const std::vector<double>& thetas,
                         ResampleMethod method, const ScalingFamily& exact, bool blowup) {
  params.validate_couplings();
  if (!params.is_critical()) throw ConfigError("scaling experiments need p = 8/3");
  if (thetas.empty()) throw ConfigError("scaling experiment: empty theta schedule");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] > 0.0) || !std::isfinite(thetas[i])) {
      throw ConfigError("scaling experiment: theta values must be positive");
    }
    if (!blowup && thetas[i] > 1.0) throw ConfigError("blow-down: theta values must lie in (0, 1]");
    if (i > 0 && (blowup ? thetas[i] <= thetas[i - 1] : thetas[i] >= thetas[i - 1])) {
      throw ConfigError(blowup ? "blow-up: theta schedule must increase"
                               : "blow-down: theta schedule must decrease");
    }
  }
  require_finite(phi, "scaling experiment");
  if (phi.is_zero()) throw DegenerateInputError("scaling experiment: zero field");

  ScalingTable table;
  table.base_energy_tilde = energy(phi, params, KineticVariant::homogeneous).total;
  if (blowup ? table.base_energy_tilde >= 0.0 : table.base_energy_tilde <= 0.0) {
    table.sign_report = true;
    return table;
  }

  for (const double theta : thetas) {
    Field f(phi.grid());
    std::string how;
    bool under_resolved = false;
    double lost = 0.0;
    if (exact) {
      lost = dilation_loss(phi, theta);
      under_resolved = lost > resolution_tolerance;
      if (!under_resolved) f = exact(theta);
      how = "analytic";
    } else {
      ScaledField s = scale_mass_preserving(phi, theta, method);
      under_resolved = s.resolution_warning;
      lost = s.lost_fraction;
      f = std::move(s.field);
      how = method == ResampleMethod::spectral ? "spectral" : "trilinear";
    }
    if (under_resolved) {
      table.truncated = true;
      table.truncated_at = theta;
      std::ostringstream msg;
      msg << "theta=" << format_theta(theta) << " exceeds grid resolution (lost mass fraction "
          << lost << "); schedule truncated";
      table.warnings.push_back(msg.str());
      break;
    }
    const EnergyBreakdown b = energy(f, params, KineticVariant::inhomogeneous);
    ScalingRow row;
    row.theta = theta;
    row.energy = b.total;
    row.kinetic_gap = 0.5 * (b.norms.h_half_sq - b.norms.hdot_half_sq);
    row.energy_tilde = b.total - row.kinetic_gap;
    row.hdot_half = std::sqrt(b.norms.hdot_half_sq);
    row.mass = b.norms.l2_sq;
    row.method = how;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace

QuotientParts weinstein_parts(const Field& phi) {
  require_finite(phi, "weinstein_quotient");
  if (phi.is_zero()) throw DegenerateInputError("weinstein_quotient: zero field");
  const NormSet n = norms(phi, critical_exponent);
  return assemble(n.lp_p, n.hdot_half_sq, hartree_double_integral(phi));
}

double weinstein_quotient(const Field& phi) { return weinstein_parts(phi).quotient; }

void AscentConfig::validate() const {
  if (steps < 0) throw ConfigError("ascent: steps must be nonnegative");
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ConfigError("ascent: step_size must be positive");
  }
  if (!(init_width >= 0.0)) throw ConfigError("ascent: init_width must be nonnegative");
  if (!(init_noise >= 0.0)) throw ConfigError("ascent: init_noise must be nonnegative");
}

BestConstantEstimate estimate_best_constant(const Grid& grid, const AscentConfig& config) {
  config.validate();
  const double width = config.init_width > 0.0 ? config.init_width : grid.box_length() / 8.0;
  Field phi = gaussian(grid, width);
  if (config.init_noise > 0.0) {
    const Field noise = random_smooth_field(grid, config.seed, 0.5 * width);
    const double scale = config.init_noise / noise.values().abs().maxCoeff();
    phi.values() *= (1.0 + scale * noise.values().real()).cast<cdouble>();
  }
  phi = unit_mass(phi);
  const Eigen::ArrayXd precond = 1.0 / (grid.k_abs() + 1.0);

  const double radius = rms_radius(phi);
  // On the torus the quotient is unbounded along fields that spread toward the
  // constant mode, so each trial is dilated back to the initial rms radius.
  auto fix_gauge = [&](const Field& u) {
    const ScaledField s = scale_mass_preserving(u, rms_radius(u) / radius);
    return unit_mass(s.field);
  };

  BestConstantEstimate out{0.0, phi, {}};
  QuotientEval current = evaluate(phi);
  auto fail = [&](int it) {
    std::ostringstream msg;
    msg << "ascent produced a non-finite quotient at iteration " << it << " after "
        << out.ascent_trace.size() << " trace entries";
    if (!out.ascent_trace.empty()) msg << " (best " << out.ascent_trace.back().quotient << ")";
    throw NumericalFailure(msg.str());
  };
  if (!std::isfinite(current.parts.quotient)) fail(0);
  out.s_lower = current.parts.quotient;
  out.ascent_trace.push_back({0, out.s_lower, rms_radius(phi)});

  double step = config.step_size;
  for (int it = 1; it <= config.steps; ++it) {
    Field d = apply_multiplier(current.grad_log, precond);
    d -= (real_inner(d, phi) / mass(phi)) * phi;
    bool accepted = false;
    for (int h = 0; h < max_halvings; ++h) {
      Field trial = phi;
      trial += step * d;
      trial = fix_gauge(trial);
      QuotientEval next = evaluate(trial);
      if (!std::isfinite(next.parts.quotient)) fail(it);
      if (next.parts.quotient > current.parts.quotient) {
        phi = std::move(trial);
        current = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (accepted) {
      out.s_lower = current.parts.quotient;
      out.maximizer = phi;
      step = std::min(1.5 * step, config.step_size);
    }
    out.ascent_trace.push_back({it, out.s_lower, rms_radius(phi)});
    if (!accepted) break;
  }
  // Report the quotient exactly as weinstein_quotient computes it for the stored field.
  out.s_lower = weinstein_quotient(out.maximizer);
  out.ascent_trace.back().quotient = std::max(out.ascent_trace.back().quotient, out.s_lower);
  return out;
}

std::string to_string(Verdict v) {
  return v == Verdict::unbounded_certified ? "unbounded_certified" : "indeterminate";
}

ThresholdVerdict classify_boundedness(double alpha, double beta, double s_lower) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("classify: alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("classify: beta must be positive");
  if (!(s_lower > 0.0) || !std::isfinite(s_lower)) {
    throw ConfigError("classify: s_lower must be positive");
  }
  ThresholdVerdict v;
  v.alpha = alpha;
  v.beta = beta;
  v.lhs = std::pow(27.0 * alpha / (beta * beta * beta), 0.125);
  v.rhs_lower = std::sqrt(2.0) * s_lower;
  // s_lower <= S, so only the strict inequality certifies anything.
  v.verdict = v.lhs < v.rhs_lower ? Verdict::unbounded_certified : Verdict::indeterminate;
  return v;
}

double ScalingTable::ratio_spread() const {
  double spread = 0.0;
  for (const ScalingRow& r : rows) {
    spread = std::max(spread, std::abs(r.energy_tilde / (r.theta * base_energy_tilde) - 1.0));
  }
  return spread;
}

ScalingTable blowup_experiment(const Field& phi, const Params& params,
                               const std::vector<double>& thetas, ResampleMethod method,
                               const ScalingFamily& exact) {
  return run_scaling(phi, params, thetas, method, exact, true);
}

ScalingTable blowdown_experiment(const Field& phi, const Params& params,
                                 const std::vector<double>& thetas, ResampleMethod method,
                                 const ScalingFamily& exact) {
  return run_scaling(phi, params, thetas, method, exact, false);
}

std::string scaling_csv(const ScalingTable& table) {
  std::ostringstream out;
  out << "theta,E,E_tilde,hdot_half,mass,method,kinetic_gap\n";
  char buf[256];
  for (const ScalingRow& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g\n", r.theta, r.energy,
                  r.energy_tilde, r.hdot_half, r.mass, r.method.c_str(), r.kinetic_gap);
    out << buf;
  }
  if (table.truncated) {
    std::snprintf(buf, sizeof buf, "%.17g,,,,,truncated,\n", table.truncated_at);
    out << buf;
  }
  return out.str();
}

}  // namespace srsp
