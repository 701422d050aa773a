#include "srsp/identities.hpp"

#include "srsp/errors.hpp"
#include "srsp/fft.hpp"
#include "srsp/resample.hpp"

#include <algorithm>
#include <cmath>

namespace srsp {

namespace {

constexpr double derivative_step = 1e-3;

Residual make_residual(double residual, double scale) {
  return Residual{residual, scale > 0.0 ? scale : 1.0};
}

double pohozaev_kinetic(const NormSet& n, KineticVariant variant) {
  return variant == KineticVariant::homogeneous ? 0.5 * n.hdot_half_sq
                                                : 0.5 * (n.h_half_sq - n.h_minus_half_sq);
}

void require_nonzero(const Field& v, const char* where) {
  if (v.is_zero()) throw DegenerateInputError(std::string(where) + ": zero field");
}

}  // namespace

Residual virial_residual(const Field& v, const Params& params) {
  params.validate_couplings();
  if (v.is_zero()) return {};
  const double hartree = 2.0 * params.alpha * hartree_double_integral(v);
  const double local = params.beta * (params.p - 2.0) * norms(v, params.p).lp_p;
  return make_residual(hartree - local, std::max(hartree, local));
}

Residual pohozaev_residual(const Field& v, const Params& params, KineticVariant variant) {
  params.validate_couplings();
  if (v.is_zero()) return {};
  const NormSet n = norms(v, params.p);
  const double kinetic = pohozaev_kinetic(n, variant);
  const double hartree = params.alpha * hartree_double_integral(v);
  const double local = params.beta * (3.0 * params.p - 6.0) / 2.0 * n.lp_p;
  return make_residual(kinetic + hartree - local, std::max({std::abs(kinetic), hartree, local}));
}

double pohozaev_multiplier_form(const Field& v, const Params& params) {
  params.validate_couplings();
  if (v.is_zero()) return 0.0;
  const Grid& grid = v.grid();
  const Eigen::ArrayXd a2 = forward_transform(grid, v.values()).abs2();
  const double w = grid.cell_volume() / static_cast<double>(grid.size());
  const double kinetic = 0.5 * (grid.k_squared() / grid.bracket_k() * a2).sum() * w;
  return kinetic + params.alpha * hartree_double_integral(v) -
         params.beta * (3.0 * params.p - 6.0) / 2.0 * norms(v, params.p).lp_p;
}

double el_residual(const Field& v, const Params& params, double omega, KineticVariant variant) {
  require_nonzero(v, "el_residual");
  Field r = gradient(v, params, variant);
  r -= omega * v;
  return std::sqrt(mass(r) / mass(v));
}

ScalingDerivatives scaling_derivative_check(const Field& v, const Params& params,
                                            KineticVariant variant) {
  require_nonzero(v, "scaling_derivative_check");
  const EnergyReference ref(v, params, variant);
  const EnergyBreakdown& b = ref.breakdown();
  const double m = b.norms.l2_sq;
  const double eps = derivative_step;

  ScalingDerivatives out;
  const Residual virial = virial_residual(v, params);
  out.f_prime = virial.residual / m;
  // J(theta) - J(1) with J = E / mass along theta v.
  auto j_change = [&](double theta) {
    const double de = ref.energy_change(theta * v);
    return (b.total * (1.0 - theta * theta) + de) / (theta * theta * m);
  };
  out.f_prime_fd = (j_change(1.0 + eps) - j_change(1.0 - eps)) / (2.0 * eps);
  out.f_agreement = std::abs(out.f_prime - out.f_prime_fd) / (virial.scale / m);

  const Residual pohozaev = pohozaev_residual(v, params, variant);
  out.g_prime = pohozaev.residual;
  const Field up = scale_mass_preserving(v, 1.0 + eps).field;
  const Field down = scale_mass_preserving(v, 1.0 - eps).field;
  out.g_prime_fd = (ref.energy_change(up) - ref.energy_change(down)) / (2.0 * eps);
  out.g_agreement = std::abs(out.g_prime - out.g_prime_fd) / pohozaev.scale;
  return out;
}

IdentityReport verify_identities(const Field& v, const Params& params, std::optional<double> omega,
                                 KineticVariant variant) {
  IdentityReport r;
  if (v.is_zero()) {
    params.validate_couplings();
    r.omega = omega.value_or(0.0);
    return r;
  }
  const Residual virial = virial_residual(v, params);
  const Residual pohozaev = pohozaev_residual(v, params, variant);
  r.virial_residual = virial.residual;
  r.virial_scale = virial.scale;
  r.pohozaev_residual = pohozaev.residual;
  r.pohozaev_scale = pohozaev.scale;

  const Field g = gradient(v, params, variant);
  const double m = mass(v);
  r.omega = omega ? *omega : real_inner(g, v) / m;
  Field res = g;
  res -= r.omega * v;
  r.el_residual_rel = std::sqrt(mass(res) / m);

  r.derivatives = scaling_derivative_check(v, params, variant);
  r.f_prime_at_1 = r.derivatives.f_prime;
  r.g_prime_at_1 = r.derivatives.g_prime;
  return r;
}

}  // namespace srsp
