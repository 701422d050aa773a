#include "srsp/errors.hpp"
#include "srsp/identities.hpp"
#include "srsp/minimize.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace srsp;
using oracle::relative_error;

namespace {

const Params standard{1.0, 1.0, 2.5, 0.1};

Field gaussian_on_sphere(const Grid& g, double rho) {
  const Field u = gaussian(g, 1.0);
  return std::sqrt(rho / mass(u)) * u;
}

// Compact soliton on a small grid: localized enough for the dilation identity to hold
// to discretization accuracy.
const GroundStateResult& compact_minimizer() {
  static const GroundStateResult r = [] {
    MinimizeConfig c;
    c.initial_step = 1.0;
    return minimize(make_grid(32, 16.0), Params{0.2, 2.0, 2.5, 0.3}, c);
  }();
  return r;
}

}  // namespace

TEST_CASE("zero-field convention") {
  const Field z(make_grid(8, 4.0));
  const Residual v = virial_residual(z, standard);
  const Residual p = pohozaev_residual(z, standard);
  CHECK(v.residual == 0.0);
  CHECK(v.scale == 1.0);
  CHECK(p.residual == 0.0);
  CHECK(p.scale == 1.0);
  const IdentityReport r = verify_identities(z, standard);
  CHECK(r.virial_residual == 0.0);
  CHECK(r.pohozaev_residual == 0.0);
  CHECK(r.el_residual_rel == 0.0);
  CHECK_THROWS_AS(el_residual(z, standard, 1.0), DegenerateInputError);
  CHECK_THROWS_AS(scaling_derivative_check(z, standard), DegenerateInputError);
}

TEST_CASE("Pohozaev two-norm and multiplier forms agree") {
  const Grid g = make_grid(16, 8.0);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Field u = seed % 2 ? random_noise_field(g, seed) : random_smooth_field(g, seed);
    const Residual r = pohozaev_residual(u, standard);
    CHECK(std::abs(r.residual - pohozaev_multiplier_form(u, standard)) / r.scale < 1e-10);
  }
}

TEST_CASE("el_residual on an exact eigenpair and under omega perturbation") {
  const Grid g = make_grid(16, 2.0 * std::numbers::pi);
  const Field c = sample(g, [](double, double, double) { return cdouble(0.2); });
  const Params free{0.0, 0.0, 2.5, 1.0};
  CHECK(el_residual(c, free, 1.0) < 1e-14);
  CHECK(el_residual(c, free, 1.1) == doctest::Approx(0.1).epsilon(1e-12));

  const Field mode = sample(g, [](double x, double, double z) { return std::polar(1.0, x - 2.0 * z); });
  CHECK(el_residual(mode, free, std::sqrt(6.0)) < 1e-12);
}

TEST_CASE("f'(1) times the mass reproduces the virial residual") {
  const Grid g = make_grid(16, 8.0);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Field u = random_smooth_field(g, seed, 1.0);
    const ScalingDerivatives d = scaling_derivative_check(u, standard);
    const Residual v = virial_residual(u, standard);
    const double m = norms(u, standard.p).l2_sq;
    CHECK(std::abs(d.f_prime * m - v.residual) <= 2.0 * std::numeric_limits<double>::epsilon() *
                                                      std::abs(v.residual));
  }
}

TEST_CASE("off-minimizer Gaussian: identities fail, derivatives match finite differences") {
  const Field u = gaussian_on_sphere(make_grid(32, 12.0), 0.1);
  const IdentityReport r = verify_identities(u, standard);
  CHECK(std::abs(r.virial_relative()) > 1e-2);
  CHECK(std::abs(r.pohozaev_relative()) > 1e-2);
  CHECK(r.el_residual_rel > 1e-2);
  CHECK(std::abs(r.f_prime_at_1) > 1e-3);
  CHECK(std::abs(r.g_prime_at_1) > 1e-3);
  CHECK(r.derivatives.f_agreement < 1e-3);
  CHECK(r.derivatives.g_agreement < 1e-3);
  CHECK(relative_error(r.derivatives.f_prime_fd, r.f_prime_at_1) < 1e-3);
  CHECK(relative_error(r.derivatives.g_prime_fd, r.g_prime_at_1) < 1e-3);
}

TEST_CASE("homogeneous Pohozaev residual equals the homogeneous energy at p = 8/3") {
  // Under mass-preserving dilation every term of E~ scales linearly at the critical exponent.
  const Params crit{1.0, 1.0, critical_exponent, 1.0};
  const Field u = random_smooth_field(make_grid(16, 8.0), 9, 1.0);
  const Residual r = pohozaev_residual(u, crit, KineticVariant::homogeneous);
  CHECK(relative_error(r.residual, energy(u, crit, KineticVariant::homogeneous).total) < 1e-12);
}

TEST_CASE("verifier discriminates a minimizer from a probe") {
  const GroundStateResult& m = compact_minimizer();
  REQUIRE(m.converged);
  const Params params{0.2, 2.0, 2.5, 0.3};
  CHECK(std::abs(m.residuals.pohozaev_relative()) < 1e-3);
  CHECK(m.residuals.el_residual_rel < 1e-6);
  CHECK(m.residuals.derivatives.g_agreement < 1e-3);
  CHECK(el_residual(m.field, params, m.omega) == doctest::Approx(m.residuals.el_residual_rel));
  CHECK(el_residual(m.field, params, m.omega + 0.1) >= 0.05);

  const IdentityReport probe = verify_identities(gaussian_on_sphere(m.field.grid(), 0.3), params);
  CHECK(std::abs(probe.pohozaev_relative()) > 1e-2);
  CHECK(probe.el_residual_rel > 1e-2);
}

TEST_CASE("Hdot^-1 bookkeeping for the Coulomb energy") {
  // ||rho||_{Hdot^-1}^2 = D / (4 pi) for rho = |u|^2, u = exp(-|x|^2):
  // rho^(k) = (pi/2)^{3/2} exp(-k^2/8), radial quadrature of |rho^|^2 / k^2.
  const int steps = 20000;
  const double kmax = 40.0;
  const double dk = kmax / steps;
  double integral = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double k = i * dk;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    integral += w * std::pow(std::numbers::pi / 2.0, 3.0) * std::exp(-k * k / 4.0) * 4.0 *
                std::numbers::pi;
  }
  integral *= dk / std::pow(2.0 * std::numbers::pi, 3.0);
  CHECK(relative_error(integral, oracle::gaussian_d_value / (4.0 * std::numbers::pi)) < 1e-10);
}
