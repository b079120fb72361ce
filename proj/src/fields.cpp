#include "dirac/fields.hpp"

#include "dirac/quadrature.hpp"

namespace dirac {

double uniform_tube_total_flux(const TubeSpec<double>& spec) {
  spec.validate();
  auto integrand = [&](double rho) { return uniform_tube_field(spec, rho) * 2.0 * std::numbers::pi * rho; };
  // The field is piecewise constant; integrate the non-zero piece.
  const auto res = integrate_adaptive(integrand, 0.0, spec.R, 0.0, 1e-13);
  return res.value;
}

double proca_tube_total_flux(double g, double mu) {
  if (!(mu > 0.0)) throw DomainError("proca_tube_total_flux: photon mass must be > 0");
  auto integrand = [&](double rho) {
    return rho > 0.0 ? proca_tube_profile(g, mu, rho) * 2.0 * std::numbers::pi * rho : 0.0;
  };
  // Split at one screening length: log singularity below, exponential tail above.
  const double knee = 1.0 / mu;
  const auto core = integrate_adaptive(integrand, 0.0, knee, 0.0, 1e-13);
  const auto tail = integrate_to_infinity(integrand, knee, 0.0, 1e-13);
  if (!core.converged || !tail.converged)
    throw ConvergenceError("proca_tube_total_flux: radial quadrature did not converge", core.value + tail.value);
  return core.value + tail.value;
}

}  // namespace dirac
