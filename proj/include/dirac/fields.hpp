#pragma once

// Closed-form static configurations: screened (Yukawa) and bare charge
// fields, the monopole field, the two Wu-Yang patch potentials, uniform and
// Proca-screened flux tubes, and the massive-photon dispersion relation.
//
// Units: hbar = c = 1. A pole of strength g emits total flux 4*pi*g and a
// point charge q has field q/r^2, so the Dirac condition reads 2qg in Z.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "dirac/errors.hpp"

namespace dirac {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
using Vec3d = Vec3<double>;

template <typename Scalar = double>
struct PhysicalConfig {
  Scalar q{0};   // electric charge
  Scalar g{0};   // magnetic pole strength
  Scalar mu{0};  // photon mass, inverse length

  void validate() const {
    using std::isfinite;
    if (!isfinite(q) || !isfinite(g) || !isfinite(mu)) throw DomainError("PhysicalConfig: non-finite parameter");
    if (mu < Scalar(0)) throw DomainError("PhysicalConfig: photon mass must be >= 0");
  }
};

/// Uniform tube of radius R (field 4g/R^2 inside) or Proca tube of mass mu.
template <typename Scalar = double>
struct TubeSpec {
  Scalar g{0};
  Scalar R{1};
  Scalar mu{0};

  void validate() const {
    if (!(R > Scalar(0))) throw DomainError("TubeSpec: radius must be > 0");
  }
};

enum class Patch { North, South };

/// Angular distance from an excluded axis below which patch potentials refuse
/// to evaluate.
inline constexpr double kAxisExclusion = 1e-9;

template <typename Scalar>
Vec3<Scalar> from_spherical(Scalar r, Scalar theta, Scalar phi) {
  using std::cos;
  using std::sin;
  return {r * sin(theta) * cos(phi), r * sin(theta) * sin(phi), r * cos(theta)};
}

/// Unit azimuthal vector; undefined on the z axis.
template <typename Scalar>
Vec3<Scalar> azimuthal_unit(const Vec3<Scalar>& r) {
  using std::hypot;
  const Scalar rho = hypot(r.x(), r.y());
  if (rho == Scalar(0)) throw SingularPointError("azimuthal direction undefined on the z axis");
  return Vec3<Scalar>(-r.y() / rho, r.x() / rho, Scalar(0));
}

template <typename Scalar>
Vec3<Scalar> yukawa_electric_field(const PhysicalConfig<Scalar>& cfg, const Vec3<Scalar>& r) {
  using std::exp;
  const Scalar dist = r.norm();
  if (dist == Scalar(0)) throw SingularPointError("yukawa_electric_field: evaluation at the charge");
  const Scalar x = cfg.mu * dist;
  const Scalar magnitude = cfg.q * (Scalar(1) + x) * exp(-x) / (dist * dist);
  return magnitude * r / dist;
}

/// Electric flux through the sphere of radius R divided by 4*pi.
template <typename Scalar>
Scalar local_charge(const PhysicalConfig<Scalar>& cfg, Scalar R) {
  using std::exp;
  if (!(R > Scalar(0))) throw DomainError("local_charge: radius must be > 0");
  const Scalar x = cfg.mu * R;
  return cfg.q * (Scalar(1) + x) * exp(-x);
}

/// The pole field g r_hat / r^2. The photon mass does not enter.
template <typename Scalar>
Vec3<Scalar> monopole_field(const PhysicalConfig<Scalar>& cfg, const Vec3<Scalar>& r) {
  const Scalar dist = r.norm();
  if (dist == Scalar(0)) throw SingularPointError("monopole_field: evaluation at the pole");
  return cfg.g * r / (dist * dist * dist);
}

/// Wu-Yang potentials. North: A = g(1-cos t)/(r sin t) phi_hat, singular on
/// the negative z axis. South: A = -g(1+cos t)/(r sin t) phi_hat, singular on
/// the positive z axis. Written as g(-y,x,0)/(r(r+z)) and -g(-y,x,0)/(r(r-z))
/// to stay accurate near the regular pole.
template <typename Scalar>
Vec3<Scalar> wu_yang_potential(Patch patch, Scalar g, const Vec3<Scalar>& r) {
  using std::atan2;
  using std::hypot;
  const Scalar dist = r.norm();
  if (dist == Scalar(0)) throw SingularPointError("wu_yang_potential: evaluation at the pole");
  const Scalar rho = hypot(r.x(), r.y());
  const Scalar theta = atan2(rho, r.z());
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Vec3<Scalar> swirl(-r.y(), r.x(), Scalar(0));
  if (patch == Patch::North) {
    if (pi - theta < Scalar(kAxisExclusion))
      throw SingularPointError("wu_yang_potential: north patch evaluated on the negative z axis");
    return g * swirl / (dist * (dist + r.z()));
  }
  if (theta < Scalar(kAxisExclusion))
    throw SingularPointError("wu_yang_potential: south patch evaluated on the positive z axis");
  return -g * swirl / (dist * (dist - r.z()));
}

/// Uniform tube along z: A = B z_hat x r / 2 inside (B = 4g/R^2), pure-gauge
/// A_phi = 2g/rho outside, so the loop integral is 4*pi*g on any enclosing loop.
template <typename Scalar>
Vec3<Scalar> tube_potential(const TubeSpec<Scalar>& spec, const Vec3<Scalar>& r) {
  using std::hypot;
  spec.validate();
  const Scalar rho = hypot(r.x(), r.y());
  const Vec3<Scalar> swirl(-r.y(), r.x(), Scalar(0));
  if (rho <= spec.R) {
    const Scalar B = Scalar(4) * spec.g / (spec.R * spec.R);
    return Scalar(0.5) * B * swirl;
  }
  return Scalar(2) * spec.g * swirl / (rho * rho);
}

/// z field of the uniform tube at cylindrical radius rho.
template <typename Scalar>
Scalar uniform_tube_field(const TubeSpec<Scalar>& spec, Scalar rho) {
  spec.validate();
  return rho <= spec.R ? Scalar(4) * spec.g / (spec.R * spec.R) : Scalar(0);
}

/// Proca-screened tube: B_z(rho) = 2 g mu^2 K0(mu rho), total flux 4*pi*g.
template <typename Scalar>
Scalar proca_tube_profile(Scalar g, Scalar mu, Scalar rho) {
  if (!(mu > Scalar(0))) throw DomainError("proca_tube_profile: photon mass must be > 0");
  if (!(rho > Scalar(0))) throw DomainError("proca_tube_profile: radius must be > 0");
  return Scalar(2) * g * mu * mu * static_cast<Scalar>(std::cyl_bessel_k(0.0, static_cast<double>(mu * rho)));
}

template <typename Scalar>
Scalar proca_dispersion(Scalar k, Scalar mu) {
  using std::sqrt;
  if (k < Scalar(0) || mu < Scalar(0)) throw DomainError("proca_dispersion: k and mu must be >= 0");
  return sqrt(k * k + mu * mu);
}

// Total tube fluxes by radial quadrature of B_z * 2*pi*rho.
double uniform_tube_total_flux(const TubeSpec<double>& spec);
double proca_tube_total_flux(double g, double mu);

}  // namespace dirac
