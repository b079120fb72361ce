#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "dirac/fields.hpp"

using namespace dirac;

namespace {

constexpr double kPi = std::numbers::pi;

// Outward flux of `field` through the sphere of radius R centred at `c`,
// composite Simpson in theta and the periodic trapezoid rule in phi.
double sphere_flux(const std::function<Vec3d(const Vec3d&)>& field, const Vec3d& c, double R, int nt = 400,
                   int np = 400) {
  double total = 0.0;
  const double ht = kPi / nt, hp = 2.0 * kPi / np;
  for (int i = 0; i <= nt; ++i) {
    const double t = i * ht;
    const double wt = (i == 0 || i == nt) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double ring = 0.0;
    for (int k = 0; k < np; ++k) {
      const Vec3d n = from_spherical(1.0, t, k * hp);
      ring += field(c + R * n).dot(n);
    }
    total += wt * ring * std::sin(t);
  }
  return total * ht / 3.0 * hp * R * R;
}

// Richardson-extrapolated central difference of component `comp` along `axis`.
double partial(const std::function<Vec3d(const Vec3d&)>& f, const Vec3d& r, int comp, int axis, double h = 1e-3) {
  auto central = [&](double s) {
    Vec3d e = Vec3d::Zero();
    e(axis) = s;
    return (f(r + e)(comp) - f(r - e)(comp)) / (2.0 * s);
  };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

Vec3d curl(const std::function<Vec3d(const Vec3d&)>& A, const Vec3d& r) {
  return {partial(A, r, 2, 1) - partial(A, r, 1, 2), partial(A, r, 0, 2) - partial(A, r, 2, 0),
          partial(A, r, 1, 0) - partial(A, r, 0, 1)};
}

// K0(x) = Int_0^inf exp(-x cosh t) dt by the trapezoid rule, which converges
// geometrically for this integrand.
double k0_oracle(double x) {
  const double h = 0.01;
  double s = 0.5 * std::exp(-x);
  for (int k = 1;; ++k) {
    const double term = std::exp(-x * std::cosh(k * h));
    s += term;
    if (term < 1e-300 || term < 1e-18 * s) break;
  }
  return s * h;
}

}  // namespace

TEST_CASE("yukawa_electric_field") {
  const Vec3d coulomb = yukawa_electric_field<double>({1, 0, 0}, Vec3d(0, 0, 2));
  CHECK(coulomb.norm() == doctest::Approx(0.25));
  CHECK(coulomb.normalized().z() == doctest::Approx(1.0));
  CHECK(yukawa_electric_field<double>({1, 0, 1}, Vec3d(1, 0, 0)).norm() == doctest::Approx(2.0 / std::exp(1.0)));
  CHECK(yukawa_electric_field<double>({0, 0, 5}, Vec3d(1, 1, 1)).isZero());
  CHECK_THROWS_AS(yukawa_electric_field<double>({1, 0, 0}, Vec3d::Zero()), SingularPointError);

  SUBCASE("mu -> 0 converges to Coulomb") {
    const Vec3d r(0.3, -1.2, 0.7);
    const Vec3d c = yukawa_electric_field<double>({1.5, 0, 0}, r);
    double prev = 1.0;
    for (double mu : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double dev = (yukawa_electric_field<double>({1.5, 0, mu}, r) - c).norm() / c.norm();
      CHECK(dev < prev);
      prev = dev;
    }
    // Leading relative deviation is (mu r)^2 / 2.
    CHECK(prev == doctest::Approx(0.5 * 1e-8 * r.squaredNorm()).epsilon(1e-3));
  }

  SUBCASE("works in other scalar types") {
    const Vec3<float> e = yukawa_electric_field<float>({1.0f, 0.0f, 1.0f}, Vec3<float>(1, 0, 0));
    CHECK(e.x() == doctest::Approx(0.735759).epsilon(1e-6));
    const auto el = yukawa_electric_field<long double>({1, 0, 1}, Vec3<long double>(1, 0, 0));
    CHECK(static_cast<double>(el.x()) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-15));
  }
}

TEST_CASE("local_charge") {
  CHECK(local_charge<double>({1, 0, 0}, 10.0) == 1.0);
  CHECK(local_charge<double>({1, 0, 1}, 1.0) == doctest::Approx(2.0 / std::exp(1.0)));
  CHECK(local_charge<double>({1, 0, 2}, 10.0) == doctest::Approx(21.0 * std::exp(-20.0)).epsilon(1e-14));
  CHECK_THROWS_AS(local_charge<double>({1, 0, 0}, 0.0), DomainError);
  CHECK_THROWS_AS(local_charge<double>({1, 0, 0}, -1.0), DomainError);

  SUBCASE("matches the surface flux of the field") {
    for (double mu : {0.0, 0.5, 2.0}) {
      for (double R : {0.5, 1.0, 10.0}) {
        const PhysicalConfig<double> cfg{1.0, 0.0, mu};
        const double flux = sphere_flux([&](const Vec3d& r) { return yukawa_electric_field(cfg, r); },
                                        Vec3d::Zero(), R, 800, 40);
        CHECK(flux / (4.0 * kPi) == doctest::Approx(local_charge(cfg, R)).epsilon(1e-10));
      }
    }
  }

  SUBCASE("screening monotonicity") {
    double prev = 2.0;
    for (double R = 0.1; R < 20.0; R *= 1.3) {
      const double qloc = local_charge<double>({1, 0, 0.7}, R);
      CHECK(qloc < prev);
      prev = qloc;
      CHECK(local_charge<double>({1, 0, 0}, R) == 1.0);
    }
  }
}

TEST_CASE("monopole_field") {
  CHECK((monopole_field<double>({0, 0.5, 0}, Vec3d(0, 0, 1)) - Vec3d(0, 0, 0.5)).norm() < 1e-15);
  CHECK((monopole_field<double>({0, 1, 0}, Vec3d(2, 0, 0)) - Vec3d(0.25, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(monopole_field<double>({0, 1, 0}, Vec3d::Zero()), SingularPointError);
  // The photon mass does not screen the pole.
  CHECK(monopole_field<double>({0, 1, 3}, Vec3d(1, 2, 3)) == monopole_field<double>({0, 1, 0}, Vec3d(1, 2, 3)));

  SUBCASE("flux through off-centre spheres is 4 pi g") {
    const PhysicalConfig<double> cfg{0, 0.5, 0};
    auto B = [&](const Vec3d& r) { return monopole_field(cfg, r); };
    for (double R : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      const Vec3d centre = 0.3 * R * Vec3d(0.5, -0.4, 0.6);
      CHECK(std::abs(sphere_flux(B, centre, R) / (4.0 * kPi * 0.5) - 1.0) < 1e-6);
    }
  }

  SUBCASE("divergence-free away from the pole") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const PhysicalConfig<double> cfg{0, 0.8, 0};
    auto B = [&](const Vec3d& r) { return monopole_field(cfg, r); };
    for (int k = 0; k < 200; ++k) {
      Vec3d r(u(rng), u(rng), u(rng));
      if (r.norm() < 0.5) continue;
      const double div = partial(B, r, 0, 0) + partial(B, r, 1, 1) + partial(B, r, 2, 2);
      CHECK(std::abs(div) < 1e-8);
    }
  }
}

TEST_CASE("wu_yang_potential") {
  const Vec3d eq(1, 0, 0);
  CHECK(wu_yang_potential(Patch::North, 1.0, eq).dot(azimuthal_unit(eq)) == doctest::Approx(1.0));
  CHECK(wu_yang_potential(Patch::South, 1.0, eq).dot(azimuthal_unit(eq)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(wu_yang_potential(Patch::North, 1.0, Vec3d(0, 0, -2)), SingularPointError);
  CHECK_THROWS_AS(wu_yang_potential(Patch::South, 1.0, Vec3d(0, 0, 2)), SingularPointError);
  CHECK_THROWS_AS(wu_yang_potential(Patch::North, 1.0, Vec3d(Vec3d::Zero())), SingularPointError);
  // Regular on the far half-axis.
  CHECK(wu_yang_potential(Patch::North, 1.0, Vec3d(0, 0, 2)).isZero());

  SUBCASE("magnitudes against the polar-angle formulas") {
    const double g = 0.7, r = 1.9;
    for (double t = 0.2; t < 3.0; t += 0.3) {
      const Vec3d p = from_spherical(r, t, 0.4);
      CHECK(wu_yang_potential(Patch::North, g, p).dot(azimuthal_unit(p)) ==
            doctest::Approx(g * (1 - std::cos(t)) / (r * std::sin(t))).epsilon(1e-13));
      CHECK(wu_yang_potential(Patch::South, g, p).dot(azimuthal_unit(p)) ==
            doctest::Approx(-g * (1 + std::cos(t)) / (r * std::sin(t))).epsilon(1e-13));
    }
  }

  SUBCASE("curl reproduces the monopole field") {
    const PhysicalConfig<double> cfg{0, 0.5, 0};
    const Vec3d p(1, 1, 1);
    for (Patch patch : {Patch::North, Patch::South}) {
      const Vec3d c = curl([&](const Vec3d& r) { return wu_yang_potential(patch, 0.5, r); }, p);
      CHECK((c - monopole_field(cfg, p)).norm() < 1e-6);
    }

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ur(0.5, 4.0), ut(0.15, kPi - 0.15), up(0.0, 2 * kPi);
    for (int k = 0; k < 100; ++k) {
      const double t = ut(rng);
      const Vec3d x = from_spherical(ur(rng), t, up(rng));
      const Patch patch = t < kPi / 2 ? Patch::North : Patch::South;
      const Vec3d c = curl([&](const Vec3d& r) { return wu_yang_potential(patch, 0.5, r); }, x);
      const Vec3d B = monopole_field(cfg, x);
      CHECK((c - B).norm() < 1e-6 * std::max(1.0, B.norm()));
    }
  }
}

TEST_CASE("tube_potential and the uniform tube") {
  const TubeSpec<double> spec{0.5, 1.0, 0.0};
  CHECK(tube_potential(spec, Vec3d(0, 0, 3)).isZero());
  const Vec3d out(2, 0, 0);
  CHECK(tube_potential(spec, out).dot(azimuthal_unit(out)) == doctest::Approx(0.5));
  CHECK(uniform_tube_field(spec, 0.5) == doctest::Approx(2.0));
  CHECK(uniform_tube_field(spec, 1.5) == 0.0);
  CHECK_THROWS_AS(tube_potential(TubeSpec<double>{0.5, 0.0, 0.0}, out), DomainError);

  SUBCASE("curl: B = 4g/R^2 inside, zero outside") {
    auto A = [&](const Vec3d& r) { return tube_potential(spec, r); };
    CHECK(curl(A, Vec3d(0.2, 0.3, 0)).z() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(curl(A, Vec3d(2.2, -1.3, 0)).norm() < 1e-9);
  }

  SUBCASE("continuous at the tube wall") {
    const Vec3d in(1.0 - 1e-12, 0, 0), o(1.0 + 1e-12, 0, 0);
    CHECK((tube_potential(spec, in) - tube_potential(spec, o)).norm() < 1e-10);
  }

  CHECK(uniform_tube_total_flux(spec) == doctest::Approx(4 * kPi * 0.5).epsilon(1e-13));
  CHECK(uniform_tube_total_flux({1.3, 0.2, 0.0}) == doctest::Approx(4 * kPi * 1.3).epsilon(1e-13));
}

TEST_CASE("proca_tube_profile") {
  SUBCASE("K0 against its integral representation") {
    for (double x : {0.05, 0.5, 1.0, 3.0, 10.0, 30.0}) {
      const double k0 = proca_tube_profile(1.0, 1.0, x) / 2.0;
      CHECK(k0 == doctest::Approx(k0_oracle(x)).epsilon(1e-12));
    }
    const double ratio = proca_tube_profile(1.0, 1.0, 1.0) / proca_tube_profile(1.0, 1.0, 3.0);
    CHECK(ratio == doctest::Approx(k0_oracle(1.0) / k0_oracle(3.0)).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(12.12).epsilon(1e-3));
  }

  CHECK(proca_tube_profile(0.0, 2.0, 0.7) == 0.0);
  CHECK_THROWS_AS(proca_tube_profile(1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(proca_tube_profile(1.0, 1.0, 0.0), DomainError);

  SUBCASE("total flux is 4 pi g for any mass") {
    for (double g : {0.5, 1.0, -0.25})
      for (double mu : {0.1, 1.0, 2.0, 25.0})
        CHECK(std::abs(proca_tube_total_flux(g, mu) / (4 * kPi * g) - 1.0) < 1e-9);
  }

  SUBCASE("decays exponentially with radius") {
    const double a = proca_tube_profile(1.0, 2.0, 5.0), b = proca_tube_profile(1.0, 2.0, 6.0);
    CHECK(b / a == doctest::Approx(std::exp(-2.0) * std::sqrt(5.0 / 6.0)).epsilon(0.02));
  }
}

TEST_CASE("proca_dispersion") {
  CHECK(proca_dispersion(0.0, 2.0) == 2.0);
  CHECK(proca_dispersion(3.0, 4.0) == 5.0);
  CHECK(proca_dispersion(1.0, 0.0) == 1.0);
  CHECK_THROWS_AS(proca_dispersion(-1.0, 0.0), DomainError);
  CHECK_THROWS_AS(proca_dispersion(1.0, -1.0), DomainError);
}

TEST_CASE("PhysicalConfig validation") {
  CHECK_THROWS_AS((PhysicalConfig<double>{1, 1, -1}.validate()), DomainError);
  CHECK_THROWS_AS((PhysicalConfig<double>{NAN, 1, 0}.validate()), DomainError);
  CHECK_NOTHROW((PhysicalConfig<double>{1, 1, 0}.validate()));
}
