#include "dirac/angmom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dirac/errors.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

namespace {

constexpr double kPi = std::numbers::pi;

// Modified spherical Bessel i1 with a series near the origin.
double sph_i1(double x) {
  if (std::abs(x) < 1e-3) return x / 3.0 + x * x * x / 30.0;
  return (x * std::cosh(x) - std::sinh(x)) / (x * x);
}

// Exact contribution of r > R along the charge-to-pole axis: outside the
// charge only the dipole multipole survives the polar integral, giving
// 2 q g i1(mu d) k0(mu R) with k0(x) = e^-x / x (limit 2 q g d / 3R at mu = 0).
double analytic_tail(const PairConfig& p, double R) {
  if (p.mu == 0.0) return 2.0 * p.q * p.g * p.d / (3.0 * R);
  const double x = p.mu * R;
  return 2.0 * p.q * p.g * sph_i1(p.mu * p.d) * std::exp(-x) / x;
}

// Axial angular momentum density integrated over azimuth, at (r, theta),
// projected on the charge-to-pole axis (-z).
double axial_density(const PairConfig& p, double r, double theta) {
  const Vec3d point(r * std::sin(theta), 0.0, r * std::cos(theta));
  const double jz = point.cross(field_momentum_density(p, point)).z();
  return -jz * 2.0 * kPi * r * r * std::sin(theta);
}

// Polar angle below which (r, theta) lies inside the charge's exclusion ball.
double exclusion_theta(const PairConfig& p, double r, double eps) {
  if (std::abs(r - p.d) >= eps) return 0.0;
  const double c = (r * r + p.d * p.d - eps * eps) / (2.0 * r * p.d);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

struct Integral {
  double value;
  double error;
  bool converged;
};

Integral integrate_region(const PairConfig& p, double eps, double r_max, double abs_tol) {
  bool inner_ok = true;
  double inner_err = 0.0;
  auto radial = [&](double r) {
    const double lo = exclusion_theta(p, r, eps);
    auto polar = [&](double theta) { return axial_density(p, r, theta); };
    const auto res = integrate_adaptive(polar, lo, kPi, abs_tol * 1e-3 / r_max, 1e-12, 4000);
    inner_ok = inner_ok && res.converged;
    inner_err = std::max(inner_err, res.error);
    return res.value;
  };
  // Break the radial range where the exclusion ball begins and ends.
  const std::vector<double> knots{eps, p.d - eps, p.d, p.d + eps, std::min(4.0 * p.d, r_max), r_max};
  double value = 0.0, error = 0.0;
  bool converged = true;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    if (knots[k + 1] <= knots[k]) continue;
    const auto res = integrate_adaptive(radial, knots[k], knots[k + 1], abs_tol / 8.0, 1e-12, 4000);
    value += res.value;
    error += res.error;
    converged = converged && res.converged;
  }
  return {value, error + inner_err * r_max, converged && inner_ok};
}

}  // namespace

void PairConfig::validate() const {
  if (!std::isfinite(q) || !std::isfinite(g) || !std::isfinite(d) || !std::isfinite(mu))
    throw DomainError("PairConfig: non-finite parameter");
  if (!(d > 0.0)) throw DomainError("PairConfig: separation must be > 0");
  if (mu < 0.0) throw DomainError("PairConfig: photon mass must be >= 0");
}

void QuadratureSpec::validate(const PairConfig& pair) const {
  if (!(eps_exclusion > 0.0 && eps_exclusion < pair.d / 4.0))
    throw DomainError("QuadratureSpec: need 0 < eps_exclusion < d/4");
  if (!(r_max > 4.0 * pair.d)) throw DomainError("QuadratureSpec: need r_max > 4 d");
  if (!(target_tol > 0.0)) throw DomainError("QuadratureSpec: target_tol must be > 0");
  if (refinements < 2) throw DomainError("QuadratureSpec: need at least 2 refinement levels");
}

QuadratureSpec default_quadrature(const PairConfig& pair) {
  return {pair.d / 8.0 * std::min(1.0, 1.0 / (pair.mu * pair.d)), 20.0 * pair.d, 1e-6, 4};
}

Vec3d field_momentum_density(const PairConfig& pair, const Vec3d& r, double eps_exclusion) {
  const Vec3d charge_pos(0.0, 0.0, pair.d);
  const Vec3d from_charge = r - charge_pos;
  if (r.norm() <= eps_exclusion || from_charge.norm() <= eps_exclusion)
    throw SingularPointError("field_momentum_density: point inside an exclusion ball");
  const PhysicalConfig<double> cfg{pair.q, pair.g, pair.mu};
  const Vec3d E = yukawa_electric_field(cfg, from_charge);
  const Vec3d B = monopole_field(cfg, r);
  return E.cross(B) / (4.0 * kPi);
}

AngularMomentum field_angular_momentum(const PairConfig& pair, const QuadratureSpec& quad) {
  pair.validate();
  quad.validate(pair);
  const double scale = std::abs(pair.q * pair.g);
  AngularMomentum out;
  if (scale == 0.0) {
    out.by_eps.assign(static_cast<std::size_t>(quad.refinements), 0.0);
    return out;
  }
  const double budget = quad.target_tol * scale;

  // Push r_max out until the tail falls under a tenth of the budget.
  double r_max = quad.r_max;
  if (pair.mu > 0.0)
    while (std::abs(analytic_tail(pair, r_max)) > budget / 10.0 && r_max < 1e6 * pair.d) r_max *= 1.5;
  out.tail = analytic_tail(pair, r_max);

  double quad_err = 0.0;
  bool converged = true;
  std::vector<double> levels;
  double eps = quad.eps_exclusion;
  for (int k = 0; k < quad.refinements; ++k, eps *= 0.5) {
    const Integral res = integrate_region(pair, eps, r_max, budget / 20.0);
    levels.push_back(res.value + out.tail);
    quad_err = std::max(quad_err, res.error);
    converged = converged && res.converged;
  }
  out.by_eps = levels;

  // Ball contributions scale as eps^2, eps^4, eps^5, eps^6, ...: odd orders
  // below five cancel by parity about each source.
  std::vector<std::vector<double>> table{levels};
  for (int col = 1; col < quad.refinements; ++col) {
    const auto& prev = table.back();
    const double factor = std::pow(2.0, col == 1 ? 2 : col + 2);
    std::vector<double> next;
    for (std::size_t i = 1; i < prev.size(); ++i) next.push_back(prev[i] + (prev[i] - prev[i - 1]) / (factor - 1.0));
    table.push_back(std::move(next));
  }
  out.jz = table.back().front();
  const auto& penultimate = table[table.size() - 2];
  out.error = std::abs(out.jz - penultimate.back()) + quad_err;
  if (!converged || out.error > budget)
    throw ConvergenceError("field_angular_momentum: error " + std::to_string(out.error) + " exceeds target " +
                               std::to_string(budget),
                           out.jz);
  return out;
}

Vec3d field_angular_momentum_vector(const PairConfig& pair, const QuadratureSpec& quad, int n_phi) {
  pair.validate();
  quad.validate(pair);
  if (n_phi < 4) throw DomainError("field_angular_momentum_vector: n_phi must be >= 4");
  const double eps = quad.eps_exclusion;
  const double abs_tol = quad.target_tol * std::max(std::abs(pair.q * pair.g), 1e-300);
  Vec3d total = Vec3d::Zero();
  for (int comp = 0; comp < 3; ++comp) {
    auto radial = [&](double r) {
      auto polar = [&](double theta) {
        double s = 0.0;
        for (int k = 0; k < n_phi; ++k) {
          const double phi = 2.0 * kPi * (k + 0.5) / n_phi;
          const Vec3d point = from_spherical(r, theta, phi);
          s += point.cross(field_momentum_density(pair, point))(comp);
        }
        return s * (2.0 * kPi / n_phi) * r * r * std::sin(theta);
      };
      return integrate_adaptive(polar, exclusion_theta(pair, r, eps), kPi, abs_tol * 1e-4, 1e-9, 2000).value;
    };
    const std::vector<double> knots{eps, pair.d - eps, pair.d + eps, quad.r_max};
    for (std::size_t k = 0; k + 1 < knots.size(); ++k)
      total(comp) += integrate_adaptive(radial, knots[k], knots[k + 1], abs_tol, 1e-9, 2000).value;
  }
  // Report along the charge-to-pole axis like field_angular_momentum.
  total.z() = -total.z() + analytic_tail(pair, quad.r_max);
  return total;
}

SweepTable angular_momentum_sweep(double q, double g, const std::vector<double>& mu_list,
                                  const std::vector<double>& d_list, const QuadratureSpec& quad_at_unit_d) {
  if (mu_list.empty() || d_list.empty()) throw DomainError("angular_momentum_sweep: empty sweep list");
  SweepTable t;
  t.mu = mu_list;
  t.d = d_list;
  const auto rows = static_cast<Eigen::Index>(mu_list.size()), cols = static_cast<Eigen::Index>(d_list.size());
  t.jz = Eigen::MatrixXd::Zero(rows, cols);
  t.err = Eigen::MatrixXd::Zero(rows, cols);
  t.converged.setConstant(rows, cols, true);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const PairConfig pair{q, g, d_list[static_cast<std::size_t>(j)], mu_list[static_cast<std::size_t>(i)]};
      pair.validate();
      QuadratureSpec quad = quad_at_unit_d;
      quad.eps_exclusion *= pair.d * std::min(1.0, 1.0 / (pair.mu * pair.d));
      quad.r_max *= pair.d;
      try {
        const auto res = field_angular_momentum(pair, quad);
        t.jz(i, j) = res.jz;
        t.err(i, j) = res.error;
      } catch (const ConvergenceError& e) {
        t.jz(i, j) = e.best_estimate();
        t.err(i, j) = std::numeric_limits<double>::quiet_NaN();
        t.converged(i, j) = false;
      }
    }
  }
  return t;
}

}  // namespace dirac
