#pragma once

// Electromagnetic angular momentum of a charge-pole pair, with the charge's
// field optionally Yukawa-screened by a photon mass.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "dirac/fields.hpp"

namespace dirac {

/// Pole g at the origin, charge q at (0, 0, d).
struct PairConfig {
  double q = 0.0;
  double g = 0.0;
  double d = 1.0;
  double mu = 0.0;

  void validate() const;
};

struct QuadratureSpec {
  double eps_exclusion = 0.0;  // exclusion-ball radius around each source
  double r_max = 0.0;          // outer cutoff before the analytic tail
  double target_tol = 1e-6;    // relative to |q g|
  int refinements = 4;         // eps, eps/2, eps/4, ...

  void validate(const PairConfig& pair) const;
};

/// eps = min(d, 1/mu)/8, r_max = 20 d, target 1e-6, four eps levels.
QuadratureSpec default_quadrature(const PairConfig& pair);

/// (E x B) / 4 pi; singular-point error inside a ball of radius eps_exclusion
/// around either source.
Vec3d field_momentum_density(const PairConfig& pair, const Vec3d& r, double eps_exclusion = 0.0);

struct AngularMomentum {
  double jz = 0.0;     // component along the charge-to-pole axis
  double error = 0.0;  // extrapolation plus quadrature estimate
  double tail = 0.0;   // analytic contribution beyond r_max
  std::vector<double> by_eps;  // raw integrals, one per exclusion radius
};

/// Integrates r x (E x B)/4 pi over space minus the exclusion balls, adds the
/// r > r_max tail analytically and Richardson-extrapolates eps -> 0. Throws
/// ConvergenceError (carrying the estimate) if the error exceeds target_tol |qg|.
AngularMomentum field_angular_momentum(const PairConfig& pair, const QuadratureSpec& quad);

/// Cartesian field angular momentum by an explicit azimuthal rule; used to
/// check that the transverse components vanish. Same axis convention as jz.
Vec3d field_angular_momentum_vector(const PairConfig& pair, const QuadratureSpec& quad, int n_phi = 16);

struct SweepTable {
  std::vector<double> mu;
  std::vector<double> d;
  Eigen::MatrixXd jz;    // rows: mu, cols: d
  Eigen::MatrixXd err;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> converged;

  bool all_converged() const { return converged.all(); }
};

/// Cells that fail to converge hold their best estimate and are flagged.
/// eps scales with min(d, 1/mu) and r_max with d.
SweepTable angular_momentum_sweep(double q, double g, const std::vector<double>& mu_list,
                                  const std::vector<double>& d_list, const QuadratureSpec& quad_at_unit_d);

}  // namespace dirac
