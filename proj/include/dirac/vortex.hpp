#pragma once

// Straight Nielsen-Olesen / Abrikosov flux tubes of the Abelian Higgs model.
//
// Ansatz: H = v f(rho) e^{i n phi}, A_phi = n a(rho) / (q rho). The tension is
//   E/L = 2 pi Int rho drho [ v^2 f'^2 + v^2 n^2 f^2 (1-a)^2 / rho^2
//                             + n^2 a'^2 / (2 q^2 rho^2) + (lambda/4) v^4 (f^2-1)^2 ]
// with m_V^2 = 2 q^2 v^2, m_H^2 = lambda v^2 and beta = m_H^2 / m_V^2.
// Internally the solver works in s = q v rho, where E/L = v^2 * E~(beta, n).

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <vector>

#include "dirac/fields.hpp"

namespace dirac {

struct HiggsModel {
  double q = 1.0;       // Higgs charge
  double v = 1.0;       // vacuum expectation value
  double lambda = 2.0;  // quartic coupling

  void validate() const;
  double beta() const { return lambda / (2.0 * q * q); }
  double vector_mass() const;
  double scalar_mass() const;
  /// Longest correlation length, max(1/m_H, 1/m_V).
  double correlation_length() const;
  /// Fields-module configuration whose photon mass is this model's vector mass.
  PhysicalConfig<double> physical_config(double charge, double pole) const;
};

/// Vector boson mass sqrt(2) |q| v.
double photon_mass_of(const HiggsModel& model);

struct VortexProfile {
  int n = 1;
  Eigen::VectorXd rho;  // physical radius, rho(0) = 0
  Eigen::VectorXd f;
  Eigen::VectorXd a;
  double beta = 1.0;
};

struct TensionResult {
  double T = 0.0;
  double bogomolny_ratio = 0.0;  // T / (2 pi v^2 |n|)
  bool converged = false;
  double residual = 0.0;         // max Euler-Lagrange defect, dimensionless
};

void to_json(nlohmann::json& j, const TensionResult& t);

struct VortexSolution {
  VortexProfile profile;
  TensionResult tension;
  std::vector<double> residual_history;
};

/// Tension of a profile by the second-order discretization used by the solver.
/// Throws AccuracyError when halving the grid moves the estimate by > 1%.
double vortex_energy(const HiggsModel& model, const VortexProfile& profile);

/// Radially stretched grid on [0, r_max], finest near the core.
Eigen::VectorXd vortex_grid(double r_max, int points, double stretch = 3.0);

/// Minimizes the tension with f(0) = a(0) = 0 and f = a = 1 at r_max by
/// implicit gradient flow whose step grows into Newton. r_max must cover ten
/// correlation lengths and the grid at least 512 points.
VortexSolution solve_vortex(const HiggsModel& model, int n, double r_max, int grid = 1024, double tol = 1e-10);

/// Solve with r_max = 20 correlation lengths.
VortexSolution solve_vortex(const HiggsModel& model, int n);

/// B_z(rho) = n a'(rho) / (q rho).
Eigen::VectorXd vortex_magnetic_field(const HiggsModel& model, const VortexProfile& profile);

/// Energy per unit area at each grid node.
Eigen::VectorXd vortex_energy_density(const HiggsModel& model, const VortexProfile& profile);

/// Loop integral of A on the circle rho = r_max (2 pi n / q when a(r_max) = 1).
double vortex_flux(const HiggsModel& model, const VortexProfile& profile);

/// Energy T * L of a string of length L joining a pole to its antipole.
double confinement_energy(const TensionResult& tension, double L);

}  // namespace dirac
