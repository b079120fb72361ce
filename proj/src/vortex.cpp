#include "dirac/vortex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>

#include "dirac/errors.hpp"
#include "dirac/gauge.hpp"

namespace dirac {

namespace {

constexpr double kPi = std::numbers::pi;

// Discrete dimensionless functional E~/(2 pi) on grid s with fixed endpoints.
// Interval terms use midpoints, node terms trapezoid weights; node 0 sits at
// s = 0 where f = 0 makes its node terms vanish.
struct Functional {
  const Eigen::VectorXd& s;
  int n;
  double beta;

  double h(Eigen::Index k) const { return s(k + 1) - s(k); }
  double mid(Eigen::Index k) const { return 0.5 * (s(k) + s(k + 1)); }
  double weight(Eigen::Index i) const {
    const auto last = s.size() - 1;
    if (i == 0) return 0.5 * h(0);
    if (i == last) return 0.5 * h(last - 1);
    return 0.5 * (h(i - 1) + h(i));
  }

  double energy(const Eigen::VectorXd& f, const Eigen::VectorXd& a) const {
    const double n2 = double(n) * n;
    std::vector<double> parts;
    parts.reserve(static_cast<std::size_t>(2 * s.size()));
    for (Eigen::Index k = 0; k + 1 < s.size(); ++k) {
      const double df = f(k + 1) - f(k), da = a(k + 1) - a(k);
      parts.push_back(mid(k) * df * df / h(k) + n2 * da * da / (2.0 * mid(k) * h(k)));
    }
    for (Eigen::Index i = 1; i < s.size(); ++i) {
      const double one_minus = 1.0 - f(i) * f(i);
      parts.push_back(weight(i) * (n2 * f(i) * f(i) * (1.0 - a(i)) * (1.0 - a(i)) / s(i) +
                                   0.5 * beta * s(i) * one_minus * one_minus));
    }
    return pairwise_sum<double>(parts);
  }

  // Gradient with respect to interior unknowns, interleaved (f_i, a_i).
  Eigen::VectorXd gradient(const Eigen::VectorXd& f, const Eigen::VectorXd& a) const {
    const auto N = s.size() - 1;
    const double n2 = double(n) * n;
    Eigen::VectorXd g(2 * (N - 1));
    for (Eigen::Index i = 1; i < N; ++i) {
      const double w = weight(i), si = s(i), om = 1.0 - a(i);
      const double gf = 2.0 * mid(i - 1) * (f(i) - f(i - 1)) / h(i - 1) - 2.0 * mid(i) * (f(i + 1) - f(i)) / h(i) +
                        w * (2.0 * n2 * f(i) * om * om / si - 2.0 * beta * si * f(i) * (1.0 - f(i) * f(i)));
      const double ga = n2 * (a(i) - a(i - 1)) / (mid(i - 1) * h(i - 1)) - n2 * (a(i + 1) - a(i)) / (mid(i) * h(i)) -
                        w * 2.0 * n2 * f(i) * f(i) * om / si;
      g(2 * (i - 1)) = gf;
      g(2 * (i - 1) + 1) = ga;
    }
    return g;
  }

  Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& f, const Eigen::VectorXd& a) const {
    const auto N = s.size() - 1;
    const double n2 = double(n) * n;
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(10 * N));
    for (Eigen::Index i = 1; i < N; ++i) {
      const auto fi = 2 * (i - 1), ai = fi + 1;
      const double w = weight(i), si = s(i), om = 1.0 - a(i);
      t.emplace_back(fi, fi,
                     2.0 * mid(i - 1) / h(i - 1) + 2.0 * mid(i) / h(i) +
                         w * (2.0 * n2 * om * om / si - 2.0 * beta * si * (1.0 - 3.0 * f(i) * f(i))));
      t.emplace_back(ai, ai, n2 / (mid(i - 1) * h(i - 1)) + n2 / (mid(i) * h(i)) + w * 2.0 * n2 * f(i) * f(i) / si);
      const double cross = -w * 4.0 * n2 * f(i) * om / si;
      t.emplace_back(fi, ai, cross);
      t.emplace_back(ai, fi, cross);
      if (i + 1 < N) {
        t.emplace_back(fi, fi + 2, -2.0 * mid(i) / h(i));
        t.emplace_back(fi + 2, fi, -2.0 * mid(i) / h(i));
        t.emplace_back(ai, ai + 2, -n2 / (mid(i) * h(i)));
        t.emplace_back(ai + 2, ai, -n2 / (mid(i) * h(i)));
      }
    }
    Eigen::SparseMatrix<double> H(2 * (N - 1), 2 * (N - 1));
    H.setFromTriplets(t.begin(), t.end());
    return H;
  }

  // Diagonal that turns gradient entries into pointwise Euler-Lagrange defects.
  Eigen::VectorXd defect_scale() const {
    const auto N = s.size() - 1;
    Eigen::VectorXd m(2 * (N - 1));
    for (Eigen::Index i = 1; i < N; ++i) {
      m(2 * (i - 1)) = 2.0 * weight(i) * s(i);
      m(2 * (i - 1) + 1) = weight(i) * double(n) * n / s(i);
    }
    return m;
  }
};

Eigen::VectorXd every_other(const Eigen::VectorXd& x) {
  const auto N = x.size() - 1;
  std::vector<double> out;
  for (Eigen::Index i = 0; i <= N; i += 2) out.push_back(x(i));
  if (N % 2 == 1) out.push_back(x(N));
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

void HiggsModel::validate() const {
  if (q == 0.0 || !std::isfinite(q)) throw DomainError("HiggsModel: charge must be non-zero");
  if (!(v > 0.0)) throw DomainError("HiggsModel: vev must be > 0");
  if (!(lambda > 0.0)) throw DomainError("HiggsModel: quartic coupling must be > 0");
}

double HiggsModel::vector_mass() const { return photon_mass_of(*this); }

double HiggsModel::scalar_mass() const { return std::sqrt(lambda) * v; }

double HiggsModel::correlation_length() const { return std::max(1.0 / scalar_mass(), 1.0 / vector_mass()); }

PhysicalConfig<double> HiggsModel::physical_config(double charge, double pole) const {
  return {charge, pole, vector_mass()};
}

double photon_mass_of(const HiggsModel& model) { return std::sqrt(2.0) * std::abs(model.q) * model.v; }

void to_json(nlohmann::json& j, const TensionResult& t) {
  j = nlohmann::json{{"T", t.T}, {"bogomolny_ratio", t.bogomolny_ratio}, {"converged", t.converged},
                     {"residual", t.residual}};
}

Eigen::VectorXd vortex_grid(double r_max, int points, double stretch) {
  if (points < 3 || !(r_max > 0.0)) throw DomainError("vortex_grid: need >= 3 points and r_max > 0");
  Eigen::VectorXd rho(points);
  if (!(stretch >= 0.0)) throw DomainError("vortex_grid: stretch must be >= 0");
  if (stretch == 0.0) return Eigen::VectorXd::LinSpaced(points, 0.0, r_max);
  const double denom = std::expm1(stretch);
  for (int i = 0; i < points; ++i) rho(i) = r_max * std::expm1(stretch * i / (points - 1)) / denom;
  return rho;
}

double vortex_energy(const HiggsModel& model, const VortexProfile& profile) {
  model.validate();
  const auto size = profile.rho.size();
  if (size < 3 || profile.f.size() != size || profile.a.size() != size)
    throw DomainError("vortex_energy: profile arrays must share a length >= 3");
  const double scale = model.q * model.v;
  auto evaluate = [&](const Eigen::VectorXd& rho, const Eigen::VectorXd& f, const Eigen::VectorXd& a) {
    const Eigen::VectorXd s = std::abs(scale) * rho;
    return 2.0 * kPi * model.v * model.v * Functional{s, profile.n, model.beta()}.energy(f, a);
  };
  const double fine = evaluate(profile.rho, profile.f, profile.a);
  const double coarse = evaluate(every_other(profile.rho), every_other(profile.f), every_other(profile.a));
  const double err = std::abs(fine - coarse) / 3.0;
  if (!std::isfinite(fine) || !(err <= 0.01 * std::abs(fine)))
    throw AccuracyError("vortex_energy: estimated quadrature error " + std::to_string(err) + " exceeds 1%");
  return fine;
}

VortexSolution solve_vortex(const HiggsModel& model, int n, double r_max, int grid, double tol) {
  model.validate();
  if (n <= 0) throw DomainError("solve_vortex: winding must be >= 1");
  if (r_max < 10.0 * model.correlation_length())
    throw DomainError("solve_vortex: r_max must cover at least 10 correlation lengths");
  if (grid < 512) throw DomainError("solve_vortex: grid must have at least 512 points");

  const double scale = std::abs(model.q) * model.v;
  const Eigen::VectorXd rho = vortex_grid(r_max, grid);
  const Eigen::VectorXd s = scale * rho;
  const Functional F{s, n, model.beta()};
  const auto N = s.size() - 1;

  Eigen::VectorXd f(N + 1), a(N + 1);
  for (Eigen::Index i = 0; i <= N; ++i) {
    const double t = std::tanh(s(i));
    f(i) = std::pow(t, n);
    a(i) = t * t;
  }
  f(N) = a(N) = 1.0;

  const Eigen::VectorXd mass = F.defect_scale();
  auto defect = [&](const Eigen::VectorXd& grad) { return (grad.array() / mass.array()).abs().maxCoeff(); };

  Eigen::VectorXd grad = F.gradient(f, a);
  double res = defect(grad);
  double energy = F.energy(f, a);
  std::vector<double> history{res};
  double dtau = 0.1;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int iter = 0; iter < 400 && res > tol; ++iter) {
    Eigen::SparseMatrix<double> J = F.hessian(f, a);
    for (Eigen::Index k = 0; k < J.rows(); ++k) J.coeffRef(k, k) += mass(k) / dtau;
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      dtau *= 0.25;
      continue;
    }
    const Eigen::VectorXd step = lu.solve(-grad);
    Eigen::VectorXd f_new = f, a_new = a;
    for (Eigen::Index i = 1; i < N; ++i) {
      f_new(i) += step(2 * (i - 1));
      a_new(i) += step(2 * (i - 1) + 1);
    }
    const double e_new = F.energy(f_new, a_new);
    const Eigen::VectorXd g_new = F.gradient(f_new, a_new);
    const double r_new = defect(g_new);
    if (std::isfinite(e_new) && (e_new <= energy + 1e-14 * std::abs(energy) || r_new < res)) {
      f.swap(f_new);
      a.swap(a_new);
      grad = g_new;
      energy = e_new;
      res = r_new;
      dtau = std::min(dtau * 4.0, 1e12);
    } else {
      dtau *= 0.25;
      if (dtau < 1e-12) break;
    }
    history.push_back(res);
  }

  VortexSolution sol;
  sol.profile = {n, rho, f, a, model.beta()};
  sol.residual_history = history;
  sol.tension.residual = res;
  sol.tension.converged = res <= tol;
  sol.tension.T = 2.0 * kPi * model.v * model.v * energy;
  sol.tension.bogomolny_ratio = sol.tension.T / (2.0 * kPi * model.v * model.v * n);
  if (!sol.tension.converged)
    throw ConvergenceError("solve_vortex: Euler-Lagrange residual " + std::to_string(res) + " above tolerance",
                           sol.tension.T, history);
  return sol;
}

VortexSolution solve_vortex(const HiggsModel& model, int n) {
  model.validate();
  return solve_vortex(model, n, 20.0 * model.correlation_length());
}

Eigen::VectorXd vortex_magnetic_field(const HiggsModel& model, const VortexProfile& p) {
  const auto size = p.rho.size();
  Eigen::VectorXd B(size);
  for (Eigen::Index i = 1; i + 1 < size; ++i) {
    // Three-point derivative on the non-uniform grid.
    const double h0 = p.rho(i) - p.rho(i - 1), h1 = p.rho(i + 1) - p.rho(i);
    const double da = (p.a(i + 1) * h0 * h0 - p.a(i - 1) * h1 * h1 + p.a(i) * (h1 * h1 - h0 * h0)) / (h0 * h1 * (h0 + h1));
    B(i) = p.n * da / (model.q * p.rho(i));
  }
  // a ~ c rho^2 at the core, so B(0) = 2 n c / q.
  B(0) = 2.0 * p.n * p.a(1) / (model.q * p.rho(1) * p.rho(1));
  const auto L = size - 1;
  B(L) = p.n * (p.a(L) - p.a(L - 1)) / ((p.rho(L) - p.rho(L - 1)) * model.q * p.rho(L));
  return B;
}

Eigen::VectorXd vortex_energy_density(const HiggsModel& model, const VortexProfile& p) {
  const auto size = p.rho.size();
  const Eigen::VectorXd B = vortex_magnetic_field(model, p);
  const double v2 = model.v * model.v;
  Eigen::VectorXd e(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const Eigen::Index lo = i == 0 ? 0 : i - 1, hi = i + 1 == size ? i : i + 1;
    const double df = (p.f(hi) - p.f(lo)) / (p.rho(hi) - p.rho(lo));
    const double gauge = i == 0 ? 0.0 : p.n * p.f(i) * (1.0 - p.a(i)) / p.rho(i);
    const double pot = p.f(i) * p.f(i) - 1.0;
    e(i) = v2 * df * df + v2 * gauge * gauge + 0.5 * B(i) * B(i) + 0.25 * model.lambda * v2 * v2 * pot * pot;
  }
  return e;
}

double vortex_flux(const HiggsModel& model, const VortexProfile& p) {
  const double R = p.rho(p.rho.size() - 1);
  const double a_edge = p.a(p.a.size() - 1);
  const VectorPotential A = [&](const Vec3d& r) -> Vec3d {
    const double rho = std::hypot(r.x(), r.y());
    return p.n * a_edge / (model.q * rho) * azimuthal_unit(r);
  };
  const auto loop = [&](int m) { return LoopPath::horizontal_circle(0.0, 0.0, 0.0, R, m); };
  return refined_loop_holonomy(A, loop, 1.0, 64, 3).flux;
}

double confinement_energy(const TensionResult& tension, double L) {
  if (L < 0.0) throw DomainError("confinement_energy: separation must be >= 0");
  return tension.T * L;
}

}  // namespace dirac
