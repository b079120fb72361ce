#include "dirac/gauge.hpp"

#include <cmath>

namespace dirac {

namespace {

double polar_angle(const Vec3d& r) { return std::atan2(std::hypot(r.x(), r.y()), r.z()); }

}  // namespace

bool GaugePatch::contains(const Vec3d& r) const {
  const double theta = polar_angle(r);
  return theta >= theta_min && theta <= theta_max;
}

Vec3d GaugePatch::potential(double g, const Vec3d& r) const {
  if (!contains(r)) throw DomainError("GaugePatch: point outside the patch domain");
  return wu_yang_potential(which, g, r);
}

bool in_overlap_band(const Vec3d& r) {
  return GaugePatch::north().contains(r) && GaugePatch::south().contains(r);
}

Complex transition_function(double q, double g, double phi) { return std::polar(1.0, 2.0 * q * g * phi); }

void to_json(nlohmann::json& j, const QuantizationReport& r) {
  j = nlohmann::json{{"n_real", r.n_real}, {"n_nearest", r.n_nearest}, {"residual", r.residual},
                     {"satisfied", r.satisfied}};
}

void from_json(const nlohmann::json& j, QuantizationReport& r) {
  j.at("n_real").get_to(r.n_real);
  j.at("n_nearest").get_to(r.n_nearest);
  j.at("residual").get_to(r.residual);
  j.at("satisfied").get_to(r.satisfied);
}

QuantizationReport check_quantization(double q, double g, double tol) {
  if (!(tol > 0.0)) throw DomainError("check_quantization: tolerance must be > 0");
  QuantizationReport rep;
  rep.n_real = 2.0 * q * g;
  const double nearest = std::nearbyint(rep.n_real);
  rep.n_nearest = static_cast<long long>(nearest);
  rep.residual = std::abs(rep.n_real - nearest);
  rep.satisfied = rep.residual <= tol;
  return rep;
}

double phase_tolerance(double winding_tol) {
  if (!(winding_tol > 0.0)) throw DomainError("phase_tolerance: tolerance must be > 0");
  return winding_tol >= 0.5 ? 2.0 : 2.0 * std::sin(std::numbers::pi * winding_tol);
}

bool string_invisibility(double q, double g, double tol) {
  const Complex holonomy = std::polar(1.0, q * 4.0 * std::numbers::pi * g);
  return std::abs(holonomy - 1.0) <= phase_tolerance(tol);
}

Vec3d patch_mismatch(double g, const Vec3d& point) {
  if (!in_overlap_band(point)) throw DomainError("patch_mismatch: point outside the equatorial overlap band");
  return wu_yang_potential(Patch::North, g, point) - wu_yang_potential(Patch::South, g, point);
}

LoopPath::LoopPath(std::vector<Vec3d> vertices, int orientation)
    : vertices_(std::move(vertices)), orientation_(orientation >= 0 ? 1 : -1) {
  if (vertices_.size() < 4) throw DomainError("LoopPath: need at least 3 distinct vertices plus closure");
  if ((vertices_.front() - vertices_.back()).norm() != 0.0)
    throw DomainError("LoopPath: first and last vertex must coincide");
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
    if (!vertices_[i].allFinite()) throw DomainError("LoopPath: non-finite vertex");
}

LoopPath LoopPath::polar_circle(double r, double theta, int n) {
  if (n < 3) throw DomainError("LoopPath::polar_circle: n must be >= 3");
  std::vector<Vec3d> v;
  v.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) v.push_back(from_spherical(r, theta, 2.0 * std::numbers::pi * k / n));
  v.push_back(v.front());
  return LoopPath(std::move(v));
}

LoopPath LoopPath::horizontal_circle(double cx, double cy, double z, double rho, int n) {
  if (n < 3) throw DomainError("LoopPath::horizontal_circle: n must be >= 3");
  std::vector<Vec3d> v;
  v.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n;
    v.emplace_back(cx + rho * std::cos(phi), cy + rho * std::sin(phi), z);
  }
  v.push_back(v.front());
  return LoopPath(std::move(v));
}

LoopPath LoopPath::rectangle(double x0, double y0, double x1, double y1, double z) {
  return LoopPath({Vec3d(x0, y0, z), Vec3d(x1, y0, z), Vec3d(x1, y1, z), Vec3d(x0, y1, z), Vec3d(x0, y0, z)});
}

LoopPath LoopPath::reversed() const {
  std::vector<Vec3d> v(vertices_.rbegin(), vertices_.rend());
  return LoopPath(std::move(v), orientation_);
}

LineIntegral loop_line_integral(const VectorPotential& potential, const LoopPath& loop, int order, int panels) {
  const GaussRule rule = gauss_legendre(order);
  const auto& v = loop.vertices();
  // Gauss nodes never land on a vertex; probe them so singular corners are reported.
  for (const auto& x : v) (void)potential(x);
  std::vector<double> coarse(loop.segments()), fine(loop.segments());
  for (std::size_t s = 0; s < loop.segments(); ++s) {
    const Vec3d a = v[s], b = v[s + 1];
    const Vec3d tangent = b - a;
    auto along = [&](double t) { return potential(a + t * tangent).dot(tangent); };
    coarse[s] = composite_gauss(along, 0.0, 1.0, rule, panels);
    fine[s] = composite_gauss(along, 0.0, 1.0, rule, 2 * panels);
  }
  const double c = pairwise_sum<double>(coarse);
  const double f = pairwise_sum<double>(fine);
  return {loop.orientation() * f, std::abs(f - c)};
}

Holonomy loop_holonomy(const VectorPotential& potential, const LoopPath& loop, double q) {
  const LineIntegral li = loop_line_integral(potential, loop);
  return {std::polar(1.0, q * li.value), li.value, li.error};
}

Holonomy refined_loop_holonomy(const VectorPotential& potential, const std::function<LoopPath(int)>& polygon,
                               double q, int n0, int levels) {
  if (levels < 1) throw DomainError("refined_loop_holonomy: levels must be >= 1");
  // Neville-style table in h = 1/n^2; each column removes one more even power.
  std::vector<std::vector<double>> table(static_cast<std::size_t>(levels));
  double quad_err = 0.0;
  for (int k = 0; k < levels; ++k) {
    const LineIntegral li = loop_line_integral(potential, polygon(n0 << k));
    quad_err = std::max(quad_err, li.error);
    table[k].push_back(li.value);
    for (int j = 1; j <= k; ++j) {
      const double factor = std::pow(4.0, j);
      table[k].push_back(table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (factor - 1.0));
    }
  }
  const double best = table.back().back();
  double err = quad_err;
  if (levels > 1) err += std::abs(best - table[levels - 2].back());
  return {std::polar(1.0, q * best), best, err};
}

double higgs_covariant_residual(double q, const ScalarSamples& lambda, double H0) {
  const auto& L = lambda.values;
  if (L.rows() < 3 || L.cols() < 3 || !(lambda.h > 0.0))
    throw DomainError("higgs_covariant_residual: need a grid of at least 3x3 samples with h > 0");
  const Complex iq(0.0, q);
  auto H = [&](Eigen::Index i, Eigen::Index j) { return H0 * std::exp(iq * L(i, j)); };
  const double inv2h = 0.5 / lambda.h;
  double worst = 0.0;
  for (Eigen::Index j = 1; j + 1 < L.cols(); ++j) {
    for (Eigen::Index i = 1; i + 1 < L.rows(); ++i) {
      const double ax = (L(i + 1, j) - L(i - 1, j)) * inv2h;
      const double ay = (L(i, j + 1) - L(i, j - 1)) * inv2h;
      const Complex h0 = H(i, j);
      const Complex dx = (H(i + 1, j) - H(i - 1, j)) * inv2h - iq * ax * h0;
      const Complex dy = (H(i, j + 1) - H(i, j - 1)) * inv2h - iq * ay * h0;
      worst = std::max(worst, std::sqrt(std::norm(dx) + std::norm(dy)));
    }
  }
  return worst;
}

}  // namespace dirac
