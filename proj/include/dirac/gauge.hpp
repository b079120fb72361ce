#pragma once

// Patch transition functions, the quantization predicate, loop holonomies and
// the covariant-derivative check for a pure-gauge Higgs configuration.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "dirac/errors.hpp"
#include "dirac/fields.hpp"
#include "dirac/quadrature.hpp"

namespace dirac {

using Complex = std::complex<double>;
using VectorPotential = std::function<Vec3d(const Vec3d&)>;

inline constexpr double kDefaultQuantizationTol = 1e-9;
/// Half width of the equatorial overlap band of the two Wu-Yang patches.
inline constexpr double kOverlapHalfWidth = 0.3;

/// A Wu-Yang patch and the polar-angle interval on which it is used.
struct GaugePatch {
  Patch which;
  double theta_min;
  double theta_max;

  static GaugePatch north() { return {Patch::North, 0.0, std::numbers::pi / 2 + kOverlapHalfWidth}; }
  static GaugePatch south() { return {Patch::South, std::numbers::pi / 2 - kOverlapHalfWidth, std::numbers::pi}; }

  bool contains(const Vec3d& r) const;
  Vec3d potential(double g, const Vec3d& r) const;
};

bool in_overlap_band(const Vec3d& r);

/// e^{i 2qg phi}: the gauge function relating the two patches for charge q.
Complex transition_function(double q, double g, double phi);

struct QuantizationReport {
  double n_real = 0.0;
  long long n_nearest = 0;
  double residual = 0.0;
  bool satisfied = false;
};

void to_json(nlohmann::json& j, const QuantizationReport& r);
void from_json(const nlohmann::json& j, QuantizationReport& r);

/// Dirac condition 2qg in Z, to `tol` in units of the winding number.
QuantizationReport check_quantization(double q, double g, double tol = kDefaultQuantizationTol);

/// Chord distance |e^{2 pi i t} - 1| matching a winding tolerance t. Phase
/// predicates compare against this so that all formulations share one cutoff.
double phase_tolerance(double winding_tol);

/// Whether the full string flux 4*pi*g is invisible to charge q.
bool string_invisibility(double q, double g, double tol = kDefaultQuantizationTol);

/// A_north - A_south on the overlap band; equals grad(2 g phi).
Vec3d patch_mismatch(double g, const Vec3d& point);

/// Closed polyline, first vertex repeated at the end.
class LoopPath {
 public:
  explicit LoopPath(std::vector<Vec3d> vertices, int orientation = 1);

  /// Circle of polar angle theta on the sphere of radius r about the origin,
  /// counterclockwise about +z.
  static LoopPath polar_circle(double r, double theta, int n);
  /// Horizontal circle of radius rho around (cx, cy) at height z.
  static LoopPath horizontal_circle(double cx, double cy, double z, double rho, int n);
  /// Counterclockwise axis-aligned rectangle in the plane z = const.
  static LoopPath rectangle(double x0, double y0, double x1, double y1, double z);

  const std::vector<Vec3d>& vertices() const noexcept { return vertices_; }
  int orientation() const noexcept { return orientation_; }
  std::size_t segments() const noexcept { return vertices_.size() - 1; }
  LoopPath reversed() const;

 private:
  std::vector<Vec3d> vertices_;
  int orientation_;
};

struct LineIntegral {
  double value = 0.0;
  double error = 0.0;
};

/// Orientation-signed integral of A along the polyline. Each segment uses
/// composite Gauss-Legendre panels; the estimate is the difference against the
/// half-panel rule.
LineIntegral loop_line_integral(const VectorPotential& potential, const LoopPath& loop, int order = 10, int panels = 2);

struct Holonomy {
  Complex phase{1.0, 0.0};
  double flux = 0.0;  // loop integral of A
  double error = 0.0;
};

Holonomy loop_holonomy(const VectorPotential& potential, const LoopPath& loop, double q);

/// Holonomy of a smooth closed curve approximated by polygons of n0 * 2^k
/// vertices, k < levels, Richardson-extrapolated in 1/n^2.
Holonomy refined_loop_holonomy(const VectorPotential& potential, const std::function<LoopPath(int)>& polygon,
                               double q, int n0 = 64, int levels = 4);

/// Samples of a gauge scalar on a square grid, values(i, j) at (x0 + i h, y0 + j h).
struct ScalarSamples {
  Eigen::ArrayXXd values;
  double h = 0.0;
};

/// max |(grad - i q grad Lambda) H| over interior samples, H = H0 e^{i q Lambda},
/// all derivatives by central differences.
double higgs_covariant_residual(double q, const ScalarSamples& lambda, double H0);

}  // namespace dirac
